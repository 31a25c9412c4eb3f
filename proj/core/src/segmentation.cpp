#include "mscodec/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mscodec/shepard.hpp"

namespace mscodec {

RegionErrorModel::RegionErrorModel(const Image& f, ReconstructionModel model)
    : image_(&f), model_(std::move(model)) {
  if (is_inpainting(model_.op)) grid_ = grid_bitmap(f.width(), f.height(), model_.grid);
  else grid_.assign(f.pixel_count(), 0);
}

std::vector<Pixel> RegionErrorModel::mask_positions(const RegionView& region) const {
  std::vector<Pixel> out;
  for (const Pixel& p : region.pixels()) {
    if (is_grid_pixel(p.x, p.y)) out.push_back(p);
  }
  return out;
}

MaskData RegionErrorModel::sample_mask(const RegionView& region) const {
  MaskData mask;
  mask.positions = mask_positions(region);
  mask.density = model_.grid.density();
  mask.values.reserve(mask.positions.size());
  for (const Pixel& p : mask.positions) {
    mask.values.push_back(model_.quantizer.dequantize(model_.quantizer.quantize(image_->at(p))));
  }
  return mask;
}

int RegionErrorModel::fallback_index(const RegionView& region) const {
  double sum = 0.0;
  for (const Pixel& p : region.pixels()) sum += image_->at(p);
  return model_.quantizer.quantize(sum / static_cast<double>(region.size()));
}

std::vector<double> RegionErrorModel::reconstruct(const RegionView& region,
                                                  std::span<const double> initial_guess) const {
  const int degree = polynomial_degree(model_.op);
  if (degree >= 0) return eval_polynomial(fit_polynomial(region, *image_, degree).poly, region);
  MaskData mask = sample_mask(region);
  if (mask.positions.empty()) {
    return std::vector<double>(region.size(), model_.quantizer.dequantize(fallback_index(region)));
  }
  if (model_.op == OperatorId::Diffusion) {
    return diffusion_reconstruct(region, mask, model_.cg, initial_guess).values;
  }
  return inpaint(model_.op, region, mask, model_.cg);
}

double RegionErrorModel::sse(const RegionView& region) const {
  const int degree = polynomial_degree(model_.op);
  if (degree >= 0) return fit_polynomial(region, *image_, degree).sse;
  return sum_squared_error(region, *image_, reconstruct(region));
}

BoundaryLengths boundary_length(std::span<const int> labels, int width, int height) {
  if (labels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("boundary_length: label count does not match dimensions");
  }
  BoundaryLengths out;
  auto note = [&](int a, int b) {
    if (a == b) return;
    ++out.total;
    ++out.pairs[{std::min(a, b), std::max(a, b)}];
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
      if (x + 1 < width) note(labels[i], labels[i + 1]);
      if (y + 1 < height) note(labels[i], labels[i + static_cast<std::size_t>(width)]);
    }
  }
  return out;
}

long Segmentation::boundary_length() const {
  long total = 0;
  for (const auto& [pair, len] : adjacency) total += len;
  return total;
}

double Segmentation::energy(double lambda) const {
  double e = 0.0;
  for (double s : sse) e += s;
  return e + lambda * static_cast<double>(boundary_length());
}

RegionMerger::RegionMerger(const Image& f, ReconstructionModel model, int block_size)
    : image_(&f), errors_(f, std::move(model)), degree_(polynomial_degree(errors_.model().op)),
      warm_(errors_.model().op == OperatorId::Diffusion) {
  if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
  const int w = f.width();
  const int h = f.height();
  const int bw = (w + block_size - 1) / block_size;
  const int bh = (h + block_size - 1) / block_size;
  regions_.resize(static_cast<std::size_t>(bw) * static_cast<std::size_t>(bh));
  parent_.resize(regions_.size());
  owner_.resize(f.pixel_count());
  for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<int>(i);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int id = (y / block_size) * bw + (x / block_size);
      owner_[f.index(x, y)] = id;
      regions_[static_cast<std::size_t>(id)].pixels.push_back({x, y});
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = owner_[f.index(x, y)];
      auto link = [&](int b) {
        if (a == b) return;
        ++regions_[static_cast<std::size_t>(a)].neighbours[b];
        ++regions_[static_cast<std::size_t>(b)].neighbours[a];
      };
      if (x + 1 < w) link(owner_[f.index(x + 1, y)]);
      if (y + 1 < h) link(owner_[f.index(x, y + 1)]);
    }
  }
  if (errors_.model().op == OperatorId::Shepard) {
    ShepardCache c;
    const double density = errors_.model().grid.density();
    const double sigma = shepard_sigma(density);
    c.half_width = shepard_half_width(density);
    for (int dy = -c.half_width; dy <= c.half_width; ++dy) {
      for (int dx = -c.half_width; dx <= c.half_width; ++dx) {
        c.weights.push_back(std::exp(-static_cast<double>(dx * dx + dy * dy) / (2.0 * sigma * sigma)));
      }
    }
    for (int x = 0; x < w; ++x)
      if (errors_.model().grid.selects(x)) c.cols.push_back(x);
    for (int y = 0; y < h; ++y)
      if (errors_.model().grid.selects(y)) c.rows.push_back(y);
    const std::size_t n = f.pixel_count();
    c.num.assign(n, 0.0);
    c.den.assign(n, 0.0);
    c.lo.assign(n, std::numeric_limits<double>::infinity());
    c.hi.assign(n, -std::numeric_limits<double>::infinity());
    c.value.assign(n, 0.0);
    c.mask_value.assign(n, 0.0);
    c.nearest.assign(n, -1);
    c.is_mask.assign(n, 0);
    const Quantizer& q = errors_.model().quantizer;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!errors_.is_grid_pixel(x, y)) continue;
        c.is_mask[f.index(x, y)] = 1;
        c.mask_value[f.index(x, y)] = q.dequantize(q.quantize(f.at(x, y)));
      }
    }
    c.acc_num.assign(n, 0.0);
    c.acc_den.assign(n, 0.0);
    c.acc_lo.assign(n, 0.0);
    c.acc_hi.assign(n, 0.0);
    c.stamp.assign(n, 0);
    shepard_.emplace(std::move(c));
    for (std::size_t i = 0; i < regions_.size(); ++i) regions_[i].sse = shepard_single(static_cast<int>(i));
  } else {
    for (RegionState& r : regions_) r.sse = evaluate_single(r);
  }
  alive_count_ = static_cast<int>(regions_.size());

  for (std::size_t i = 0; i < regions_.size(); ++i) {
    for (const auto& [j, len] : regions_[i].neighbours) {
      if (static_cast<int>(i) < j) push_candidate(static_cast<int>(i), j);
    }
  }
}

double RegionMerger::evaluate_single(RegionState& r) const {
  if (degree_ >= 0) {
    r.moments = PolyMoments::from_pixels(r.pixels, *image_);
    return r.moments->solve(degree_).sse;
  }
  const RegionView view(image_->width(), image_->height(), r.pixels);
  if (!warm_) return errors_.sse(view);
  r.values = errors_.reconstruct(view);
  return sum_squared_error(view, *image_, r.values);
}

int RegionMerger::find(int id) const {
  int root = id;
  while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
  while (parent_[static_cast<std::size_t>(id)] != root) {
    const int next = parent_[static_cast<std::size_t>(id)];
    parent_[static_cast<std::size_t>(id)] = root;
    id = next;
  }
  return root;
}

std::vector<int> RegionMerger::region_ids() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].alive) out.push_back(static_cast<int>(i));
  }
  return out;
}

long RegionMerger::joint_length(int i, int j) const {
  const auto& n = regions_[static_cast<std::size_t>(i)].neighbours;
  const auto it = n.find(j);
  return it == n.end() ? 0 : it->second;
}

std::vector<std::pair<int, long>> RegionMerger::neighbours(int id) const {
  const auto& n = regions_[static_cast<std::size_t>(id)].neighbours;
  std::vector<std::pair<int, long>> out(n.begin(), n.end());
  std::sort(out.begin(), out.end());
  return out;
}

RegionMerger::UnionEval RegionMerger::evaluate_union(int i, int j) const {
  const RegionState& a = regions_[static_cast<std::size_t>(i)];
  const RegionState& b = regions_[static_cast<std::size_t>(j)];
  UnionEval eval;
  if (degree_ >= 0) {
    eval.moments = PolyMoments::merge(*a.moments, *b.moments);
    eval.sse = eval.moments->solve(degree_).sse;
    return eval;
  }
  if (shepard_) return shepard_union(i, j);
  // Pixel lists are kept row-major, which is also RegionView order.
  std::vector<Pixel> joined(a.pixels.size() + b.pixels.size());
  std::merge(a.pixels.begin(), a.pixels.end(), b.pixels.begin(), b.pixels.end(), joined.begin(),
             row_major_less);
  const RegionView view(image_->width(), image_->height(), joined);
  if (!warm_) {
    eval.sse = errors_.sse(view);
    return eval;
  }
  std::vector<double> guess(joined.size());
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < joined.size(); ++k) {
    const bool from_a = ib == b.pixels.size() ||
                        (ia < a.pixels.size() && row_major_less(a.pixels[ia], b.pixels[ib]));
    guess[k] = from_a ? a.values[ia++] : b.values[ib++];
  }
  eval.values = errors_.reconstruct(view, guess);
  eval.sse = sum_squared_error(view, *image_, eval.values);
  return eval;
}

double RegionMerger::merge_gain(int i, int j) const {
  const long len = joint_length(i, j);
  if (i == j || len == 0 || !alive(i) || !alive(j)) {
    throw std::invalid_argument("merge_gain: regions are not adjacent");
  }
  const double numerator = evaluate_union(i, j).sse - region_sse(i) - region_sse(j);
  return numerator / static_cast<double>(len);
}

void RegionMerger::push_candidate(int i, int j) {
  const int a = std::min(i, j);
  const int b = std::max(i, j);
  const UnionEval eval = evaluate_union(a, b);
  const RegionState& ra = regions_[static_cast<std::size_t>(a)];
  const RegionState& rb = regions_[static_cast<std::size_t>(b)];
  const double gain = (eval.sse - ra.sse - rb.sse) / static_cast<double>(ra.neighbours.at(b));
  heap_.push({gain, a, b, ra.version, rb.version, eval.sse});
}

double RegionMerger::energy(double lambda) const {
  double sse = 0.0;
  long length = 0;
  for (const RegionState& r : regions_) {
    if (!r.alive) continue;
    sse += r.sse;
    for (const auto& [n, len] : r.neighbours) length += len;
  }
  return sse + lambda * static_cast<double>(length / 2);
}

std::vector<int> RegionMerger::labels() const {
  std::vector<int> out(owner_.size());
  for (std::size_t i = 0; i < owner_.size(); ++i) out[i] = find(owner_[i]);
  return out;
}

int RegionMerger::merge(int i, int j) {
  if (i == j || !alive(i) || !alive(j) || joint_length(i, j) == 0) {
    throw std::invalid_argument("merge: regions are not adjacent");
  }
  return merge_with(i, j, evaluate_union(std::min(i, j), std::max(i, j)));
}

int RegionMerger::merge_with(int i, int j, UnionEval eval) {
  const int keep = std::min(i, j);
  const int gone = std::max(i, j);
  if (shepard_) shepard_commit(keep, gone, eval);
  RegionState& k = regions_[static_cast<std::size_t>(keep)];
  RegionState& g = regions_[static_cast<std::size_t>(gone)];

  std::vector<Pixel> joined(k.pixels.size() + g.pixels.size());
  std::merge(k.pixels.begin(), k.pixels.end(), g.pixels.begin(), g.pixels.end(), joined.begin(),
             row_major_less);
  k.pixels = std::move(joined);
  g.pixels = {};
  k.values = std::move(eval.values);
  g.values = {};

  k.neighbours.erase(gone);
  for (const auto& [n, len] : g.neighbours) {
    if (n == keep) continue;
    auto& other = regions_[static_cast<std::size_t>(n)].neighbours;
    other.erase(gone);
    other[keep] += len;
    k.neighbours[n] += len;
  }
  g.neighbours.clear();

  k.sse = eval.sse;
  k.moments = std::move(eval.moments);
  g.moments.reset();
  ++k.version;
  ++g.version;
  g.alive = false;
  parent_[static_cast<std::size_t>(gone)] = keep;
  --alive_count_;
  return keep;
}

int RegionMerger::run(double lambda, const std::function<void(const MergeEvent&)>& observer) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  int merges = 0;
  while (!heap_.empty() && alive_count_ > 1) {
    const Candidate c = heap_.top();
    const RegionState& ra = regions_[static_cast<std::size_t>(c.a)];
    const RegionState& rb = regions_[static_cast<std::size_t>(c.b)];
    if (!ra.alive || !rb.alive || ra.version != c.version_a || rb.version != c.version_b) {
      heap_.pop();
      continue;
    }
    if (!(c.gain < lambda)) break;
    heap_.pop();

    MergeEvent event;
    event.kept = c.a;
    event.absorbed = c.b;
    event.joint_length = ra.neighbours.at(c.b);
    event.gain = c.gain;
    event.numerator = c.union_sse - ra.sse - rb.sse;
    event.union_sse = c.union_sse;

    UnionEval eval;
    if (warm_ || shepard_) {
      // Same parts, same state: reproduces the candidate's evaluation exactly.
      eval = evaluate_union(c.a, c.b);
    } else if (degree_ >= 0) {
      eval.moments = PolyMoments::merge(*ra.moments, *rb.moments);
    }
    eval.sse = c.union_sse;
    const int keep = merge_with(c.a, c.b, std::move(eval));
    ++merges;
    for (const auto& [n, len] : regions_[static_cast<std::size_t>(keep)].neighbours) {
      push_candidate(keep, n);
    }
    if (observer) observer(event);
  }
  return merges;
}

Segmentation RegionMerger::result() const {
  Segmentation seg;
  seg.width = image_->width();
  seg.height = image_->height();
  seg.labels.resize(owner_.size());
  std::unordered_map<int, int> canonical;
  for (std::size_t i = 0; i < owner_.size(); ++i) {
    const int root = find(owner_[i]);
    auto [it, inserted] = canonical.try_emplace(root, static_cast<int>(canonical.size()));
    seg.labels[i] = it->second;
  }
  seg.regions.resize(canonical.size());
  seg.sse.resize(canonical.size());
  for (int y = 0; y < seg.height; ++y) {
    for (int x = 0; x < seg.width; ++x) {
      seg.regions[static_cast<std::size_t>(seg.labels[image_->index(x, y)])].push_back({x, y});
    }
  }
  for (const auto& [root, id] : canonical) {
    const RegionState& r = regions_[static_cast<std::size_t>(root)];
    seg.sse[static_cast<std::size_t>(id)] = r.sse;
    for (const auto& [n, len] : r.neighbours) {
      const int other = canonical.at(n);
      if (id < other) seg.adjacency[{id, other}] = len;
    }
  }
  return seg;
}

namespace {

// Nearest-mask order: squared distance, then row-major position.
bool closer(int w, int p, int a, int b) {
  if (b < 0) return true;
  const long px = p % w, py = p / w;
  const long ax = a % w - px, ay = a / w - py;
  const long bx = b % w - px, by = b / w - py;
  const long da = ax * ax + ay * ay, db = bx * bx + by * by;
  return da < db || (da == db && a < b);
}

int nearest_of(int w, int p, const std::vector<int>& masks, int best) {
  for (int m : masks)
    if (closer(w, p, m, best)) best = m;
  return best;
}

}  // namespace

double RegionMerger::shepard_single(int id) {
  ShepardCache& c = *shepard_;
  RegionState& r = regions_[static_cast<std::size_t>(id)];
  const int w = image_->width();
  const int h = image_->height();
  const int hw = c.half_width;
  r.masks.clear();
  r.fallback.clear();
  for (const Pixel& p : r.pixels) {
    const int idx = static_cast<int>(image_->index(p.x, p.y));
    if (c.is_mask[static_cast<std::size_t>(idx)]) r.masks.push_back(idx);
  }
  double sse = 0.0;
  if (r.masks.empty()) {
    const RegionView view(w, h, r.pixels);
    const double v = errors_.model().quantizer.dequantize(errors_.fallback_index(view));
    for (const Pixel& p : r.pixels) {
      c.value[image_->index(p.x, p.y)] = v;
      sse += (v - image_->at(p)) * (v - image_->at(p));
    }
    return sse;
  }
  for (int m : r.masks) {
    const int mx = m % w, my = m / w;
    const double fv = c.mask_value[static_cast<std::size_t>(m)];
    for (int dy = -hw; dy <= hw; ++dy) {
      const int y = my + dy;
      if (y < 0 || y >= h) continue;
      for (int dx = -hw; dx <= hw; ++dx) {
        const int x = mx + dx;
        if (x < 0 || x >= w) continue;
        const auto t = image_->index(x, y);
        if (c.is_mask[t] || owner_[t] != id) continue;
        const double wt = c.weight(dx, dy);
        c.num[t] += wt * fv;
        c.den[t] += wt;
        c.lo[t] = std::min(c.lo[t], fv);
        c.hi[t] = std::max(c.hi[t], fv);
      }
    }
  }
  for (const Pixel& p : r.pixels) {
    const auto t = image_->index(p.x, p.y);
    if (c.is_mask[t]) {
      c.value[t] = c.mask_value[t];
    } else if (c.den[t] > 0.0) {
      c.value[t] = std::clamp(c.num[t] / c.den[t], c.lo[t], c.hi[t]);
    } else {
      c.nearest[t] = nearest_of(w, static_cast<int>(t), r.masks, -1);
      c.value[t] = c.mask_value[static_cast<std::size_t>(c.nearest[t])];
      r.fallback.push_back(static_cast<int>(t));
    }
    sse += (c.value[t] - image_->at(p)) * (c.value[t] - image_->at(p));
  }
  return sse;
}

RegionMerger::UnionEval RegionMerger::shepard_union(int i, int j) const {
  ShepardCache& c = *shepard_;
  const RegionState& a = regions_[static_cast<std::size_t>(i)];
  const RegionState& b = regions_[static_cast<std::size_t>(j)];
  const int w = image_->width();
  const int h = image_->height();
  const int hw = c.half_width;
  const auto& f = *image_;
  UnionEval eval;
  double delta = 0.0;
  auto emit = [&](int p, double num, double den, double lo, double hi, int nearest, double value) {
    const double target = f.samples()[static_cast<std::size_t>(p)];
    const double old = c.value[static_cast<std::size_t>(p)];
    delta += (value - target) * (value - target) - (old - target) * (old - target);
    eval.shepard.push_back({p, num, den, lo, hi, nearest, value});
  };
  // Weighted sums over the mask pixels of region `other` around pixel p,
  // visiting only selected grid rows and columns.
  auto gather = [&](int p, int other, double& num, double& den, double& lo, double& hi) {
    const int px = p % w, py = p / w;
    const auto r0 = std::lower_bound(c.rows.begin(), c.rows.end(), py - hw);
    const auto c0 = std::lower_bound(c.cols.begin(), c.cols.end(), px - hw);
    for (auto ry = r0; ry != c.rows.end() && *ry <= py + hw; ++ry) {
      for (auto cx = c0; cx != c.cols.end() && *cx <= px + hw; ++cx) {
        const auto q = image_->index(*cx, *ry);
        if (find(owner_[q]) != other) continue;
        const double wt = c.weight(*cx - px, *ry - py);
        const double fv = c.mask_value[q];
        num += wt * fv;
        den += wt;
        lo = std::min(lo, fv);
        hi = std::max(hi, fv);
      }
    }
  };
  const double inf = std::numeric_limits<double>::infinity();

  if (a.masks.empty() && b.masks.empty()) {
    std::vector<Pixel> joined(a.pixels.size() + b.pixels.size());
    std::merge(a.pixels.begin(), a.pixels.end(), b.pixels.begin(), b.pixels.end(), joined.begin(),
               row_major_less);
    const RegionView view(w, h, joined);
    const double v = errors_.model().quantizer.dequantize(errors_.fallback_index(view));
    double sse = 0.0;
    for (const Pixel& p : joined) {
      const int t = static_cast<int>(f.index(p.x, p.y));
      sse += (v - f.at(p)) * (v - f.at(p));
      eval.shepard.push_back({t, 0.0, 0.0, inf, -inf, -1, v});
    }
    eval.sse = sse;
    return eval;
  }

  if (a.masks.empty() || b.masks.empty()) {
    // Every pixel of the mask-free part is reconstructed from the other.
    const bool a_empty = a.masks.empty();
    const RegionState& e = a_empty ? a : b;
    const RegionState& m = a_empty ? b : a;
    const int mid = a_empty ? j : i;
    for (const Pixel& p : e.pixels) {
      const int t = static_cast<int>(f.index(p.x, p.y));
      double num = 0.0, den = 0.0, lo = inf, hi = -inf;
      gather(t, mid, num, den, lo, hi);
      if (den > 0.0) {
        emit(t, num, den, lo, hi, -1, std::clamp(num / den, lo, hi));
      } else {
        const int k = nearest_of(w, t, m.masks, -1);
        emit(t, num, den, lo, hi, k, c.mask_value[static_cast<std::size_t>(k)]);
      }
    }
    eval.sse = a.sse + b.sse + delta;
    return eval;
  }

  const bool a_small = a.pixels.size() < b.pixels.size();
  const RegionState& small = a_small ? a : b;
  const RegionState& large = a_small ? b : a;
  const int large_id = a_small ? j : i;

  // Pixels of the smaller part gain the larger part's mask contributions.
  for (const Pixel& p : small.pixels) {
    const auto t = f.index(p.x, p.y);
    if (c.is_mask[t]) continue;
    double num = 0.0, den = 0.0, lo = inf, hi = -inf;
    gather(static_cast<int>(t), large_id, num, den, lo, hi);
    if (den == 0.0) {
      if (c.den[t] > 0.0) continue;  // unchanged
      const int k = nearest_of(w, static_cast<int>(t), large.masks, c.nearest[t]);
      if (k == c.nearest[t]) continue;
      emit(static_cast<int>(t), c.num[t], c.den[t], c.lo[t], c.hi[t], k, c.mask_value[static_cast<std::size_t>(k)]);
      continue;
    }
    num += c.num[t];
    den += c.den[t];
    lo = std::min(lo, c.lo[t]);
    hi = std::max(hi, c.hi[t]);
    emit(static_cast<int>(t), num, den, lo, hi, -1, std::clamp(num / den, lo, hi));
  }

  // Pixels of the larger part within a window of the smaller part's masks.
  const std::uint32_t epoch = ++c.epoch;
  std::vector<int> touched;
  for (int mk : small.masks) {
    const int mx = mk % w, my = mk / w;
    const double fv = c.mask_value[static_cast<std::size_t>(mk)];
    for (int dy = -hw; dy <= hw; ++dy) {
      const int y = my + dy;
      if (y < 0 || y >= h) continue;
      for (int dx = -hw; dx <= hw; ++dx) {
        const int x = mx + dx;
        if (x < 0 || x >= w) continue;
        const auto t = f.index(x, y);
        if (c.is_mask[t] || find(owner_[t]) != large_id) continue;
        if (c.stamp[t] != epoch) {
          c.stamp[t] = epoch;
          c.acc_num[t] = c.num[t];
          c.acc_den[t] = c.den[t];
          c.acc_lo[t] = c.lo[t];
          c.acc_hi[t] = c.hi[t];
          touched.push_back(static_cast<int>(t));
        }
        const double wt = c.weight(dx, dy);
        c.acc_num[t] += wt * fv;
        c.acc_den[t] += wt;
        c.acc_lo[t] = std::min(c.acc_lo[t], fv);
        c.acc_hi[t] = std::max(c.acc_hi[t], fv);
      }
    }
  }
  for (int t : touched) {
    const auto ti = static_cast<std::size_t>(t);
    emit(t, c.acc_num[ti], c.acc_den[ti], c.acc_lo[ti], c.acc_hi[ti], -1,
         std::clamp(c.acc_num[ti] / c.acc_den[ti], c.acc_lo[ti], c.acc_hi[ti]));
  }
  // Empty-window pixels of the larger part may find a nearer mask pixel.
  for (int t : large.fallback) {
    const auto ti = static_cast<std::size_t>(t);
    if (c.stamp[ti] == epoch) continue;
    const int k = nearest_of(w, t, small.masks, c.nearest[ti]);
    if (k == c.nearest[ti]) continue;
    emit(t, c.num[ti], c.den[ti], c.lo[ti], c.hi[ti], k, c.mask_value[static_cast<std::size_t>(k)]);
  }
  eval.sse = a.sse + b.sse + delta;
  return eval;
}

void RegionMerger::shepard_commit(int keep, int gone, const UnionEval& eval) {
  ShepardCache& c = *shepard_;
  RegionState& k = regions_[static_cast<std::size_t>(keep)];
  RegionState& g = regions_[static_cast<std::size_t>(gone)];
  std::vector<int> fallback = k.fallback;
  fallback.insert(fallback.end(), g.fallback.begin(), g.fallback.end());
  for (const ShepardUpdate& u : eval.shepard) {
    const auto t = static_cast<std::size_t>(u.pixel);
    c.num[t] = u.num;
    c.den[t] = u.den;
    c.lo[t] = u.lo;
    c.hi[t] = u.hi;
    c.nearest[t] = u.nearest;
    c.value[t] = u.value;
    if (u.nearest >= 0) fallback.push_back(u.pixel);
  }
  std::sort(fallback.begin(), fallback.end());
  fallback.erase(std::unique(fallback.begin(), fallback.end()), fallback.end());
  std::erase_if(fallback, [&](int t) { return c.nearest[static_cast<std::size_t>(t)] < 0; });
  k.fallback = std::move(fallback);
  g.fallback = {};
  k.masks.insert(k.masks.end(), g.masks.begin(), g.masks.end());
  g.masks = {};
}

Segmentation region_merge(const Image& f, const ReconstructionModel& model, double lambda,
                          int block_size) {
  RegionMerger merger(f, model, block_size);
  merger.run(lambda);
  return merger.result();
}

}  // namespace mscodec
