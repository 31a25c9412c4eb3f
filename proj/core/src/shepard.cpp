#include "mscodec/shepard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mscodec {

namespace {

struct Window {
  int half_width;
  std::vector<double> weights;  // (2h+1)^2, row-major over (dy, dx)

  explicit Window(double density) : half_width(shepard_half_width(density)) {
    const double sigma = shepard_sigma(density);
    const int side = 2 * half_width + 1;
    weights.resize(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
    for (int dy = -half_width; dy <= half_width; ++dy) {
      for (int dx = -half_width; dx <= half_width; ++dx) {
        weights[static_cast<std::size_t>((dy + half_width) * side + dx + half_width)] =
            std::exp(-static_cast<double>(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      }
    }
  }

  double at(int dx, int dy) const {
    const int side = 2 * half_width + 1;
    return weights[static_cast<std::size_t>((dy + half_width) * side + dx + half_width)];
  }
};

void validate(const RegionView& region, const MaskData& mask) {
  if (mask.positions.empty()) throw std::invalid_argument("shepard: empty mask");
  if (mask.positions.size() != mask.values.size()) {
    throw std::invalid_argument("shepard: mask positions/values length mismatch");
  }
  if (!(mask.density > 0.0 && mask.density <= 1.0)) {
    throw std::invalid_argument("shepard: density outside (0, 1]");
  }
  for (const Pixel& p : mask.positions) {
    if (!region.contains(p.x, p.y)) throw std::invalid_argument("shepard: mask pixel outside region");
  }
}

int nearest_mask(const Pixel& p, const std::vector<Pixel>& positions) {
  long best = std::numeric_limits<long>::max();
  int best_k = -1;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const long dx = positions[k].x - p.x;
    const long dy = positions[k].y - p.y;
    const long d2 = dx * dx + dy * dy;
    if (d2 < best ||
        (d2 == best && row_major_less(positions[k], positions[static_cast<std::size_t>(best_k)]))) {
      best = d2;
      best_k = static_cast<int>(k);
    }
  }
  return best_k;
}

}  // namespace

double shepard_sigma(double density) { return 1.0 / std::sqrt(std::numbers::pi * density); }

int shepard_half_width(double density) {
  return static_cast<int>(std::ceil(2.0 * shepard_sigma(density)));
}

std::vector<double> shepard_reconstruct(const RegionView& region, const MaskData& mask) {
  validate(region, mask);
  const Window window(mask.density);
  const int h = window.half_width;
  const std::size_t n = region.size();

  std::vector<double> num(n, 0.0), den(n, 0.0);
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  std::vector<char> is_mask(n, 0);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < mask.positions.size(); ++k) {
    const auto idx = static_cast<std::size_t>(region.index_of(mask.positions[k].x, mask.positions[k].y));
    is_mask[idx] = 1;
    out[idx] = mask.values[k];
  }
  for (std::size_t k = 0; k < mask.positions.size(); ++k) {
    const Pixel m = mask.positions[k];
    const double fk = mask.values[k];
    for (int dy = -h; dy <= h; ++dy) {
      for (int dx = -h; dx <= h; ++dx) {
        const int t = region.index_of(m.x + dx, m.y + dy);
        if (t < 0) continue;
        const auto ti = static_cast<std::size_t>(t);
        if (is_mask[ti]) continue;
        const double w = window.at(dx, dy);
        num[ti] += w * fk;
        den[ti] += w;
        lo[ti] = std::min(lo[ti], fk);
        hi[ti] = std::max(hi[ti], fk);
      }
    }
  }
  const auto pixels = region.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    if (is_mask[i]) continue;
    if (den[i] > 0.0) {
      out[i] = std::clamp(num[i] / den[i], lo[i], hi[i]);
    } else {
      out[i] = mask.values[static_cast<std::size_t>(nearest_mask(pixels[i], mask.positions))];
    }
  }
  return out;
}

ShepardField::ShepardField(const RegionView& region, const MaskData& mask)
    : values_(mask.values) {
  validate(region, mask);
  const Window window(mask.density);
  const int h = window.half_width;
  const std::size_t n = region.size();
  const std::size_t m = mask.positions.size();

  mask_pixel_.resize(m);
  mask_of_pixel_.assign(n, -1);
  num_.assign(n, 0.0);
  den_.assign(n, 0.0);
  nearest_.assign(n, -1);
  taps_.resize(m);
  fallback_pixels_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const int idx = region.index_of(mask.positions[k].x, mask.positions[k].y);
    mask_pixel_[k] = idx;
    mask_of_pixel_[static_cast<std::size_t>(idx)] = static_cast<int>(k);
  }
  for (std::size_t k = 0; k < m; ++k) {
    const Pixel mp = mask.positions[k];
    for (int dy = -h; dy <= h; ++dy) {
      for (int dx = -h; dx <= h; ++dx) {
        const int t = region.index_of(mp.x + dx, mp.y + dy);
        if (t < 0 || mask_of_pixel_[static_cast<std::size_t>(t)] >= 0) continue;
        const double w = window.at(dx, dy);
        taps_[k].push_back({t, w});
        num_[static_cast<std::size_t>(t)] += w * values_[k];
        den_[static_cast<std::size_t>(t)] += w;
      }
    }
  }
  const auto pixels = region.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask_of_pixel_[i] >= 0 || den_[i] > 0.0) continue;
    const int k = nearest_mask(pixels[i], mask.positions);
    nearest_[i] = k;
    fallback_pixels_[static_cast<std::size_t>(k)].push_back(static_cast<int>(i));
  }
}

double ShepardField::value(std::size_t i) const {
  if (mask_of_pixel_[i] >= 0) return values_[static_cast<std::size_t>(mask_of_pixel_[i])];
  if (nearest_[i] >= 0) return values_[static_cast<std::size_t>(nearest_[i])];
  return num_[i] / den_[i];
}

double ShepardField::delta_sse(std::size_t k, double v, std::span<const double> target) const {
  const double old = values_[k];
  const double change = v - old;
  auto sq = [](double a) { return a * a; };
  const auto own = static_cast<std::size_t>(mask_pixel_[k]);
  double delta = sq(v - target[own]) - sq(old - target[own]);
  for (const Tap& tap : taps_[k]) {
    const auto t = static_cast<std::size_t>(tap.pixel);
    const double before = num_[t] / den_[t];
    const double after = (num_[t] + tap.weight * change) / den_[t];
    delta += sq(after - target[t]) - sq(before - target[t]);
  }
  for (int p : fallback_pixels_[k]) {
    const auto pi = static_cast<std::size_t>(p);
    delta += sq(v - target[pi]) - sq(old - target[pi]);
  }
  return delta;
}

void ShepardField::set_value(std::size_t k, double v) {
  const double change = v - values_[k];
  for (const Tap& tap : taps_[k]) num_[static_cast<std::size_t>(tap.pixel)] += tap.weight * change;
  values_[k] = v;
}

}  // namespace mscodec
