#include "mscodec/rd.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mscodec/metrics.hpp"

namespace mscodec {

std::vector<double> log_ladder(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_ladder: need n >= 1 and 0 < lo <= hi");
  if (n == 1) return {lo};
  std::vector<double> out;
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? hi : lo * std::exp(step * i));
  return out;
}

std::vector<SweepPoint> enumerate(const SweepGrid& grid) {
  std::vector<SweepPoint> points;
  for (OperatorId op : grid.operators) {
    for (double lambda : grid.lambdas) {
      if (!is_inpainting(op)) {
        points.push_back({op, lambda, std::nullopt, std::nullopt});
        continue;
      }
      for (double d : grid.densities)
        for (int q : grid.levels) points.push_back({op, lambda, d, q});
    }
  }
  return points;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

SweepRow run_point(const Image& img, const SweepPoint& p, const SweepOptions& options) {
  SweepRow row;
  row.point = p;
  try {
    EncoderConfig cfg;
    cfg.op = p.op;
    cfg.lambda = p.lambda;
    cfg.density = p.density;
    cfg.levels = p.levels;
    cfg.block_size = options.block_size;
    cfg.tonal_budget = options.tonal_budget;
    auto t0 = Clock::now();
    const std::vector<std::uint8_t> bytes = encode(img, cfg);
    row.encode_ms = ms_since(t0);
    t0 = Clock::now();
    const Image out = decode(bytes);
    row.decode_ms = ms_since(t0);
    row.bpp = bits_per_pixel(bytes.size(), img);
    row.psnr = psnr(img, out);
    row.ok = true;
    row.status = "ok";
  } catch (const std::exception& e) {
    row.status = e.what();
  }
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

std::vector<SweepRow> run_sweep(const Image& img, const SweepGrid& grid, const SweepOptions& options) {
  const std::vector<SweepPoint> points = enumerate(grid);
  std::vector<SweepRow> rows(points.size());
  const int threads = std::clamp(options.threads, 1, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) rows[i] = run_point(img, points[i], options);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = run_point(img, points[i], options);
    });
  }
  pool.clear();
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "operator,lambda,density,q,bpp,psnr,encode_ms,decode_ms,status\n";
  for (const SweepRow& r : rows) {
    out << to_string(r.point.op) << ',' << number(r.point.lambda) << ',';
    if (r.point.density) out << number(*r.point.density);
    out << ',';
    if (r.point.levels) out << *r.point.levels;
    out << ',';
    if (r.ok) {
      out << number(r.bpp) << ',' << (is_lossless(r.psnr) ? std::string("lossless") : number(r.psnr)) << ','
          << number(r.encode_ms) << ',' << number(r.decode_ms);
    } else {
      out << ",,,";
    }
    out << ',' << csv_field(r.status) << '\n';
  }
}

std::vector<RdPoint> upper_envelope(std::vector<RdPoint> points) {
  std::sort(points.begin(), points.end(), [](const RdPoint& a, const RdPoint& b) {
    return a.bpp < b.bpp || (a.bpp == b.bpp && a.psnr > b.psnr);
  });
  std::vector<RdPoint> env;
  for (const RdPoint& p : points) {
    if (!env.empty() && p.psnr <= env.back().psnr) continue;
    env.push_back(p);
  }
  return env;
}

std::vector<RdPoint> operator_envelope(const std::vector<SweepRow>& rows, OperatorId op) {
  std::vector<RdPoint> pts;
  for (const SweepRow& r : rows)
    if (r.ok && r.point.op == op) pts.push_back({r.bpp, r.psnr});
  return upper_envelope(std::move(pts));
}

double best_psnr_at(const std::vector<RdPoint>& envelope, double bpp) {
  double best = -std::numeric_limits<double>::infinity();
  for (const RdPoint& p : envelope) {
    if (p.bpp > bpp) break;
    best = p.psnr;
  }
  return best;
}

void write_svg(std::ostream& out, const std::vector<SweepRow>& rows) {
  constexpr double kW = 640, kH = 420, kLeft = 60, kRight = 140, kTop = 20, kBottom = 50;
  constexpr const char* kColours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};

  std::vector<std::pair<OperatorId, std::vector<RdPoint>>> curves;
  double max_bpp = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (OperatorId op : kAllOperators) {
    std::vector<RdPoint> env = operator_envelope(rows, op);
    if (env.empty()) continue;
    for (const RdPoint& p : env) {
      max_bpp = std::max(max_bpp, p.bpp);
      if (std::isfinite(p.psnr)) {
        lo = std::min(lo, p.psnr);
        hi = std::max(hi, p.psnr);
      }
    }
    curves.emplace_back(op, std::move(env));
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 50.0;
  // Lossless points are drawn on a line just above the finite maximum.
  const double inf_level = hi + 5.0;
  hi = inf_level;
  lo = std::floor(lo / 5.0) * 5.0;
  hi = std::ceil(hi / 5.0) * 5.0;
  if (hi <= lo) hi = lo + 5.0;
  if (max_bpp <= 0.0) max_bpp = 1.0;

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double b) { return kLeft + b / max_bpp * pw; };
  auto sy = [&](double p) { return kTop + (hi - (std::isfinite(p) ? p : inf_level)) / (hi - lo) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\"/></g>\n"
      << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double b = max_bpp * i / 4.0;
    const double p = lo + (hi - lo) * i / 4.0;
    out << "<text x=\"" << sx(b) << "\" y=\"" << kTop + ph + 15 << "\" text-anchor=\"middle\">" << number(b)
        << "</text>\n"
        << "<text x=\"" << kLeft - 5 << "\" y=\"" << sy(p) + 4 << "\" text-anchor=\"end\">" << number(p)
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">bits per pixel</text>\n"
      << "<text x=\"15\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 15 " << kTop + ph / 2
      << ")\" text-anchor=\"middle\">PSNR (dB)</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* colour = kColours[static_cast<std::size_t>(curves[c].first)];
    const double ly = kTop + 15 + 18 * static_cast<double>(c);
    out << "<line x1=\"" << kW - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kW - kRight + 30 << "\" y2=\""
        << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kW - kRight + 35 << "\" y=\"" << ly + 4 << "\">" << to_string(curves[c].first)
        << "</text>\n";
  }
  out << "</g>\n";
  for (const auto& [op, env] : curves) {
    out << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << kColours[static_cast<std::size_t>(op)]
        << "\" points=\"";
    for (std::size_t i = 0; i < env.size(); ++i) out << (i ? " " : "") << sx(env[i].bpp) << ',' << sy(env[i].psnr);
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace mscodec
