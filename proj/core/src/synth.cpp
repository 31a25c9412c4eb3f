#include "mscodec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace mscodec {

namespace {

// Raw engine output only; std distributions differ across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

double to_sample(double v) { return std::clamp(std::round(v), 0.0, 255.0); }

std::vector<int> sorted_cuts(Rng& rng, int extent, int count) {
  std::vector<int> cuts;
  if (extent < 2) return cuts;
  for (int i = 0; i < count; ++i) cuts.push_back(rng.integer(1, extent - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

int cell_of(const std::vector<int>& cuts, int c) {
  return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), c) - cuts.begin());
}

Image steps(int w, int h, std::uint64_t seed) {
  std::vector<double> s(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  if (seed == 0) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) s[static_cast<std::size_t>(y * w + x)] = x < w / 2 ? 0.0 : 255.0;
    return Image(w, h, std::move(s));
  }
  Rng rng(seed);
  const std::vector<int> xs = sorted_cuts(rng, w, rng.integer(1, 3));
  const std::vector<int> ys = sorted_cuts(rng, h, rng.integer(1, 3));
  const std::size_t cols = xs.size() + 1;
  std::vector<double> level((xs.size() + 1) * (ys.size() + 1));
  for (double& v : level) v = rng.integer(0, 255);
  for (int y = 0; y < h; ++y) {
    const auto row = static_cast<std::size_t>(cell_of(ys, y));
    for (int x = 0; x < w; ++x) {
      s[static_cast<std::size_t>(y * w + x)] = level[row * cols + static_cast<std::size_t>(cell_of(xs, x))];
    }
  }
  return Image(w, h, std::move(s));
}

Image ramps(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  const int bands = rng.integer(2, 4);
  struct Border {
    double offset, amplitude, frequency, phase;
  };
  std::vector<Border> borders;
  for (int b = 1; b < bands; ++b) {
    borders.push_back({h * (b + rng.uniform(-0.2, 0.2)) / bands, rng.uniform(0.03, 0.1) * h,
                       rng.uniform(0.5, 2.0) * 2.0 * std::numbers::pi / w, rng.uniform(0.0, 2.0 * std::numbers::pi)});
  }
  struct Plane {
    double centre, gx, gy;
  };
  std::vector<Plane> planes;
  for (int b = 0; b < bands; ++b) {
    // Total swing over the image stays within +-50 so nothing clips.
    planes.push_back({rng.uniform(60.0, 195.0), rng.uniform(-50.0, 50.0) / std::max(w, 1),
                      rng.uniform(-50.0, 50.0) / std::max(h, 1)});
  }
  std::vector<double> s(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t band = 0;
      for (const Border& b : borders) {
        if (y + 0.5 >= b.offset + b.amplitude * std::sin(b.frequency * (x + 0.5) + b.phase)) ++band;
      }
      const Plane& p = planes[band];
      s[static_cast<std::size_t>(y * w + x)] = to_sample(p.centre + p.gx * (x - w / 2.0) + p.gy * (y - h / 2.0));
    }
  }
  return Image(w, h, std::move(s));
}

Image voronoi_smooth(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  const int sites = std::clamp(w * h / 2048, 3, 64);
  struct Patch {
    double sx, sy;                 // site
    double c0, cx, cy, cxx, cxy, cyy;
    double amplitude[2], kx[2], ky[2], phase[2];
  };
  const double scale = std::max(w, h);
  std::vector<Patch> patches;
  for (int i = 0; i < sites; ++i) {
    Patch p{};
    p.sx = rng.uniform(0.0, w);
    p.sy = rng.uniform(0.0, h);
    p.c0 = rng.uniform(70.0, 185.0);
    // Coordinates below are normalized by the image size, so each term's
    // swing is bounded independently of resolution.
    p.cx = rng.uniform(-25.0, 25.0);
    p.cy = rng.uniform(-25.0, 25.0);
    p.cxx = rng.uniform(-20.0, 20.0);
    p.cxy = rng.uniform(-20.0, 20.0);
    p.cyy = rng.uniform(-20.0, 20.0);
    for (int k = 0; k < 2; ++k) {
      const double wavelength = rng.uniform(0.1, 0.2) * scale;
      const double angle = rng.uniform(0.0, std::numbers::pi);
      p.amplitude[k] = rng.uniform(8.0, 14.0);
      p.kx[k] = 2.0 * std::numbers::pi / wavelength * std::cos(angle);
      p.ky[k] = 2.0 * std::numbers::pi / wavelength * std::sin(angle);
      p.phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    patches.push_back(p);
  }
  std::vector<double> s(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double px = x + 0.5;
      const double py = y + 0.5;
      std::size_t best = 0;
      double best_d = INFINITY;
      for (std::size_t i = 0; i < patches.size(); ++i) {
        const double d = (px - patches[i].sx) * (px - patches[i].sx) + (py - patches[i].sy) * (py - patches[i].sy);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      const Patch& p = patches[best];
      const double u = (px - p.sx) / scale;
      const double v = (py - p.sy) / scale;
      double value = p.c0 + p.cx * u + p.cy * v + p.cxx * u * u + p.cxy * u * v + p.cyy * v * v;
      for (int k = 0; k < 2; ++k) value += p.amplitude[k] * std::sin(p.kx[k] * px + p.ky[k] * py + p.phase[k]);
      s[static_cast<std::size_t>(y * w + x)] = to_sample(value);
    }
  }
  return Image(w, h, std::move(s));
}

}  // namespace

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Steps: return "steps";
    case SynthKind::Ramps: return "ramps";
    case SynthKind::VoronoiSmooth: return "voronoi-smooth";
  }
  return "?";
}

std::optional<SynthKind> parse_synth_kind(std::string_view name) {
  if (name == "steps") return SynthKind::Steps;
  if (name == "ramps") return SynthKind::Ramps;
  if (name == "voronoi-smooth") return SynthKind::VoronoiSmooth;
  return std::nullopt;
}

Image synthesize(SynthKind kind, int width, int height, std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("synthesize: dimensions must be positive");
  switch (kind) {
    case SynthKind::Steps: return steps(width, height, seed);
    case SynthKind::Ramps: return ramps(width, height, seed);
    case SynthKind::VoronoiSmooth: return voronoi_smooth(width, height, seed);
  }
  throw std::invalid_argument("synthesize: unknown kind");
}

}  // namespace mscodec
