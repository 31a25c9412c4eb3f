#include "mscodec/diffusion.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mscodec {

namespace {

struct Stencil {
  std::array<int, 4> neighbors{-1, -1, -1, -1};  // unknown indices
  double diagonal = 0.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void apply(const std::vector<Stencil>& stencils, const std::vector<double>& x,
           std::vector<double>& out) {
  for (std::size_t i = 0; i < stencils.size(); ++i) {
    const Stencil& s = stencils[i];
    double v = s.diagonal * x[i];
    for (int n : s.neighbors) {
      if (n >= 0) v -= x[static_cast<std::size_t>(n)];
    }
    out[i] = v;
  }
}

}  // namespace

DiffusionResult diffusion_reconstruct(const RegionView& region, const MaskData& mask,
                                      const CgOptions& options,
                                      std::span<const double> initial_guess) {
  if (mask.positions.empty()) throw std::invalid_argument("diffusion: empty mask");
  if (mask.positions.size() != mask.values.size()) {
    throw std::invalid_argument("diffusion: mask positions/values length mismatch");
  }
  if (!initial_guess.empty() && initial_guess.size() != region.size()) {
    throw std::invalid_argument("diffusion: initial guess length mismatch");
  }

  const auto pixels = region.pixels();
  std::vector<int> unknown_of(pixels.size(), -1);
  std::vector<char> is_mask(pixels.size(), 0);
  DiffusionResult result;
  result.values.assign(pixels.size(), 0.0);

  double mask_mean = 0.0;
  for (std::size_t k = 0; k < mask.positions.size(); ++k) {
    const int idx = region.index_of(mask.positions[k].x, mask.positions[k].y);
    if (idx < 0) throw std::invalid_argument("diffusion: mask pixel outside region");
    is_mask[static_cast<std::size_t>(idx)] = 1;
    result.values[static_cast<std::size_t>(idx)] = mask.values[k];
    mask_mean += mask.values[k];
  }
  mask_mean /= static_cast<double>(mask.positions.size());

  std::vector<std::size_t> unknown_pixels;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (!is_mask[i]) {
      unknown_of[i] = static_cast<int>(unknown_pixels.size());
      unknown_pixels.push_back(i);
    }
  }
  const std::size_t n = unknown_pixels.size();
  if (n == 0) return result;

  constexpr std::array<std::array<int, 2>, 4> kOffsets{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
  std::vector<Stencil> stencils(n);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    const Pixel p = pixels[unknown_pixels[u]];
    Stencil& s = stencils[u];
    for (std::size_t o = 0; o < kOffsets.size(); ++o) {
      const int q = region.index_of(p.x + kOffsets[o][0], p.y + kOffsets[o][1]);
      if (q < 0) continue;
      s.diagonal += 1.0;
      const auto qi = static_cast<std::size_t>(q);
      if (is_mask[qi]) {
        rhs[u] += result.values[qi];
      } else {
        s.neighbors[o] = unknown_of[qi];
      }
    }
  }

  std::vector<double> x(n);
  for (std::size_t u = 0; u < n; ++u) {
    x[u] = initial_guess.empty() ? mask_mean : initial_guess[unknown_pixels[u]];
  }

  const int max_iter = options.max_iterations > 0 ? options.max_iterations
                                                  : static_cast<int>(10 * n);
  const double b_norm = std::sqrt(dot(rhs, rhs));
  const double denom = b_norm > 0.0 ? b_norm : 1.0;

  std::vector<double> r(n), p(n), ap(n);
  apply(stencils, x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
  double rr = dot(r, r);
  p = r;
  int iter = 0;
  while (std::sqrt(rr) / denom > options.tolerance && iter < max_iter) {
    apply(stencils, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rr_next = dot(r, r);
    const double beta = rr_next / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rr = rr_next;
    ++iter;
  }

  result.iterations = iter;
  result.relative_residual = std::sqrt(rr) / denom;
  result.converged = result.relative_residual <= options.tolerance;
  for (std::size_t u = 0; u < n; ++u) result.values[unknown_pixels[u]] = x[u];
  return result;
}

}  // namespace mscodec
