#pragma once

#include <array>
#include <span>
#include <vector>

#include "mscodec/image.hpp"
#include "mscodec/region.hpp"

namespace mscodec {

inline constexpr int kMaxPolyDegree = 2;

/// (n+2 choose n): 1, 3, 6 for n = 0, 1, 2.
constexpr int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Bivariate polynomial in centered coordinates u = x - center_x,
/// v = y - center_y, monomials ordered 1, u, v, u^2, uv, v^2.
struct PolyCoefficients {
  int degree = 0;
  std::vector<double> coefficients;
  double center_x = 0.0;
  double center_y = 0.0;

  double evaluate(double x, double y) const;
};

struct PolyFit {
  PolyCoefficients poly;
  double sse = 0.0;
  /// Highest degree whose monomials were linearly independent on the region.
  /// Coefficients above it are zero.
  int effective_degree = 0;
};

/// Least-squares fit of degree `degree` over `region`, centered at the region
/// centroid. The reported sse is the directly summed residual.
PolyFit fit_polynomial(const RegionView& region, const Image& f, int degree);

/// Values of `c` at every region pixel, in region.pixels() order. No clamping.
std::vector<double> eval_polynomial(const PolyCoefficients& c, const RegionView& region);

/// Sufficient statistics of a region for degree <= 2 least squares:
/// coordinate moments up to order 4 and intensity-weighted moments up to
/// order 2, both centered at the region centroid (intensities centered at
/// the region mean). Two regions' statistics combine exactly via merge(),
/// which re-centers both sides with a binomial shift.
class PolyMoments {
 public:
  static PolyMoments from_pixels(std::span<const Pixel> pixels, const Image& f);
  static PolyMoments merge(const PolyMoments& a, const PolyMoments& b);

  /// Fit from the statistics alone; sse = S - c.r at the optimum, clamped
  /// at zero.
  PolyFit solve(int degree) const;

  double count() const { return n_; }
  double centroid_x() const { return cx_; }
  double centroid_y() const { return cy_; }
  double mean() const { return fmean_; }

 private:
  void shift_to(double cx, double cy, double fmean);

  double n_ = 0.0;
  double cx_ = 0.0;
  double cy_ = 0.0;
  double fmean_ = 0.0;
  // coord_[a][b] = sum (x-cx)^a (y-cy)^b, a + b <= 4.
  std::array<std::array<double, 5>, 5> coord_{};
  // weighted_[a][b] = sum (f-fmean)(x-cx)^a (y-cy)^b, a + b <= 2.
  std::array<std::array<double, 3>, 3> weighted_{};
  // sum (f-fmean)^2
  double scatter_ = 0.0;
};

}  // namespace mscodec
