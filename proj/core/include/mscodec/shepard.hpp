#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mscodec/region.hpp"

namespace mscodec {

/// Gaussian width adapted to the mask density: 1 / sqrt(pi d).
double shepard_sigma(double density);

/// Half-width of the (symmetric) truncation window: ceil(2 sigma).
int shepard_half_width(double density);

/// Normalized Gaussian-weighted average of the same-segment mask values
/// inside the truncation window around each pixel. Mask pixels keep their
/// own value; pixels whose window holds no mask pixel take the value of the
/// nearest mask pixel (Euclidean, ties to the row-major first). Every
/// interpolated value is clamped to the range of the values that
/// contributed to it. Returned in region.pixels() order.
std::vector<double> shepard_reconstruct(const RegionView& region, const MaskData& mask);

/// Shepard accumulators (weighted sums and weight totals) for one segment,
/// supporting O(window) re-evaluation when a single mask value changes.
/// Values here are unclamped; use shepard_reconstruct for final output.
class ShepardField {
 public:
  ShepardField(const RegionView& region, const MaskData& mask);

  /// Current reconstruction at region pixel `i`.
  double value(std::size_t i) const;

  /// Change of sum (u - target)^2 if mask value `k` were set to `v`.
  /// `target` is indexed like region.pixels().
  double delta_sse(std::size_t k, double v, std::span<const double> target) const;

  void set_value(std::size_t k, double v);

  double mask_value(std::size_t k) const { return values_[k]; }

 private:
  struct Tap {
    int pixel;
    double weight;
  };

  std::vector<double> values_;
  std::vector<int> mask_pixel_;        // region index of mask k
  std::vector<int> mask_of_pixel_;     // mask index per region pixel, -1 if none
  std::vector<double> num_;
  std::vector<double> den_;
  std::vector<int> nearest_;           // fallback mask index, -1 if window nonempty
  std::vector<std::vector<Tap>> taps_; // window targets per mask pixel
  std::vector<std::vector<int>> fallback_pixels_;
};

}  // namespace mscodec
