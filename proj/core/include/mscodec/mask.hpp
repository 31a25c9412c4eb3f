#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mscodec/diffusion.hpp"
#include "mscodec/image.hpp"
#include "mscodec/operators.hpp"
#include "mscodec/quantizer.hpp"
#include "mscodec/region.hpp"

namespace mscodec {

/// Regular-grid mask density, held in the container's fixed-point form
/// d * 10000 so encoder and decoder derive the identical grid.
class GridSpec {
 public:
  /// Rounds d to the nearest 1/10000. Throws std::invalid_argument if d is
  /// outside (0, 1] or rounds to zero.
  static GridSpec from_density(double density);
  /// Throws std::invalid_argument unless 1 <= per_myriad <= 10000.
  static GridSpec from_fixed(std::uint16_t per_myriad);

  std::uint16_t fixed() const { return per_myriad_; }
  double density() const { return per_myriad_ / 10000.0; }

  /// Whether grid line `c` is selected along one axis:
  /// floor((c+1) sqrt(d)) > floor(c sqrt(d)), evaluated exactly in integers.
  bool selects(int c) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  explicit GridSpec(std::uint16_t per_myriad) : per_myriad_(per_myriad) {}
  std::uint16_t per_myriad_;
};

/// Mask pixels in row-major order. A pixel is selected iff both its column
/// and its row are selected.
std::vector<Pixel> build_grid_mask(int width, int height, const GridSpec& grid);
std::vector<Pixel> build_grid_mask(int width, int height, double density);

/// Same set as build_grid_mask, as a row-major 0/1 raster.
std::vector<std::uint8_t> grid_bitmap(int width, int height, const GridSpec& grid);

struct TonalResult {
  std::vector<int> indices;
  double initial_sse = 0.0;
  double final_sse = 0.0;
  int sweeps = 0;
  int accepted_moves = 0;
};

/// Greedy coordinate descent over stored quantization indices: mask pixels
/// are visited in row-major order, the adjacent levels i-1 and i+1 are
/// tried, and the better one is kept iff the region sse strictly drops.
/// Sweeps repeat until one makes no change or `budget` sweeps have run.
///
/// Shepard re-evaluates only the changed pixel's window; diffusion re-solves
/// warm-started from the current solution. initial_sse and final_sse are
/// computed from fresh reconstructions, and final_sse <= initial_sse always
/// holds (the start point is restored otherwise).
TonalResult tonal_optimize(OperatorId op, const RegionView& region, const Image& f,
                           std::span<const Pixel> positions, std::vector<int> indices,
                           const Quantizer& quantizer, double density, int budget,
                           const CgOptions& cg = {});

}  // namespace mscodec
