#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mscodec/image.hpp"

namespace mscodec {

/// One segment of the image domain: a duplicate-free pixel set together with
/// an O(1) membership/index lookup over its bounding box.
///
/// Pixels are always exposed in row-major order regardless of the order they
/// were supplied in, so every reconstruction that iterates over a RegionView
/// is independent of how the caller enumerated the segment.
class RegionView {
 public:
  /// Throws std::invalid_argument for an empty set, out-of-raster pixels or
  /// duplicates.
  RegionView(int image_width, int image_height, std::span<const Pixel> pixels);

  int image_width() const { return image_width_; }
  int image_height() const { return image_height_; }

  std::span<const Pixel> pixels() const { return pixels_; }
  std::size_t size() const { return pixels_.size(); }

  /// Position of (x, y) within pixels(), or -1 if it is not a member.
  int index_of(int x, int y) const {
    if (x < min_x_ || y < min_y_ || x >= min_x_ + box_w_ || y >= min_y_ + box_h_) return -1;
    return local_[static_cast<std::size_t>(y - min_y_) * static_cast<std::size_t>(box_w_) +
                  static_cast<std::size_t>(x - min_x_)];
  }
  bool contains(int x, int y) const { return index_of(x, y) >= 0; }

  int min_x() const { return min_x_; }
  int min_y() const { return min_y_; }
  int box_width() const { return box_w_; }
  int box_height() const { return box_h_; }

 private:
  int image_width_;
  int image_height_;
  int min_x_ = 0;
  int min_y_ = 0;
  int box_w_ = 0;
  int box_h_ = 0;
  std::vector<Pixel> pixels_;
  std::vector<std::int32_t> local_;
};

/// Known inpainting data for one segment: positions inside the segment and
/// their (dequantized) intensities. `density` is the global mask density d.
struct MaskData {
  std::vector<Pixel> positions;
  std::vector<double> values;
  double density = 1.0;
};

}  // namespace mscodec
