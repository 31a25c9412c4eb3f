#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mscodec {

/// Integer pixel coordinate. Ordering used throughout the codec is row-major
/// (y first, then x); see row_major_less.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

inline bool row_major_less(const Pixel& a, const Pixel& b) {
  return a.y < b.y || (a.y == b.y && a.x < b.x);
}

/// Grayscale raster with real-valued samples in [0, 255], stored row-major.
class Image {
 public:
  Image() = default;
  /// Creates a width x height image filled with `fill`.
  Image(int width, int height, double fill = 0.0);
  /// Adopts `samples`; throws std::invalid_argument if the length does not
  /// match or a sample lies outside [0, 255].
  Image(int width, int height, std::vector<double> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return samples_.size(); }

  double at(int x, int y) const { return samples_[index(x, y)]; }
  double at(const Pixel& p) const { return at(p.x, p.y); }
  /// Stores `v` clamped to [0, 255].
  void set(int x, int y, double v);

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<const double> samples() const { return samples_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

/// Relabels a label map so that ids are 0..R-1 in row-major order of each
/// label's first occurrence. Labels are compared for equality only, so the
/// input ids may be arbitrary.
std::vector<int> canonicalize_labels(std::span<const int> labels);

}  // namespace mscodec
