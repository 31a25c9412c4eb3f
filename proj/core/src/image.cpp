#include "mscodec/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace mscodec {

namespace {

void check_dimensions(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
}

}  // namespace

Image::Image(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dimensions(width, height);
  samples_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                  std::clamp(fill, 0.0, 255.0));
}

Image::Image(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_dimensions(width, height);
  if (samples_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("sample count does not match image dimensions");
  }
  for (double v : samples_) {
    if (!(v >= 0.0 && v <= 255.0)) {
      throw std::invalid_argument("image sample outside [0, 255]");
    }
  }
}

void Image::set(int x, int y, double v) {
  samples_[index(x, y)] = std::clamp(v, 0.0, 255.0);
}

std::vector<int> canonicalize_labels(std::span<const int> labels) {
  std::vector<int> out(labels.size());
  std::unordered_map<int, int> remap;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return out;
}

}  // namespace mscodec
