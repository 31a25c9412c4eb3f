#include "mscodec/region.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mscodec {

RegionView::RegionView(int image_width, int image_height, std::span<const Pixel> pixels)
    : image_width_(image_width), image_height_(image_height) {
  if (pixels.empty()) throw std::invalid_argument("RegionView: empty pixel set");
  int max_x = std::numeric_limits<int>::min();
  int max_y = std::numeric_limits<int>::min();
  min_x_ = std::numeric_limits<int>::max();
  min_y_ = std::numeric_limits<int>::max();
  for (const Pixel& p : pixels) {
    if (p.x < 0 || p.y < 0 || p.x >= image_width || p.y >= image_height) {
      throw std::invalid_argument("RegionView: pixel outside the image");
    }
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  box_w_ = max_x - min_x_ + 1;
  box_h_ = max_y - min_y_ + 1;
  local_.assign(static_cast<std::size_t>(box_w_) * static_cast<std::size_t>(box_h_), -1);
  for (const Pixel& p : pixels) {
    auto& slot = local_[static_cast<std::size_t>(p.y - min_y_) * static_cast<std::size_t>(box_w_) +
                        static_cast<std::size_t>(p.x - min_x_)];
    if (slot != -1) throw std::invalid_argument("RegionView: duplicate pixel");
    slot = 0;
  }
  // Counting sort over the bounding box yields row-major order.
  pixels_.reserve(pixels.size());
  for (int y = 0; y < box_h_; ++y) {
    for (int x = 0; x < box_w_; ++x) {
      auto& slot = local_[static_cast<std::size_t>(y) * static_cast<std::size_t>(box_w_) +
                          static_cast<std::size_t>(x)];
      if (slot == 0) {
        slot = static_cast<std::int32_t>(pixels_.size());
        pixels_.push_back({x + min_x_, y + min_y_});
      }
    }
  }
}

}  // namespace mscodec
