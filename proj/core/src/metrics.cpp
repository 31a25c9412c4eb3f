#include "mscodec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mscodec {

double mse(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("mse: image dimensions differ");
  }
  const auto sa = a.samples();
  const auto sb = b.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(sa.size());
}

double psnr(const Image& a, const Image& b) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

double bits_per_pixel(std::size_t stream_length_bytes, const Image& img) {
  return 8.0 * static_cast<double>(stream_length_bytes) / static_cast<double>(img.pixel_count());
}

}  // namespace mscodec
