#include "mscodec/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mscodec {

Quantizer::Quantizer(int levels) : levels_(levels) {
  if (levels < 2 || levels > 256) {
    throw std::invalid_argument("quantization levels must lie in [2, 256]");
  }
}

int Quantizer::quantize(double v) const {
  const double clamped = std::clamp(v, 0.0, 255.0);
  return static_cast<int>(std::floor(clamped * (levels_ - 1) / 255.0 + 0.5));
}

double Quantizer::dequantize(int index) const {
  const int i = std::clamp(index, 0, levels_ - 1);
  // Integer form of round(i * 255 / (q - 1)).
  const int den = levels_ - 1;
  return static_cast<double>((2 * i * 255 + den) / (2 * den));
}

}  // namespace mscodec
