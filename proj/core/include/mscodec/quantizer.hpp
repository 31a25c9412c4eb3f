#pragma once

namespace mscodec {

/// Uniform quantizer over [0, 255] with q levels. Both endpoints are
/// reproduced exactly for every q.
class Quantizer {
 public:
  /// Throws std::invalid_argument unless 2 <= levels <= 256.
  explicit Quantizer(int levels = 256);

  int levels() const { return levels_; }

  /// round(v * (q - 1) / 255), with v clamped to [0, 255].
  int quantize(double v) const;
  /// round(i * 255 / (q - 1)), with i clamped to [0, q - 1].
  double dequantize(int index) const;

  friend bool operator==(const Quantizer&, const Quantizer&) = default;

 private:
  int levels_;
};

}  // namespace mscodec
