#pragma once

#include <cstddef>
#include <limits>

#include "mscodec/image.hpp"

namespace mscodec {

/// Mean squared sample difference. Throws std::invalid_argument on a
/// dimension mismatch.
double mse(const Image& a, const Image& b);

/// 10 log10(255^2 / mse) in dB. Identical images return +infinity, which
/// callers treat as the lossless sentinel (see is_lossless).
double psnr(const Image& a, const Image& b);

inline bool is_lossless(double psnr_db) { return psnr_db == std::numeric_limits<double>::infinity(); }

/// 8 * bytes / (width * height).
double bits_per_pixel(std::size_t stream_length_bytes, const Image& img);

}  // namespace mscodec
