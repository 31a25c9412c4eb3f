#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mscodec {

class EntropyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive binary arithmetic coding of a byte stream. Each byte is coded
/// MSB first; a bit's context is the previous byte together with the bits
/// of the current byte seen so far. Probabilities are 12-bit integer
/// counters with a shift-4 update, and the range coder is a 32-bit
/// carry-propagating coder, so output is identical on every platform.
///
/// The output is the coded body only; the caller stores the original length.
std::vector<std::uint8_t> entropy_encode(std::span<const std::uint8_t> input);

/// Inverse of entropy_encode. Throws EntropyError if the stream ends early or
/// if bytes remain after `original_length` bytes have been decoded.
std::vector<std::uint8_t> entropy_decode(std::span<const std::uint8_t> coded,
                                         std::size_t original_length);

}  // namespace mscodec
