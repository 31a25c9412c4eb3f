#include "mscodec/entropy.hpp"

#include <array>
#include <memory>

namespace mscodec {

namespace {

constexpr int kProbBits = 12;
constexpr std::uint32_t kProbOne = 1u << kProbBits;
constexpr int kAdaptShift = 4;
constexpr std::uint32_t kTop = 1u << 24;

// P(bit = 0) per context: previous byte x partial-byte node (1..255).
class ByteModel {
 public:
  ByteModel() { probs_->fill(kProbOne / 2); }

  std::uint16_t& at(std::uint8_t previous, std::uint32_t node) {
    return (*probs_)[static_cast<std::size_t>(previous) * 256 + node];
  }

  static void update(std::uint16_t& p, int bit) {
    if (bit == 0) p = static_cast<std::uint16_t>(p + ((kProbOne - p) >> kAdaptShift));
    else p = static_cast<std::uint16_t>(p - (p >> kAdaptShift));
  }

 private:
  std::unique_ptr<std::array<std::uint16_t, 256 * 256>> probs_ =
      std::make_unique<std::array<std::uint16_t, 256 * 256>>();
};

class RangeEncoder {
 public:
  explicit RangeEncoder(std::vector<std::uint8_t>& out) : out_(out) {}

  void encode(std::uint16_t& p, int bit) {
    const std::uint32_t bound = (range_ >> kProbBits) * p;
    if (bit == 0) {
      range_ = bound;
    } else {
      low_ += bound;
      range_ -= bound;
    }
    ByteModel::update(p, bit);
    while (range_ < kTop) {
      range_ <<= 8;
      shift_low();
    }
  }

  void flush() {
    for (int i = 0; i < 5; ++i) shift_low();
  }

 private:
  void shift_low() {
    if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      const auto carry = static_cast<std::uint8_t>(low_ >> 32);
      std::uint8_t pending = cache_;
      do {
        out_.push_back(static_cast<std::uint8_t>(pending + carry));
        pending = 0xFF;
      } while (--cache_size_ != 0);
      cache_ = static_cast<std::uint8_t>(low_ >> 24);
    }
    ++cache_size_;
    low_ = (low_ & 0x00FFFFFFu) << 8;
  }

  std::vector<std::uint8_t>& out_;
  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> in) : in_(in) {
    for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next();
  }

  int decode(std::uint16_t& p) {
    const std::uint32_t bound = (range_ >> kProbBits) * p;
    int bit;
    if (code_ < bound) {
      range_ = bound;
      bit = 0;
    } else {
      code_ -= bound;
      range_ -= bound;
      bit = 1;
    }
    ByteModel::update(p, bit);
    while (range_ < kTop) {
      range_ <<= 8;
      code_ = (code_ << 8) | next();
    }
    return bit;
  }

  std::size_t consumed() const { return pos_; }

 private:
  std::uint32_t next() {
    if (pos_ >= in_.size()) throw EntropyError("entropy stream truncated");
    return in_[pos_++];
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

}  // namespace

std::vector<std::uint8_t> entropy_encode(std::span<const std::uint8_t> input) {
  std::vector<std::uint8_t> out;
  out.reserve(input.size() / 2 + 16);
  ByteModel model;
  RangeEncoder enc(out);
  std::uint8_t previous = 0;
  for (std::uint8_t byte : input) {
    std::uint32_t node = 1;
    for (int i = 7; i >= 0; --i) {
      const int bit = (byte >> i) & 1;
      enc.encode(model.at(previous, node), bit);
      node = (node << 1) | static_cast<std::uint32_t>(bit);
    }
    previous = byte;
  }
  enc.flush();
  return out;
}

std::vector<std::uint8_t> entropy_decode(std::span<const std::uint8_t> coded,
                                         std::size_t original_length) {
  std::vector<std::uint8_t> out;
  out.reserve(original_length);
  ByteModel model;
  RangeDecoder dec(coded);
  std::uint8_t previous = 0;
  for (std::size_t k = 0; k < original_length; ++k) {
    std::uint32_t node = 1;
    for (int i = 0; i < 8; ++i) {
      node = (node << 1) | static_cast<std::uint32_t>(dec.decode(model.at(previous, node)));
    }
    previous = static_cast<std::uint8_t>(node & 0xFF);
    out.push_back(previous);
  }
  if (dec.consumed() != coded.size()) {
    throw EntropyError("entropy stream has trailing bytes");
  }
  return out;
}

}  // namespace mscodec
