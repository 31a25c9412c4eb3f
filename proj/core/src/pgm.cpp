#include "mscodec/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace mscodec {

namespace {

class HeaderParser {
 public:
  explicit HeaderParser(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads one decimal token.
  long read_number(const char* field) {
    skip_separators();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) {
        throw PgmError(PgmError::Code::MalformedHeader,
                       std::string("PGM ") + field + " out of range");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw PgmError(PgmError::Code::MalformedHeader,
                     std::string("PGM header: expected ") + field);
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void read_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw PgmError(PgmError::Code::MalformedHeader,
                     "PGM header: missing whitespace after maxval");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Image read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw PgmError(PgmError::Code::MalformedHeader, "not a binary PGM (missing P5 magic)");
  }
  HeaderParser parser(bytes);
  const long width = parser.read_number("width");
  const long height = parser.read_number("height");
  const long maxval = parser.read_number("maxval");
  if (width <= 0 || height <= 0) {
    throw PgmError(PgmError::Code::MalformedHeader, "PGM dimensions must be positive");
  }
  if (maxval != 255) {
    throw PgmError(PgmError::Code::UnsupportedMaxval,
                   "unsupported PGM maxval " + std::to_string(maxval) + " (only 255)");
  }
  parser.read_single_whitespace();

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t start = parser.position();
  if (bytes.size() - start < count) {
    throw PgmError(PgmError::Code::TruncatedData,
                   "PGM raster truncated: expected " + std::to_string(count) + " bytes, got " +
                       std::to_string(bytes.size() - start));
  }
  std::vector<double> samples(count);
  std::transform(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                 bytes.begin() + static_cast<std::ptrdiff_t>(start + count), samples.begin(),
                 [](std::uint8_t b) { return static_cast<double>(b); });
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(samples));
}

std::vector<std::uint8_t> write_pgm(const Image& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.pixel_count());
  for (double v : img.samples()) {
    out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))));
  }
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Image read_pgm_file(const std::string& path) { return read_pgm(read_file_bytes(path)); }

void write_pgm_file(const std::string& path, const Image& img) {
  write_file_bytes(path, write_pgm(img));
}

}  // namespace mscodec
