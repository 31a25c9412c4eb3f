#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mscodec/image.hpp"

namespace mscodec {

class PgmError : public std::runtime_error {
 public:
  enum class Code { MalformedHeader, UnsupportedMaxval, TruncatedData };

  PgmError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Parses a binary 8-bit PGM ("P5", maxval 255). Comments are accepted
/// between header tokens.
Image read_pgm(std::span<const std::uint8_t> bytes);

/// Serializes with header "P5\n<w> <h>\n255\n"; samples are rounded to the
/// nearest integer.
std::vector<std::uint8_t> write_pgm(const Image& img);

Image read_pgm_file(const std::string& path);
void write_pgm_file(const std::string& path, const Image& img);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace mscodec
