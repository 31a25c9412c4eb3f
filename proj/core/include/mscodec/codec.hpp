#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mscodec/chaincode.hpp"
#include "mscodec/diffusion.hpp"
#include "mscodec/image.hpp"
#include "mscodec/operators.hpp"
#include "mscodec/segmentation.hpp"

namespace mscodec {

class CodecError : public std::runtime_error {
 public:
  enum class Code {
    InvalidConfig,
    OversizedImage,
    DegenerateRate,
    BadMagic,
    UnsupportedVersion,
    TruncatedHeader,
    InvalidHeader,
    BodyLengthMismatch,
    ChainOutOfBounds,
    RegionCountMismatch,
    PayloadExhausted,
  };

  CodecError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct EncoderConfig {
  OperatorId op = OperatorId::Shepard;
  double lambda = 0.0;
  /// Inpainting only: grid mask density d in (0, 1].
  std::optional<double> density;
  /// Inpainting only: quantization levels q in [2, 256].
  std::optional<int> levels;
  /// Maximum tonal-optimization sweeps per region; 0 disables it.
  int tonal_budget = 3;
  /// Side of the initial square regions; 1 is one region per pixel.
  int block_size = 1;
  CgOptions cg{};
};

/// Fixed 25-byte plain header, all integers big-endian.
struct ContainerHeader {
  static constexpr std::uint8_t kMagic[4] = {'M', 'S', 'C', 'C'};
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::size_t kSize = 25;

  std::uint16_t width = 0;
  std::uint16_t height = 0;
  OperatorId op = OperatorId::P0;
  std::uint8_t q_byte = 0;            // 0 encodes 256
  std::uint16_t density_fixed = 0;    // round(d * 10000)
  std::uint32_t chain_count = 0;
  std::uint32_t region_count = 0;
  std::uint32_t body_length = 0;      // uncompressed body bytes

  int levels() const { return q_byte == 0 ? 256 : q_byte; }

  std::vector<std::uint8_t> serialize() const;
  static ContainerHeader parse(std::span<const std::uint8_t> bytes);
};

struct RegionReport {
  bool fallback = false;  // inpainting region without a grid pixel
  std::size_t mask_size = 0;
  double initial_sse = 0.0;
  double final_sse = 0.0;
  std::vector<int> indices;
};

struct EncodeResult {
  std::vector<std::uint8_t> bytes;
  ContainerHeader header;
  Segmentation segmentation;
  ChainSet chains;
  std::vector<RegionReport> regions;  // canonical region order
};

struct DecodeResult {
  Image image;
  ContainerHeader header;
  std::vector<int> labels;
};

/// Full pipeline: region merging, chain coding, per-region payload (with
/// tonal optimization for inpainting operators) and entropy coding.
/// Throws CodecError for invalid configurations, images larger than
/// 65535 x 65535, or a segmentation with more than pixels / 4 regions.
EncodeResult encode_detailed(const Image& img, const EncoderConfig& cfg);
std::vector<std::uint8_t> encode(const Image& img, const EncoderConfig& cfg);

/// Inverse pipeline. Throws CodecError with a distinct code for each
/// container defect; never returns a partial image.
DecodeResult decode_detailed(std::span<const std::uint8_t> bytes, const CgOptions& cg = {});
Image decode(std::span<const std::uint8_t> bytes);

/// Validates a configuration and returns the reconstruction model the
/// encoder will use.
ReconstructionModel model_for(const EncoderConfig& cfg);

}  // namespace mscodec
