#include "mscodec/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "mscodec/entropy.hpp"
#include "mscodec/mask.hpp"

namespace mscodec {

namespace {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> in, CodecError::Code on_exhaustion)
      : in_(in), code_(on_exhaustion) {}

  std::uint8_t u8() {
    if (pos_ >= in_.size()) throw CodecError(code_, "container ended unexpectedly");
    return in_[pos_++];
  }
  std::uint16_t u16() {
    const std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }
  float f32() { return std::bit_cast<float>(u32()); }

  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  CodecError::Code code_;
};

void write_chains(ByteWriter& w, const ChainSet& set) {
  for (const Chain& c : set.chains) {
    w.u16(static_cast<std::uint16_t>(c.start_x));
    w.u16(static_cast<std::uint16_t>(c.start_y));
    w.u8(static_cast<std::uint8_t>(c.initial));
    w.u32(static_cast<std::uint32_t>(c.moves.size()));
    for (Move m : c.moves) w.u8(static_cast<std::uint8_t>(m));
  }
}

ChainSet read_chains(ByteReader& r, const ContainerHeader& h) {
  ChainSet set;
  set.width = h.width;
  set.height = h.height;
  set.chains.reserve(std::min<std::size_t>(h.chain_count, r.remaining()));
  for (std::uint32_t i = 0; i < h.chain_count; ++i) {
    Chain c;
    c.start_x = r.u16();
    c.start_y = r.u16();
    if (c.start_x > h.width || c.start_y > h.height) {
      throw CodecError(CodecError::Code::ChainOutOfBounds, "chain start corner outside the image");
    }
    const std::uint8_t dir = r.u8();
    if (dir > 3) throw CodecError(CodecError::Code::ChainOutOfBounds, "invalid chain direction");
    c.initial = static_cast<Direction>(dir);
    const std::uint32_t count = r.u32();
    if (count > r.remaining()) {
      throw CodecError(CodecError::Code::PayloadExhausted, "chain move count exceeds body");
    }
    c.moves.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
      const std::uint8_t m = r.u8();
      if (m > 2) throw CodecError(CodecError::Code::ChainOutOfBounds, "invalid chain move");
      c.moves.push_back(static_cast<Move>(m));
    }
    set.chains.push_back(std::move(c));
  }
  return set;
}

std::uint32_t to_u32(std::size_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw CodecError(CodecError::Code::OversizedImage, "container field overflow");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> ContainerHeader::serialize() const {
  ByteWriter w;
  for (std::uint8_t b : kMagic) w.u8(b);
  w.u8(kVersion);
  w.u16(width);
  w.u16(height);
  w.u8(static_cast<std::uint8_t>(op));
  w.u8(q_byte);
  w.u16(density_fixed);
  w.u32(chain_count);
  w.u32(region_count);
  w.u32(body_length);
  return std::move(w.data());
}

ContainerHeader ContainerHeader::parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw CodecError(CodecError::Code::BadMagic, "not an MSCC container (bad magic)");
  }
  ByteReader r(bytes.subspan(4), CodecError::Code::TruncatedHeader);
  const std::uint8_t version = r.u8();
  if (version != kVersion) {
    throw CodecError(CodecError::Code::UnsupportedVersion,
                     "unsupported container version " + std::to_string(version));
  }
  ContainerHeader h;
  h.width = r.u16();
  h.height = r.u16();
  const auto op = operator_from_byte(r.u8());
  h.q_byte = r.u8();
  h.density_fixed = r.u16();
  h.chain_count = r.u32();
  h.region_count = r.u32();
  h.body_length = r.u32();
  if (!op) throw CodecError(CodecError::Code::InvalidHeader, "unknown operator id");
  h.op = *op;
  if (h.width == 0 || h.height == 0) {
    throw CodecError(CodecError::Code::InvalidHeader, "zero image dimension");
  }
  if (is_inpainting(h.op)) {
    if (h.q_byte == 1) throw CodecError(CodecError::Code::InvalidHeader, "invalid quantization levels");
    if (h.density_fixed < 1 || h.density_fixed > 10000) {
      throw CodecError(CodecError::Code::InvalidHeader, "invalid mask density");
    }
  }
  return h;
}

ReconstructionModel model_for(const EncoderConfig& cfg) {
  auto invalid = [](const std::string& msg) { return CodecError(CodecError::Code::InvalidConfig, msg); };
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) throw invalid("lambda must be finite and >= 0");
  if (cfg.block_size < 1) throw invalid("block size must be >= 1");
  if (cfg.tonal_budget < 0) throw invalid("tonal budget must be >= 0");
  ReconstructionModel model;
  model.op = cfg.op;
  model.cg = cfg.cg;
  if (is_inpainting(cfg.op)) {
    if (!cfg.density || !cfg.levels) throw invalid("inpainting operators require density and q");
    try {
      model.grid = GridSpec::from_density(*cfg.density);
      model.quantizer = Quantizer(*cfg.levels);
    } catch (const std::invalid_argument& e) {
      throw invalid(e.what());
    }
  } else if (cfg.density || cfg.levels) {
    throw invalid("density and q apply to inpainting operators only");
  }
  return model;
}

EncodeResult encode_detailed(const Image& img, const EncoderConfig& cfg) {
  if (img.width() > 0xFFFF || img.height() > 0xFFFF) {
    throw CodecError(CodecError::Code::OversizedImage, "image dimensions exceed 65535");
  }
  const ReconstructionModel model = model_for(cfg);

  RegionMerger merger(img, model, cfg.block_size);
  merger.run(cfg.lambda);
  EncodeResult result;
  result.segmentation = merger.result();
  const Segmentation& seg = result.segmentation;
  if (seg.region_count() * 4 > img.pixel_count()) {
    throw CodecError(CodecError::Code::DegenerateRate,
                     "segmentation has " + std::to_string(seg.region_count()) +
                         " regions for " + std::to_string(img.pixel_count()) +
                         " pixels (limit pixels/4); increase lambda or the block size");
  }
  result.chains = encode_boundaries(seg.labels, img.width(), img.height());

  ByteWriter body;
  write_chains(body, result.chains);

  const RegionErrorModel& errors = merger.error_model();
  const int degree = polynomial_degree(cfg.op);
  result.regions.resize(seg.region_count());
  for (std::size_t r = 0; r < seg.region_count(); ++r) {
    const RegionView region(img.width(), img.height(), seg.regions[r]);
    RegionReport& report = result.regions[r];
    if (degree >= 0) {
      const PolyFit fit = fit_polynomial(region, img, degree);
      for (double c : fit.poly.coefficients) body.f32(static_cast<float>(c));
      report.initial_sse = report.final_sse = fit.sse;
      continue;
    }
    const std::vector<Pixel> positions = errors.mask_positions(region);
    report.mask_size = positions.size();
    if (positions.empty()) {
      const int index = errors.fallback_index(region);
      report.fallback = true;
      report.indices = {index};
      report.initial_sse = report.final_sse = errors.sse(region);
      body.u8(1);
      body.u8(static_cast<std::uint8_t>(index));
      continue;
    }
    std::vector<int> indices;
    indices.reserve(positions.size());
    for (const Pixel& p : positions) indices.push_back(model.quantizer.quantize(img.at(p)));
    TonalResult tonal = tonal_optimize(cfg.op, region, img, positions, std::move(indices),
                                       model.quantizer, model.grid.density(), cfg.tonal_budget,
                                       model.cg);
    report.initial_sse = tonal.initial_sse;
    report.final_sse = tonal.final_sse;
    report.indices = std::move(tonal.indices);
    body.u8(0);
    for (int i : report.indices) body.u8(static_cast<std::uint8_t>(i));
  }

  ContainerHeader& h = result.header;
  h.width = static_cast<std::uint16_t>(img.width());
  h.height = static_cast<std::uint16_t>(img.height());
  h.op = cfg.op;
  if (is_inpainting(cfg.op)) {
    h.q_byte = static_cast<std::uint8_t>(model.quantizer.levels() == 256 ? 0 : model.quantizer.levels());
    h.density_fixed = model.grid.fixed();
  }
  h.chain_count = to_u32(result.chains.chains.size());
  h.region_count = to_u32(seg.region_count());
  h.body_length = to_u32(body.data().size());

  result.bytes = h.serialize();
  const std::vector<std::uint8_t> coded = entropy_encode(body.data());
  result.bytes.insert(result.bytes.end(), coded.begin(), coded.end());
  return result;
}

std::vector<std::uint8_t> encode(const Image& img, const EncoderConfig& cfg) {
  return encode_detailed(img, cfg).bytes;
}

DecodeResult decode_detailed(std::span<const std::uint8_t> bytes, const CgOptions& cg) {
  DecodeResult out;
  out.header = ContainerHeader::parse(bytes);
  const ContainerHeader& h = out.header;
  if (bytes.size() < ContainerHeader::kSize) {
    throw CodecError(CodecError::Code::TruncatedHeader, "container header truncated");
  }

  std::vector<std::uint8_t> body;
  try {
    body = entropy_decode(bytes.subspan(ContainerHeader::kSize), h.body_length);
  } catch (const EntropyError& e) {
    throw CodecError(CodecError::Code::BodyLengthMismatch,
                     std::string("body does not decode to the declared length: ") + e.what());
  }

  ByteReader reader(body, CodecError::Code::PayloadExhausted);
  const ChainSet chains = read_chains(reader, h);
  try {
    out.labels = decode_boundaries(chains);
  } catch (const ChainError& e) {
    throw CodecError(CodecError::Code::ChainOutOfBounds, e.what());
  }

  const int w = h.width;
  const int ht = h.height;
  std::vector<std::vector<Pixel>> regions;
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto id = static_cast<std::size_t>(out.labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)]);
      if (id >= regions.size()) regions.resize(id + 1);
      regions[id].push_back({x, y});
    }
  }
  if (regions.size() != h.region_count) {
    throw CodecError(CodecError::Code::RegionCountMismatch,
                     "header declares " + std::to_string(h.region_count) + " regions, chains yield " +
                         std::to_string(regions.size()));
  }

  out.image = Image(w, ht, 0.0);
  const int degree = polynomial_degree(h.op);
  std::vector<std::uint8_t> grid;
  std::optional<GridSpec> spec;
  std::optional<Quantizer> quantizer;
  if (degree < 0) {
    spec = GridSpec::from_fixed(h.density_fixed);
    quantizer = Quantizer(h.levels());
    grid = grid_bitmap(w, ht, *spec);
  }

  for (const std::vector<Pixel>& pixels : regions) {
    const RegionView region(w, ht, pixels);
    std::vector<double> values;
    if (degree >= 0) {
      PolyCoefficients poly;
      poly.degree = degree;
      const PolyMoments centre = PolyMoments::from_pixels(region.pixels(), out.image);
      poly.center_x = centre.centroid_x();
      poly.center_y = centre.centroid_y();
      for (int i = 0; i < monomial_count(degree); ++i) {
        poly.coefficients.push_back(static_cast<double>(reader.f32()));
      }
      values = eval_polynomial(poly, region);
    } else {
      const std::uint8_t flag = reader.u8();
      if (flag == 1) {
        values.assign(region.size(), quantizer->dequantize(reader.u8()));
      } else if (flag == 0) {
        MaskData mask;
        mask.density = spec->density();
        for (const Pixel& p : region.pixels()) {
          if (grid[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(p.x)]) {
            mask.positions.push_back(p);
          }
        }
        if (mask.positions.empty()) {
          throw CodecError(CodecError::Code::PayloadExhausted, "mask flag set on a region without grid pixels");
        }
        for (std::size_t k = 0; k < mask.positions.size(); ++k) {
          mask.values.push_back(quantizer->dequantize(reader.u8()));
        }
        values = inpaint(h.op, region, mask, cg);
      } else {
        throw CodecError(CodecError::Code::PayloadExhausted, "invalid region flag byte");
      }
    }
    const auto px = region.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) out.image.set(px[i].x, px[i].y, values[i]);
  }
  if (reader.remaining() != 0) {
    throw CodecError(CodecError::Code::BodyLengthMismatch, "payload bytes left after the last region");
  }
  return out;
}

Image decode(std::span<const std::uint8_t> bytes) { return decode_detailed(bytes).image; }

}  // namespace mscodec
