#include "mscodec/operators.hpp"

#include <stdexcept>

namespace mscodec {

std::string_view to_string(OperatorId op) {
  switch (op) {
    case OperatorId::P0: return "p0";
    case OperatorId::P1: return "p1";
    case OperatorId::P2: return "p2";
    case OperatorId::Diffusion: return "diffusion";
    case OperatorId::Shepard: return "shepard";
  }
  return "unknown";
}

std::optional<OperatorId> parse_operator(std::string_view name) {
  for (OperatorId op : kAllOperators) {
    if (to_string(op) == name) return op;
  }
  return std::nullopt;
}

std::optional<OperatorId> operator_from_byte(std::uint8_t byte) {
  if (byte > static_cast<std::uint8_t>(OperatorId::Shepard)) return std::nullopt;
  return static_cast<OperatorId>(byte);
}

std::vector<double> inpaint(OperatorId op, const RegionView& region, const MaskData& mask,
                            const CgOptions& cg) {
  switch (op) {
    case OperatorId::Diffusion: return diffusion_reconstruct(region, mask, cg).values;
    case OperatorId::Shepard: return shepard_reconstruct(region, mask);
    default: throw std::invalid_argument("inpaint: not an inpainting operator");
  }
}

double sum_squared_error(const RegionView& region, const Image& f, std::span<const double> values) {
  const auto pixels = region.pixels();
  double sse = 0.0;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double d = values[i] - f.at(pixels[i]);
    sse += d * d;
  }
  return sse;
}

double region_sse(const RegionView& region, const Image& f, int degree) {
  return fit_polynomial(region, f, degree).sse;
}

double region_sse(OperatorId op, const RegionView& region, const Image& f, const MaskData& mask,
                  const CgOptions& cg) {
  return sum_squared_error(region, f, inpaint(op, region, mask, cg));
}

}  // namespace mscodec
