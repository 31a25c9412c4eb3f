#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mscodec/diffusion.hpp"
#include "mscodec/image.hpp"
#include "mscodec/polynomial.hpp"
#include "mscodec/region.hpp"
#include "mscodec/shepard.hpp"

namespace mscodec {

/// Reconstruction operator inside a segment. The numeric values are the
/// operator byte of the container header.
enum class OperatorId : std::uint8_t {
  P0 = 0,
  P1 = 1,
  P2 = 2,
  Diffusion = 3,
  Shepard = 4,
};

inline constexpr OperatorId kAllOperators[] = {OperatorId::P0, OperatorId::P1, OperatorId::P2,
                                               OperatorId::Diffusion, OperatorId::Shepard};

constexpr bool is_inpainting(OperatorId op) {
  return op == OperatorId::Diffusion || op == OperatorId::Shepard;
}

/// Degree of a polynomial operator; -1 for inpainting operators.
constexpr int polynomial_degree(OperatorId op) {
  switch (op) {
    case OperatorId::P0: return 0;
    case OperatorId::P1: return 1;
    case OperatorId::P2: return 2;
    default: return -1;
  }
}

/// Lower-case CLI name: p0, p1, p2, diffusion, shepard.
std::string_view to_string(OperatorId op);
std::optional<OperatorId> parse_operator(std::string_view name);
std::optional<OperatorId> operator_from_byte(std::uint8_t byte);

/// Inpainting reconstruction with the named operator (Diffusion or Shepard).
std::vector<double> inpaint(OperatorId op, const RegionView& region, const MaskData& mask,
                            const CgOptions& cg = {});

/// sum over the region of (u - f)^2 for a polynomial fit of `degree`.
double region_sse(const RegionView& region, const Image& f, int degree);

/// sum over the region of (u - f)^2 for an inpainting reconstruction from
/// `mask`.
double region_sse(OperatorId op, const RegionView& region, const Image& f, const MaskData& mask,
                  const CgOptions& cg = {});

/// sum of squared differences between `values` (region order) and f.
double sum_squared_error(const RegionView& region, const Image& f, std::span<const double> values);

}  // namespace mscodec
