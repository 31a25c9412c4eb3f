#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mscodec/image.hpp"

namespace mscodec {

enum class SynthKind { Steps, Ramps, VoronoiSmooth };

std::string to_string(SynthKind kind);
std::optional<SynthKind> parse_synth_kind(std::string_view name);

/// Seeded piecewise-smooth test images with integer samples, so a PGM round
/// trip is exact.
///
///  steps          piecewise constant on an axis-aligned grid of cells.
///                 Seed 0 is the canonical vertical step: 0 left of
///                 width / 2, 255 from there on.
///  ramps          horizontal bands with sinusoidal borders, each band an
///                 affine function of (x, y).
///  voronoi-smooth Voronoi cells, each a quadratic patch plus one smooth
///                 plane wave; jumps occur only on cell borders.
Image synthesize(SynthKind kind, int width, int height, std::uint64_t seed);

}  // namespace mscodec
