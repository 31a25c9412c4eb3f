#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mscodec {

/// Absolute heading on the corner lattice; y grows downwards.
enum class Direction : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

/// Heading change before the next crack edge. LEFT turns counter-clockwise
/// as seen on screen (North -> West).
enum class Move : std::uint8_t { Left = 0, Straight = 1, Right = 2 };

/// One path over crack edges. The first edge leaves the start corner in the
/// initial direction; each move then selects the next edge relative to the
/// current heading, so the chain covers moves.size() + 1 edges.
struct Chain {
  int start_x = 0;  // corner column in [0, width]
  int start_y = 0;  // corner row in [0, height]
  Direction initial = Direction::North;
  std::vector<Move> moves;

  friend bool operator==(const Chain&, const Chain&) = default;
};

struct ChainSet {
  int width = 0;
  int height = 0;
  std::vector<Chain> chains;

  std::size_t edge_count() const;
};

class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decomposes all crack edges between differently labelled 4-neighbours into
/// edge-disjoint chains. Corners are scanned row-major; a chain starts with
/// the smallest untraversed direction (N < E < S < W) and continues
/// preferring STRAIGHT, then LEFT, then RIGHT until its corner has no
/// untraversed boundary edge left. Image-border cracks are never emitted.
ChainSet encode_boundaries(std::span<const int> labels, int width, int height);

/// Marks every edge the chains traverse and labels the 4-connected pixel
/// components not separated by a marked edge, with ids in row-major order of
/// first pixel. Throws ChainError if a chain leaves the interior crack
/// lattice.
std::vector<int> decode_boundaries(const ChainSet& chains);

}  // namespace mscodec
