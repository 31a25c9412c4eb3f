#include "mscodec/chaincode.hpp"

#include <array>

namespace mscodec {

namespace {

constexpr std::array<int, 4> kDx{0, 1, 0, -1};
constexpr std::array<int, 4> kDy{-1, 0, 1, 0};

int turn(int heading, Move m) {
  switch (m) {
    case Move::Left: return (heading + 3) % 4;
    case Move::Straight: return heading;
    case Move::Right: return (heading + 1) % 4;
  }
  return heading;
}

// Crack-edge lattice. Vertical edge (x, y) joins corners (x, y)-(x, y+1) and
// separates pixels (x-1, y) and (x, y); horizontal edge (x, y) joins corners
// (x, y)-(x+1, y) and separates pixels (x, y-1) and (x, y).
class EdgeGrid {
 public:
  EdgeGrid(int width, int height)
      : w_(width), h_(height),
        vertical_(static_cast<std::size_t>(width + 1) * static_cast<std::size_t>(height), 0),
        horizontal_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height + 1), 0) {}

  // Edge leaving corner (cx, cy) in direction d; nullptr if it lies outside
  // the interior lattice (image border or beyond).
  std::uint8_t* edge(int cx, int cy, int d) {
    switch (d) {
      case 0: return vertical_at(cx, cy - 1);
      case 2: return vertical_at(cx, cy);
      case 3: return horizontal_at(cx - 1, cy);
      case 1: return horizontal_at(cx, cy);
    }
    return nullptr;
  }

  std::uint8_t* vertical_at(int x, int y) {
    if (x < 1 || x > w_ - 1 || y < 0 || y > h_ - 1) return nullptr;
    return &vertical_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_ + 1) + static_cast<std::size_t>(x)];
  }
  std::uint8_t* horizontal_at(int x, int y) {
    if (y < 1 || y > h_ - 1 || x < 0 || x > w_ - 1) return nullptr;
    return &horizontal_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)];
  }

 private:
  int w_;
  int h_;
  std::vector<std::uint8_t> vertical_;
  std::vector<std::uint8_t> horizontal_;
};

}  // namespace

std::size_t ChainSet::edge_count() const {
  std::size_t n = 0;
  for (const Chain& c : chains) n += c.moves.size() + 1;
  return n;
}

ChainSet encode_boundaries(std::span<const int> labels, int width, int height) {
  if (labels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("encode_boundaries: label count does not match dimensions");
  }
  auto label = [&](int x, int y) {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  };
  // 1 = untraversed boundary edge.
  EdgeGrid edges(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 1; x < width; ++x) {
      if (label(x - 1, y) != label(x, y)) *edges.vertical_at(x, y) = 1;
    }
  }
  for (int y = 1; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (label(x, y - 1) != label(x, y)) *edges.horizontal_at(x, y) = 1;
    }
  }

  auto open = [&](int cx, int cy, int d) {
    const std::uint8_t* e = edges.edge(cx, cy, d);
    return e != nullptr && *e == 1;
  };

  ChainSet out;
  out.width = width;
  out.height = height;
  for (int cy = 0; cy <= height; ++cy) {
    for (int cx = 0; cx <= width; ++cx) {
      for (;;) {
        int heading = -1;
        for (int d = 0; d < 4; ++d) {
          if (open(cx, cy, d)) {
            heading = d;
            break;
          }
        }
        if (heading < 0) break;

        Chain chain;
        chain.start_x = cx;
        chain.start_y = cy;
        chain.initial = static_cast<Direction>(heading);
        int x = cx;
        int y = cy;
        for (;;) {
          *edges.edge(x, y, heading) = 0;
          x += kDx[static_cast<std::size_t>(heading)];
          y += kDy[static_cast<std::size_t>(heading)];
          bool extended = false;
          for (Move m : {Move::Straight, Move::Left, Move::Right}) {
            const int next = turn(heading, m);
            if (open(x, y, next)) {
              chain.moves.push_back(m);
              heading = next;
              extended = true;
              break;
            }
          }
          if (!extended) break;
        }
        out.chains.push_back(std::move(chain));
      }
    }
  }
  return out;
}

std::vector<int> decode_boundaries(const ChainSet& set) {
  const int w = set.width;
  const int h = set.height;
  if (w <= 0 || h <= 0) throw ChainError("chain set has invalid dimensions");
  EdgeGrid edges(w, h);
  for (const Chain& chain : set.chains) {
    int x = chain.start_x;
    int y = chain.start_y;
    int heading = static_cast<int>(chain.initial);
    if (heading < 0 || heading > 3) throw ChainError("chain has invalid initial direction");
    for (std::size_t step = 0; step <= chain.moves.size(); ++step) {
      if (step > 0) {
        const auto m = chain.moves[step - 1];
        if (static_cast<int>(m) > 2) throw ChainError("chain has invalid move symbol");
        heading = turn(heading, m);
      }
      std::uint8_t* e = edges.edge(x, y, heading);
      if (e == nullptr) {
        throw ChainError("chain leaves the interior crack lattice at corner (" + std::to_string(x) +
                         ", " + std::to_string(y) + ")");
      }
      *e = 1;
      x += kDx[static_cast<std::size_t>(heading)];
      y += kDy[static_cast<std::size_t>(heading)];
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
  std::vector<std::pair<int, int>> stack;
  int next_id = 0;
  auto at = [&](int x, int y) -> int& {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
  };
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (at(sx, sy) >= 0) continue;
      const int id = next_id++;
      at(sx, sy) = id;
      stack.push_back({sx, sy});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        auto visit = [&](int nx, int ny, const std::uint8_t* crack) {
          if (*crack != 0 || at(nx, ny) >= 0) return;
          at(nx, ny) = id;
          stack.push_back({nx, ny});
        };
        if (x + 1 < w) visit(x + 1, y, edges.vertical_at(x + 1, y));
        if (x > 0) visit(x - 1, y, edges.vertical_at(x, y));
        if (y + 1 < h) visit(x, y + 1, edges.horizontal_at(x, y + 1));
        if (y > 0) visit(x, y - 1, edges.horizontal_at(x, y));
      }
    }
  }
  return labels;
}

}  // namespace mscodec
