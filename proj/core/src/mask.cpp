#include "mscodec/mask.hpp"

#include <cmath>
#include <stdexcept>

namespace mscodec {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// floor(c * sqrt(D / 10000)) = floor(sqrt(c^2 D)) / 100.
std::uint64_t grid_floor(std::uint64_t c, std::uint64_t per_myriad) {
  return isqrt(c * c * per_myriad) / 100;
}

}  // namespace

GridSpec GridSpec::from_density(double density) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("mask density must lie in (0, 1]");
  }
  const long fixed = std::lround(density * 10000.0);
  if (fixed < 1) throw std::invalid_argument("mask density below 0.0001");
  return GridSpec(static_cast<std::uint16_t>(fixed));
}

GridSpec GridSpec::from_fixed(std::uint16_t per_myriad) {
  if (per_myriad < 1 || per_myriad > 10000) {
    throw std::invalid_argument("fixed-point mask density must lie in [1, 10000]");
  }
  return GridSpec(per_myriad);
}

bool GridSpec::selects(int c) const {
  const auto cu = static_cast<std::uint64_t>(c);
  return grid_floor(cu + 1, per_myriad_) > grid_floor(cu, per_myriad_);
}

std::vector<Pixel> build_grid_mask(int width, int height, const GridSpec& grid) {
  std::vector<int> cols, rows;
  for (int x = 0; x < width; ++x) {
    if (grid.selects(x)) cols.push_back(x);
  }
  for (int y = 0; y < height; ++y) {
    if (grid.selects(y)) rows.push_back(y);
  }
  std::vector<Pixel> out;
  out.reserve(cols.size() * rows.size());
  for (int y : rows) {
    for (int x : cols) out.push_back({x, y});
  }
  return out;
}

std::vector<Pixel> build_grid_mask(int width, int height, double density) {
  return build_grid_mask(width, height, GridSpec::from_density(density));
}

std::vector<std::uint8_t> grid_bitmap(int width, int height, const GridSpec& grid) {
  std::vector<std::uint8_t> bitmap(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  for (const Pixel& p : build_grid_mask(width, height, grid)) {
    bitmap[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.x)] = 1;
  }
  return bitmap;
}

}  // namespace mscodec
