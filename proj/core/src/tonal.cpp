#include "mscodec/mask.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mscodec {

namespace {

MaskData make_mask(std::span<const Pixel> positions, const std::vector<int>& indices,
                   const Quantizer& quantizer, double density) {
  MaskData mask;
  mask.positions.assign(positions.begin(), positions.end());
  mask.values.reserve(indices.size());
  for (int i : indices) mask.values.push_back(quantizer.dequantize(i));
  mask.density = density;
  return mask;
}

// Candidate levels adjacent to `current`, lower first.
std::vector<int> neighbours(int current, int levels) {
  std::vector<int> out;
  if (current > 0) out.push_back(current - 1);
  if (current + 1 < levels) out.push_back(current + 1);
  return out;
}

void optimize_shepard(const RegionView& region, const std::vector<double>& target,
                      const MaskData& mask, const std::vector<std::size_t>& order,
                      std::vector<int>& indices, const Quantizer& quantizer, int budget,
                      TonalResult& result) {
  ShepardField field(region, mask);
  for (int sweep = 0; sweep < budget; ++sweep) {
    ++result.sweeps;
    bool changed = false;
    for (std::size_t k : order) {
      int best_level = indices[k];
      double best_delta = 0.0;
      for (int level : neighbours(indices[k], quantizer.levels())) {
        const double delta = field.delta_sse(k, quantizer.dequantize(level), target);
        if (delta < best_delta) {
          best_delta = delta;
          best_level = level;
        }
      }
      if (best_level != indices[k]) {
        field.set_value(k, quantizer.dequantize(best_level));
        indices[k] = best_level;
        ++result.accepted_moves;
        changed = true;
      }
    }
    if (!changed) break;
  }
}

void optimize_diffusion(const RegionView& region, const Image& f, MaskData mask,
                        const std::vector<std::size_t>& order, std::vector<int>& indices,
                        const Quantizer& quantizer, int budget, const CgOptions& cg,
                        TonalResult& result) {
  DiffusionResult current = diffusion_reconstruct(region, mask, cg);
  double current_sse = sum_squared_error(region, f, current.values);
  for (int sweep = 0; sweep < budget; ++sweep) {
    ++result.sweeps;
    bool changed = false;
    for (std::size_t k : order) {
      const double original = mask.values[k];
      int best_level = indices[k];
      double best_sse = current_sse;
      DiffusionResult best;
      for (int level : neighbours(indices[k], quantizer.levels())) {
        mask.values[k] = quantizer.dequantize(level);
        DiffusionResult trial = diffusion_reconstruct(region, mask, cg, current.values);
        const double sse = sum_squared_error(region, f, trial.values);
        if (sse < best_sse) {
          best_sse = sse;
          best_level = level;
          best = std::move(trial);
        }
      }
      if (best_level != indices[k]) {
        mask.values[k] = quantizer.dequantize(best_level);
        indices[k] = best_level;
        current = std::move(best);
        current_sse = best_sse;
        ++result.accepted_moves;
        changed = true;
      } else {
        mask.values[k] = original;
      }
    }
    if (!changed) break;
  }
}

}  // namespace

TonalResult tonal_optimize(OperatorId op, const RegionView& region, const Image& f,
                           std::span<const Pixel> positions, std::vector<int> indices,
                           const Quantizer& quantizer, double density, int budget,
                           const CgOptions& cg) {
  if (!is_inpainting(op)) throw std::invalid_argument("tonal_optimize: not an inpainting operator");
  if (positions.empty()) throw std::invalid_argument("tonal_optimize: empty mask");
  if (positions.size() != indices.size()) {
    throw std::invalid_argument("tonal_optimize: positions/indices length mismatch");
  }
  for (int& i : indices) i = std::clamp(i, 0, quantizer.levels() - 1);

  TonalResult result;
  const MaskData start = make_mask(positions, indices, quantizer, density);
  result.initial_sse = region_sse(op, region, f, start, cg);
  result.indices = indices;
  result.final_sse = result.initial_sse;
  if (budget <= 0 || result.initial_sse == 0.0) return result;

  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row_major_less(positions[a], positions[b]);
  });

  std::vector<int> working = indices;
  if (op == OperatorId::Shepard) {
    std::vector<double> target;
    target.reserve(region.size());
    for (const Pixel& p : region.pixels()) target.push_back(f.at(p));
    optimize_shepard(region, target, start, order, working, quantizer, budget, result);
  } else {
    optimize_diffusion(region, f, start, order, working, quantizer, budget, cg, result);
  }

  const double final_sse =
      region_sse(op, region, f, make_mask(positions, working, quantizer, density), cg);
  if (final_sse <= result.initial_sse) {
    result.indices = std::move(working);
    result.final_sse = final_sse;
  }
  return result;
}

}  // namespace mscodec
