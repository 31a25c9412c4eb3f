#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mscodec/diffusion.hpp"
#include "mscodec/image.hpp"
#include "mscodec/mask.hpp"
#include "mscodec/operators.hpp"
#include "mscodec/polynomial.hpp"
#include "mscodec/quantizer.hpp"
#include "mscodec/region.hpp"

namespace mscodec {

/// Everything that determines the reconstruction error of a segment.
/// `grid` and `quantizer` only matter for inpainting operators.
struct ReconstructionModel {
  OperatorId op = OperatorId::P0;
  GridSpec grid = GridSpec::from_fixed(10000);
  Quantizer quantizer{256};
  CgOptions cg{};
};

/// Reconstruction error of arbitrary pixel sets of one image under a model.
///
/// Inpainting operators use the global grid mask restricted to the set, with
/// quantized (dequantized) values of f. A set without any grid pixel is
/// reconstructed as the constant dequantize(quantize(mean f)).
class RegionErrorModel {
 public:
  RegionErrorModel(const Image& f, ReconstructionModel model);

  const ReconstructionModel& model() const { return model_; }
  const Image& image() const { return *image_; }

  bool is_grid_pixel(int x, int y) const {
    return grid_[image_->index(x, y)] != 0;
  }

  /// Grid pixels inside `region`, row-major.
  std::vector<Pixel> mask_positions(const RegionView& region) const;
  /// Mask positions with dequantize(quantize(f)) values.
  MaskData sample_mask(const RegionView& region) const;
  /// quantize(mean of f over the region), the empty-mask fallback level.
  int fallback_index(const RegionView& region) const;

  /// `initial_guess` (region.pixels() order) warm-starts the diffusion
  /// solver and is ignored by the other operators.
  std::vector<double> reconstruct(const RegionView& region,
                                  std::span<const double> initial_guess = {}) const;
  double sse(const RegionView& region) const;

 private:
  const Image* image_;
  ReconstructionModel model_;
  std::vector<std::uint8_t> grid_;
};

struct BoundaryLengths {
  long total = 0;
  /// (smaller label, larger label) -> number of separating crack edges.
  std::map<std::pair<int, int>, long> pairs;
};

/// Counts horizontally and vertically adjacent pixel pairs with different
/// labels. The image border contributes nothing.
BoundaryLengths boundary_length(std::span<const int> labels, int width, int height);

/// Final partition with canonical ids (row-major order of first pixel).
struct Segmentation {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  std::vector<std::vector<Pixel>> regions;  // row-major pixel lists
  std::vector<double> sse;
  std::map<std::pair<int, int>, long> adjacency;

  std::size_t region_count() const { return regions.size(); }
  long boundary_length() const;
  double energy(double lambda) const;
};

struct MergeEvent {
  int kept = 0;
  int absorbed = 0;
  long joint_length = 0;
  double gain = 0.0;
  /// sse(union) - sse(kept) - sse(absorbed)
  double numerator = 0.0;
  double union_sse = 0.0;
};

/// Greedy region merging over a region adjacency graph.
///
/// Regions start as b x b blocks (b = 1 is one region per pixel) and carry
/// ids in row-major order of their first pixel; a merged region keeps the
/// smaller id. Candidate gains live in a lazy min-heap: each entry records
/// the version stamps of both regions and is discarded on pop if either
/// region has changed since. Polynomial operators keep PolyMoments per
/// region so a candidate costs a 6x6 solve; inpainting operators reconstruct
/// the union. Diffusion keeps each region's last solution and warm-starts the
/// union solve from the two parts. Shepard keeps per-pixel weighted sums, so
/// a union only revisits pixels within one window of the other part's mask
/// pixels (plus empty-window fallbacks), at cost proportional to the smaller
/// part.
class RegionMerger {
 public:
  RegionMerger(const Image& f, ReconstructionModel model, int block_size = 1);

  int region_count() const { return alive_count_; }
  bool alive(int id) const { return regions_[static_cast<std::size_t>(id)].alive; }
  /// Alive ids, ascending.
  std::vector<int> region_ids() const;
  const std::vector<Pixel>& pixels(int id) const { return regions_[static_cast<std::size_t>(id)].pixels; }
  double region_sse(int id) const { return regions_[static_cast<std::size_t>(id)].sse; }
  /// Joint boundary length, 0 when not adjacent.
  long joint_length(int i, int j) const;
  /// (neighbour id, joint length), ascending by id.
  std::vector<std::pair<int, long>> neighbours(int id) const;

  /// (sse(i u j) - sse(i) - sse(j)) / len(i, j). Throws std::invalid_argument
  /// when i and j are not adjacent.
  double merge_gain(int i, int j) const;

  /// Sum of region sse + lambda * total joint boundary length.
  double energy(double lambda) const;

  /// Current region id of every pixel (not canonical).
  std::vector<int> labels() const;

  /// Unconditionally merges adjacent i and j. Returns the surviving id.
  int merge(int i, int j);

  /// Greedy loop: repeatedly merges the valid candidate with the smallest
  /// gain while that gain is < lambda. Returns the number of merges.
  int run(double lambda, const std::function<void(const MergeEvent&)>& observer = {});

  Segmentation result() const;

  const RegionErrorModel& error_model() const { return errors_; }

 private:
  struct RegionState {
    std::vector<Pixel> pixels;
    std::optional<PolyMoments> moments;
    std::vector<double> values;  // diffusion only, pixels order
    std::vector<int> masks;      // Shepard only: grid pixels (linear index)
    std::vector<int> fallback;   // Shepard only: pixels with an empty window
    double sse = 0.0;
    std::unordered_map<int, long> neighbours;
    std::uint32_t version = 0;
    bool alive = true;
  };

  // New per-pixel Shepard state of a union; only pixels whose value changes.
  struct ShepardUpdate {
    int pixel;
    double num;
    double den;
    double lo;
    double hi;
    int nearest;  // linear index of the fallback mask pixel, -1 if none
    double value;
  };

  struct UnionEval {
    double sse = 0.0;
    std::optional<PolyMoments> moments;
    std::vector<double> values;
    std::vector<ShepardUpdate> shepard;
  };

  // Image-wide Shepard accumulators of the current partition: each pixel
  // holds the weighted sums over the mask pixels of its own region.
  struct ShepardCache {
    int half_width = 0;
    std::vector<double> weights;  // (2h+1)^2 window, row-major over (dy, dx)
    std::vector<int> cols, rows;  // selected grid columns / rows
    std::vector<double> num, den, lo, hi, value, mask_value;
    std::vector<int> nearest;
    std::vector<char> is_mask;
    // scratch for scatter accumulation
    std::vector<double> acc_num, acc_den, acc_lo, acc_hi;
    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;

    double weight(int dx, int dy) const {
      return weights[static_cast<std::size_t>((dy + half_width) * (2 * half_width + 1) + dx + half_width)];
    }
  };

  struct Candidate {
    double gain;
    int a;
    int b;
    std::uint32_t version_a;
    std::uint32_t version_b;
    double union_sse;
  };

  struct CandidateAfter {
    bool operator()(const Candidate& x, const Candidate& y) const {
      if (x.gain != y.gain) return x.gain > y.gain;
      if (x.a != y.a) return x.a > y.a;
      return x.b > y.b;
    }
  };

  UnionEval evaluate_union(int i, int j) const;
  double evaluate_single(RegionState& r) const;
  double shepard_single(int id);
  UnionEval shepard_union(int i, int j) const;
  void shepard_commit(int keep, int gone, const UnionEval& eval);
  void push_candidate(int i, int j);
  int merge_with(int i, int j, UnionEval eval);

  const Image* image_;
  RegionErrorModel errors_;
  int degree_;
  bool warm_;
  mutable std::optional<ShepardCache> shepard_;
  std::vector<RegionState> regions_;
  std::vector<int> owner_;  // initial region id of each pixel
  mutable std::vector<int> parent_;
  int alive_count_ = 0;
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateAfter> heap_;

  int find(int id) const;
};

/// Runs the greedy merge to completion and returns the canonical result.
Segmentation region_merge(const Image& f, const ReconstructionModel& model, double lambda,
                          int block_size = 1);

}  // namespace mscodec
