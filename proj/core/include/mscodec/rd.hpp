#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mscodec/codec.hpp"
#include "mscodec/image.hpp"
#include "mscodec/operators.hpp"

namespace mscodec {

/// n values spaced evenly in log scale from lo to hi inclusive.
std::vector<double> log_ladder(double lo, double hi, int n);

struct SweepGrid {
  std::vector<double> lambdas;
  std::vector<double> densities;
  std::vector<int> levels;
  std::vector<OperatorId> operators;
};

struct SweepPoint {
  OperatorId op = OperatorId::P0;
  double lambda = 0.0;
  std::optional<double> density;
  std::optional<int> levels;
};

/// Operators in list order; per operator every lambda, and for inpainting
/// operators every (density, q) pair under it. Polynomial operators take
/// no density or q, so they contribute |lambdas| points each.
std::vector<SweepPoint> enumerate(const SweepGrid& grid);

struct SweepRow {
  SweepPoint point;
  bool ok = false;
  double bpp = 0.0;
  double psnr = 0.0;  // +inf when lossless
  double encode_ms = 0.0;
  double decode_ms = 0.0;
  std::string status;  // "ok" or the error message
};

struct SweepOptions {
  int block_size = 1;
  int tonal_budget = 3;
  /// Worker threads; rows keep grid order whatever the completion order.
  int threads = 1;
};

std::vector<SweepRow> run_sweep(const Image& img, const SweepGrid& grid, const SweepOptions& options = {});

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct RdPoint {
  double bpp = 0.0;
  double psnr = 0.0;
};

/// Best PSNR per distinct bpp, then only the points that raise the running
/// maximum in increasing bpp. Both coordinates are nondecreasing.
std::vector<RdPoint> upper_envelope(std::vector<RdPoint> points);

/// Envelope of the successful rows for one operator.
std::vector<RdPoint> operator_envelope(const std::vector<SweepRow>& rows, OperatorId op);

/// Best PSNR achievable at a rate of at most `bpp` on an envelope; -inf
/// below its first point.
double best_psnr_at(const std::vector<RdPoint>& envelope, double bpp);

/// One polyline per operator present in `rows`.
void write_svg(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace mscodec
