#pragma once

#include <span>
#include <vector>

#include "mscodec/region.hpp"

namespace mscodec {

struct CgOptions {
  /// Stop once ||b - Ax|| / ||b|| drops to this value.
  double tolerance = 1e-6;
  /// 0 selects 10 x (number of unknowns).
  int max_iterations = 0;
};

struct DiffusionResult {
  /// Reconstruction in region.pixels() order.
  std::vector<double> values;
  int iterations = 0;
  bool converged = true;
  double relative_residual = 0.0;
};

/// Homogeneous diffusion inpainting inside one segment: the 5-point discrete
/// Laplace equation on region \ mask, Dirichlet data at mask pixels, and
/// reflecting boundaries (neighbors outside the region are dropped from the
/// stencil). Solved matrix-free with unpreconditioned conjugate gradients.
///
/// `initial_guess`, when nonempty, is indexed like region.pixels(); otherwise
/// the iteration starts from the mean of the mask values. On
/// non-convergence the current iterate is returned with converged = false.
DiffusionResult diffusion_reconstruct(const RegionView& region, const MaskData& mask,
                                      const CgOptions& options = {},
                                      std::span<const double> initial_guess = {});

}  // namespace mscodec
