#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mscodec/diffusion.hpp"
#include "mscodec/operators.hpp"
#include "mscodec/polynomial.hpp"
#include "mscodec/shepard.hpp"
#include "test_support.hpp"

using namespace mscodec;
using testing_support::rel_diff;
using testing_support::Rng;

namespace {

std::vector<Pixel> rect(int x0, int y0, int w, int h) {
  std::vector<Pixel> p;
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) p.push_back({x, y});
  return p;
}

MaskData mask_from(const Image& f, const std::vector<Pixel>& positions, double density = 1.0) {
  MaskData m;
  m.positions = positions;
  for (const Pixel& p : positions) m.values.push_back(f.at(p));
  m.density = density;
  return m;
}

// Every k-th pixel of a region (at least one).
std::vector<Pixel> sparse_subset(Rng& rng, const std::vector<Pixel>& region, double fraction) {
  std::vector<Pixel> out;
  for (const Pixel& p : region)
    if (rng.unit() < fraction) out.push_back(p);
  if (out.empty()) out.push_back(region[region.size() / 2]);
  return out;
}

}  // namespace

TEST(RegionView, ValidatesAndSorts) {
  EXPECT_THROW(RegionView(4, 4, std::vector<Pixel>{}), std::invalid_argument);
  EXPECT_THROW(RegionView(4, 4, std::vector<Pixel>{{4, 0}}), std::invalid_argument);
  EXPECT_THROW(RegionView(4, 4, std::vector<Pixel>{{1, 1}, {1, 1}}), std::invalid_argument);
  const RegionView r(4, 4, std::vector<Pixel>{{2, 1}, {0, 1}, {3, 0}});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r.pixels()[0], (Pixel{3, 0}));
  EXPECT_EQ(r.pixels()[1], (Pixel{0, 1}));
  EXPECT_EQ(r.index_of(2, 1), 2);
  EXPECT_FALSE(r.contains(1, 1));
}

TEST(Polynomial, MonomialCounts) {
  EXPECT_EQ(monomial_count(0), 1);
  EXPECT_EQ(monomial_count(1), 3);
  EXPECT_EQ(monomial_count(2), 6);
}

TEST(Polynomial, DegreeZeroIsMean) {
  Rng rng(1);
  const Image f = testing_support::random_image(rng, 9, 9, false);
  const auto pixels = testing_support::random_region(rng, 9, 9, 30);
  const RegionView region(9, 9, pixels);
  double mean = 0.0;
  for (const Pixel& p : pixels) mean += f.at(p);
  mean /= static_cast<double>(pixels.size());
  double sse = 0.0;
  for (const Pixel& p : pixels) sse += (f.at(p) - mean) * (f.at(p) - mean);
  const PolyFit fit = fit_polynomial(region, f, 0);
  ASSERT_EQ(fit.poly.coefficients.size(), 1u);
  EXPECT_LT(rel_diff(fit.poly.coefficients[0], mean), 1e-12);
  EXPECT_LT(rel_diff(fit.sse, sse), 1e-12);
}

TEST(Polynomial, PlaneIsReproducedExactly) {
  std::vector<double> s;
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) s.push_back(2.0 * x + 3.0 * y);
  const Image f(8, 8, s);
  Rng rng(2);
  const RegionView region(8, 8, testing_support::random_region(rng, 8, 8, 20));
  const PolyFit fit = fit_polynomial(region, f, 1);
  EXPECT_LT(fit.sse, 1e-18);
  const std::vector<double> u = eval_polynomial(fit.poly, region);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(u[i], f.at(region.pixels()[i]), 1e-10);
}

TEST(Polynomial, ConstantCoefficientsEvaluate) {
  PolyCoefficients c;
  c.degree = 0;
  c.coefficients = {42.0};
  const RegionView region(5, 5, rect(1, 1, 3, 2));
  for (double v : eval_polynomial(c, region)) EXPECT_EQ(v, 42.0);
}

TEST(Polynomial, MatchesNormalEquationOracle6x6) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Image f = testing_support::random_image(rng, 12, 12, false);
    const auto pixels = rect(rng.integer(0, 6), rng.integer(0, 6), 6, 6);
    const PolyFit fit = fit_polynomial(RegionView(12, 12, pixels), f, 2);
    const auto oracle = testing_support::oracle_poly_fit(pixels, f, 2);
    ASSERT_EQ(oracle.rank, 6);
    for (int k = 0; k < 6; ++k) {
      EXPECT_LT(rel_diff(fit.poly.coefficients[static_cast<std::size_t>(k)],
                         oracle.coefficients[static_cast<std::size_t>(k)]), 1e-9);
    }
    EXPECT_LT(rel_diff(fit.sse, oracle.sse), 1e-9);
  }
}

TEST(Polynomial, FitEvalResidualMatchesReportedSse) {
  Rng rng(4);
  for (int degree = 0; degree <= 2; ++degree) {
    const Image f = testing_support::random_image(rng, 20, 20, false);
    const RegionView region(20, 20, testing_support::random_region(rng, 20, 20, 80));
    const PolyFit fit = fit_polynomial(region, f, degree);
    const double direct = sum_squared_error(region, f, eval_polynomial(fit.poly, region));
    EXPECT_LT(rel_diff(direct, fit.sse), 1e-9);
  }
}

TEST(Polynomial, ResidualOrthogonalToMonomials) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Image f = testing_support::random_image(rng, 24, 24, false);
    const RegionView region(24, 24, testing_support::random_region(rng, 24, 24, 120));
    const PolyFit fit = fit_polynomial(region, f, 2);
    const std::vector<double> u = eval_polynomial(fit.poly, region);
    double rnorm = 0.0;
    std::array<double, 6> dots{};
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Pixel p = region.pixels()[i];
      const double r = f.at(p) - u[i];
      const double a = p.x - fit.poly.center_x, b = p.y - fit.poly.center_y;
      const double mono[6] = {1, a, b, a * a, a * b, b * b};
      for (int k = 0; k < 6; ++k) dots[static_cast<std::size_t>(k)] += r * mono[k];
      rnorm += r * r;
    }
    rnorm = std::sqrt(rnorm);
    for (int k = 0; k < 6; ++k) {
      double cn = 0.0;
      for (const Pixel& p : region.pixels()) {
        const double a = p.x - fit.poly.center_x, b = p.y - fit.poly.center_y;
        const double mono[6] = {1, a, b, a * a, a * b, b * b};
        cn += mono[k] * mono[k];
      }
      EXPECT_LE(std::abs(dots[static_cast<std::size_t>(k)]) / std::sqrt(cn), 1e-6 * std::max(1.0, rnorm));
    }
  }
}

TEST(Polynomial, DegreeMonotoneSse) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Image f = testing_support::random_image(rng, 16, 16, false);
    const RegionView region(16, 16, testing_support::random_region(rng, 16, 16, rng.integer(1, 60)));
    const double s0 = fit_polynomial(region, f, 0).sse;
    const double s1 = fit_polynomial(region, f, 1).sse;
    const double s2 = fit_polynomial(region, f, 2).sse;
    EXPECT_LE(s1, s0 * (1 + 1e-12) + 1e-9);
    EXPECT_LE(s2, s1 * (1 + 1e-12) + 1e-9);
  }
}

TEST(Polynomial, RankDeficientFallsBack) {
  const Image f(4, 4, std::vector<double>(16, 0.0));
  Image g = f;
  g.set(0, 0, 10);
  g.set(1, 0, 30);
  const RegionView two(4, 4, std::vector<Pixel>{{0, 0}, {1, 0}});
  const PolyFit fit = fit_polynomial(two, g, 2);
  EXPECT_EQ(fit.poly.coefficients.size(), 6u);
  EXPECT_EQ(fit.effective_degree, 0);
  EXPECT_LT(fit.sse, 200.0 + 1e-9);  // at worst the constant fit
  for (std::size_t k = 3; k < 6; ++k) EXPECT_EQ(fit.poly.coefficients[k], 0.0);
  const std::vector<double> u = eval_polynomial(fit.poly, two);
  EXPECT_NEAR(u[0] + u[1], 40.0, 1e-9);

  // A straight line of pixels supports (1, u) but not the full plane.
  const RegionView line(4, 4, std::vector<Pixel>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  EXPECT_EQ(fit_polynomial(line, g, 2).effective_degree, 0);
  const RegionView single(4, 4, std::vector<Pixel>{{2, 2}});
  const PolyFit one = fit_polynomial(single, g, 1);
  EXPECT_EQ(one.sse, 0.0);
  EXPECT_EQ(one.poly.coefficients[0], 0.0);
}

TEST(Polynomial, MomentsMergeMatchesDirect) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Image f = testing_support::random_image(rng, 16, 16, false);
    const auto labels = testing_support::random_partition(rng, 16, 16, 2);
    std::vector<Pixel> a, b, all;
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) (labels[static_cast<std::size_t>(y * 16 + x)] == 0 ? a : b).push_back({x, y});
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) all.push_back({x, y});
    const PolyMoments merged = PolyMoments::merge(PolyMoments::from_pixels(a, f), PolyMoments::from_pixels(b, f));
    for (int degree = 0; degree <= 2; ++degree) {
      const double direct = fit_polynomial(RegionView(16, 16, all), f, degree).sse;
      EXPECT_LT(rel_diff(merged.solve(degree).sse, direct), 1e-9);
    }
  }
}

TEST(Polynomial, MergedMomentsDetectVanishingMonomial) {
  // uv is zero on every pixel of a plus shape, so P2 must fall back to P1
  // even when the moments come from merged parts with rounding residue.
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Image f = testing_support::random_image(rng, 9, 9, false);
    const int cx = rng.integer(2, 6), cy = rng.integer(2, 6);
    const std::vector<Pixel> centre_col{{cx, cy - 1}, {cx, cy}, {cx, cy + 1}};
    const std::vector<Pixel> left{{cx - 1, cy}}, right{{cx + 1, cy}};
    PolyMoments m = PolyMoments::merge(PolyMoments::from_pixels(centre_col, f), PolyMoments::from_pixels(left, f));
    m = PolyMoments::merge(m, PolyMoments::from_pixels(right, f));
    const PolyFit merged = m.solve(2);
    const std::vector<Pixel> plus{{cx, cy - 1}, {cx - 1, cy}, {cx, cy}, {cx + 1, cy}, {cx, cy + 1}};
    const PolyFit direct = fit_polynomial(RegionView(9, 9, plus), f, 2);
    EXPECT_EQ(merged.effective_degree, 1);
    EXPECT_EQ(direct.effective_degree, 1);
    EXPECT_LT(rel_diff(merged.sse, direct.sse), 1e-9);
    EXPECT_LT(rel_diff(direct.sse, testing_support::oracle_poly_fit(plus, f, 1).sse), 1e-9);
  }
}

TEST(Diffusion, OneByThreeMiddle) {
  const Image f(3, 1, std::vector<double>{0, 77, 100});
  const RegionView region(3, 1, rect(0, 0, 3, 1));
  const DiffusionResult r = diffusion_reconstruct(region, mask_from(f, {{0, 0}, {2, 0}}));
  EXPECT_NEAR(r.values[1], 50.0, 1e-6);
  EXPECT_EQ(r.values[0], 0.0);
  EXPECT_EQ(r.values[2], 100.0);
  EXPECT_TRUE(r.converged);
}

TEST(Diffusion, FullMaskReturnsMaskValues) {
  Rng rng(8);
  const Image f = testing_support::random_image(rng, 5, 5);
  const auto pixels = rect(0, 0, 5, 5);
  const DiffusionResult r = diffusion_reconstruct(RegionView(5, 5, pixels), mask_from(f, pixels));
  for (std::size_t i = 0; i < pixels.size(); ++i) EXPECT_EQ(r.values[i], f.at(pixels[i]));
  EXPECT_EQ(r.iterations, 0);
}

TEST(Diffusion, ConstantDataGivesConstant) {
  const Image f(10, 10, 42.0);
  Rng rng(9);
  const auto pixels = testing_support::random_region(rng, 10, 10, 50);
  const DiffusionResult r =
      diffusion_reconstruct(RegionView(10, 10, pixels), mask_from(f, {pixels.front(), pixels.back()}));
  for (double v : r.values) EXPECT_NEAR(v, 42.0, 1e-6 * 42.0);
}

TEST(Diffusion, MatchesDenseOracle) {
  Rng rng(10);
  for (int trial = 0; trial < 15; ++trial) {
    const Image f = testing_support::random_image(rng, 14, 14, false);
    const auto pixels = testing_support::random_region(rng, 14, 14, rng.integer(5, 120));
    const MaskData mask = mask_from(f, sparse_subset(rng, pixels, 0.15));
    CgOptions tight;
    tight.tolerance = 1e-12;
    const DiffusionResult r = diffusion_reconstruct(RegionView(14, 14, pixels), mask, tight);
    const std::vector<double> oracle = testing_support::oracle_diffusion(pixels, mask);
    ASSERT_TRUE(r.converged);
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(r.values[i], oracle[i], 1e-7);
  }
}

TEST(Diffusion, MaximumPrincipleAndReorderInvariance) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Image f = testing_support::random_image(rng, 20, 20, false);
    auto pixels = testing_support::random_region(rng, 20, 20, 150);
    const MaskData mask = mask_from(f, sparse_subset(rng, pixels, 0.05));
    const DiffusionResult r = diffusion_reconstruct(RegionView(20, 20, pixels), mask);
    const auto [lo, hi] = std::minmax_element(mask.values.begin(), mask.values.end());
    for (double v : r.values) {
      EXPECT_GE(v, *lo - 10 * 1e-6);
      EXPECT_LE(v, *hi + 10 * 1e-6);
    }
    std::reverse(pixels.begin(), pixels.end());
    std::swap(pixels[0], pixels[pixels.size() / 2]);
    EXPECT_EQ(diffusion_reconstruct(RegionView(20, 20, pixels), mask).values, r.values);
  }
}

TEST(Diffusion, NonConvergenceIsFlagged) {
  Rng rng(12);
  const Image f = testing_support::random_image(rng, 30, 30, false);
  const auto pixels = rect(0, 0, 30, 30);
  CgOptions opts;
  opts.max_iterations = 2;
  const DiffusionResult r = diffusion_reconstruct(RegionView(30, 30, pixels), mask_from(f, {{0, 0}, {29, 29}}), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_EQ(r.values.size(), pixels.size());
}

TEST(Shepard, SigmaAndWindow) {
  EXPECT_NEAR(shepard_sigma(0.25), 1.1283791670955126, 1e-12);
  EXPECT_EQ(shepard_half_width(0.25), 3);
  EXPECT_EQ(shepard_half_width(1.0), 2);  // sigma 0.564 -> ceil(1.128)
}

TEST(Shepard, SingleAndEquidistant) {
  const Image f(5, 1, std::vector<double>{10, 0, 0, 0, 30});
  const RegionView region(5, 1, rect(0, 0, 5, 1));
  MaskData one = mask_from(f, {{0, 0}}, 0.25);
  one.values[0] = 42.0;
  for (double v : shepard_reconstruct(region, one)) EXPECT_EQ(v, 42.0);
  const std::vector<double> two = shepard_reconstruct(region, mask_from(f, {{0, 0}, {4, 0}}, 0.25));
  EXPECT_NEAR(two[2], 20.0, 1e-12);
  EXPECT_EQ(two[0], 10.0);
  EXPECT_EQ(two[4], 30.0);
}

TEST(Shepard, MatchesGatherOracle) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Image f = testing_support::random_image(rng, 24, 24, false);
    const auto pixels = testing_support::random_region(rng, 24, 24, rng.integer(10, 300));
    const double d = rng.uniform(0.02, 0.5);
    const MaskData mask = mask_from(f, sparse_subset(rng, pixels, d), d);
    const std::vector<double> u = shepard_reconstruct(RegionView(24, 24, pixels), mask);
    const std::vector<double> oracle = testing_support::oracle_shepard(pixels, mask);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(u[i], oracle[i], 1e-9);
  }
}

TEST(Shepard, EmptyWindowUsesNearestRowMajorFirst) {
  // Mask pixels at (0,0) and (20,0), target (10,0) is equidistant and
  // outside both windows at d = 1 (half-width 2).
  const Image f(21, 1, 0.0);
  MaskData mask = mask_from(f, {{20, 0}, {0, 0}}, 1.0);
  mask.values = {200.0, 100.0};
  const RegionView region(21, 1, rect(0, 0, 21, 1));
  const std::vector<double> u = shepard_reconstruct(region, mask);
  EXPECT_EQ(u[10], 100.0);
  EXPECT_EQ(u[12], 200.0);
}

TEST(Shepard, IgnoresMaskPixelsOutsideTheRegion) {
  const Image f(4, 1, 0.0);
  const RegionView region(4, 1, rect(0, 0, 2, 1));
  MaskData mask = mask_from(f, {{3, 0}}, 0.5);
  EXPECT_THROW(shepard_reconstruct(region, mask), std::invalid_argument);
}

TEST(Shepard, FieldDeltaMatchesRecompute) {
  Rng rng(14);
  const Image f = testing_support::random_image(rng, 16, 16, false);
  const auto pixels = testing_support::random_region(rng, 16, 16, 120);
  const RegionView region(16, 16, pixels);
  MaskData mask = mask_from(f, sparse_subset(rng, pixels, 0.2), 0.2);
  ShepardField field(region, mask);
  std::vector<double> target;
  for (const Pixel& p : region.pixels()) target.push_back(f.at(p));
  auto unclamped_sse = [&](const ShepardField& fl) {
    double s = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) s += (fl.value(i) - target[i]) * (fl.value(i) - target[i]);
    return s;
  };
  for (int step = 0; step < 20; ++step) {
    const auto k = static_cast<std::size_t>(rng.integer(0, static_cast<int>(mask.positions.size()) - 1));
    const double v = rng.uniform(0, 255);
    const double before = unclamped_sse(field);
    const double delta = field.delta_sse(k, v, target);
    field.set_value(k, v);
    EXPECT_NEAR(unclamped_sse(field) - before, delta, 1e-6 * std::max(1.0, before));
  }
}

TEST(RegionSse, Examples) {
  const Image f(2, 1, std::vector<double>{0, 100});
  const RegionView region(2, 1, rect(0, 0, 2, 1));
  EXPECT_DOUBLE_EQ(region_sse(region, f, 0), 5000.0);

  const Image c(6, 6, 77.0);
  const RegionView all(6, 6, rect(0, 0, 6, 6));
  for (OperatorId op : kAllOperators) {
    if (is_inpainting(op)) {
      EXPECT_EQ(region_sse(op, all, c, mask_from(c, {{2, 2}}, 0.1)), 0.0);
    } else {
      EXPECT_EQ(region_sse(all, c, polynomial_degree(op)), 0.0);
    }
  }
  Rng rng(15);
  const Image g = testing_support::random_image(rng, 6, 6);
  EXPECT_EQ(region_sse(OperatorId::Shepard, all, g, mask_from(g, rect(0, 0, 6, 6), 1.0)), 0.0);
}

TEST(Operators, NamesRoundTrip) {
  for (OperatorId op : kAllOperators) {
    EXPECT_EQ(parse_operator(to_string(op)), op);
    EXPECT_EQ(operator_from_byte(static_cast<std::uint8_t>(op)), op);
  }
  EXPECT_FALSE(parse_operator("p3"));
  EXPECT_FALSE(operator_from_byte(5));
}
