#include "mscodec/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mscodec {

namespace {

struct Exponent {
  int a;
  int b;
};

constexpr std::array<Exponent, 6> kMonomials{{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};

constexpr double kPivotTolerance = 1e-10;

constexpr std::array<std::array<double, 5>, 5> kBinomial{{
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
}};

// Solves the k x k normal system with Jacobi scaling and an LDL^T
// factorization. Returns false when a monomial vanishes on the region or a
// scaled pivot collapses, i.e. the monomials are (numerically) dependent.
//
// A vanishing monomial is judged against n * s2^degree, s2 the coordinate
// variance, not against zero: moments assembled by merging carry rounding
// residue that Jacobi scaling would otherwise blow up to unit size.
bool solve_normal_equations(int k, const std::array<std::array<double, 6>, 6>& normal,
                            const std::array<double, 6>& rhs, std::array<double, 6>& out) {
  const double n = normal[0][0];
  const double s2 = k > 1 ? std::max(1.0, (normal[1][1] + normal[2][2]) / n) : 1.0;
  std::array<double, 6> scale{};
  for (int i = 0; i < k; ++i) {
    const double natural = n * std::pow(s2, kMonomials[static_cast<std::size_t>(i)].a + kMonomials[static_cast<std::size_t>(i)].b);
    if (!(normal[i][i] > kPivotTolerance * natural)) return false;
    scale[i] = 1.0 / std::sqrt(normal[i][i]);
  }
  std::array<std::array<double, 6>, 6> lower{};
  std::array<double, 6> diag{};
  for (int j = 0; j < k; ++j) {
    double d = normal[j][j] * scale[j] * scale[j];
    for (int m = 0; m < j; ++m) d -= lower[j][m] * lower[j][m] * diag[m];
    if (!(d > kPivotTolerance)) return false;
    diag[j] = d;
    for (int i = j + 1; i < k; ++i) {
      double v = normal[i][j] * scale[i] * scale[j];
      for (int m = 0; m < j; ++m) v -= lower[i][m] * lower[j][m] * diag[m];
      lower[i][j] = v / d;
    }
  }
  std::array<double, 6> y{};
  for (int i = 0; i < k; ++i) {
    double v = rhs[i] * scale[i];
    for (int m = 0; m < i; ++m) v -= lower[i][m] * y[m];
    y[i] = v;
  }
  for (int i = 0; i < k; ++i) y[i] /= diag[i];
  for (int i = k - 1; i >= 0; --i) {
    double v = y[i];
    for (int m = i + 1; m < k; ++m) v -= lower[m][i] * out[m];
    out[i] = v;
  }
  for (int i = 0; i < k; ++i) out[i] *= scale[i];
  return true;
}

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxPolyDegree) {
    throw std::invalid_argument("polynomial degree must be 0, 1 or 2");
  }
}

}  // namespace

double PolyCoefficients::evaluate(double x, double y) const {
  const double u = x - center_x;
  const double v = y - center_y;
  const std::array<double, 6> basis{1.0, u, v, u * u, u * v, v * v};
  double sum = 0.0;
  for (std::size_t i = 0; i < coefficients.size() && i < basis.size(); ++i) {
    sum += coefficients[i] * basis[i];
  }
  return sum;
}

PolyMoments PolyMoments::from_pixels(std::span<const Pixel> pixels, const Image& f) {
  if (pixels.empty()) throw std::invalid_argument("PolyMoments: empty pixel set");
  PolyMoments m;
  double sx = 0.0, sy = 0.0, sf = 0.0;
  for (const Pixel& p : pixels) {
    sx += p.x;
    sy += p.y;
    sf += f.at(p);
  }
  m.n_ = static_cast<double>(pixels.size());
  m.cx_ = sx / m.n_;
  m.cy_ = sy / m.n_;
  m.fmean_ = sf / m.n_;
  for (const Pixel& p : pixels) {
    const double u = p.x - m.cx_;
    const double v = p.y - m.cy_;
    const double g = f.at(p) - m.fmean_;
    std::array<double, 5> pu{1.0, u, u * u, u * u * u, u * u * u * u};
    std::array<double, 5> pv{1.0, v, v * v, v * v * v, v * v * v * v};
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; a + b <= 4; ++b) m.coord_[a][b] += pu[a] * pv[b];
    }
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; a + b <= 2; ++b) m.weighted_[a][b] += g * pu[a] * pv[b];
    }
    m.scatter_ += g * g;
  }
  return m;
}

void PolyMoments::shift_to(double cx, double cy, double fmean) {
  const double dx = cx_ - cx;
  const double dy = cy_ - cy;
  std::array<double, 5> px{1.0, dx, dx * dx, dx * dx * dx, dx * dx * dx * dx};
  std::array<double, 5> py{1.0, dy, dy * dy, dy * dy * dy, dy * dy * dy * dy};

  std::array<std::array<double, 5>, 5> coord{};
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      double s = 0.0;
      for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) {
          s += kBinomial[a][i] * kBinomial[b][j] * px[a - i] * py[b - j] * coord_[i][j];
        }
      }
      coord[a][b] = s;
    }
  }
  const double df = fmean_ - fmean;
  std::array<std::array<double, 3>, 3> weighted{};
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; a + b <= 2; ++b) {
      double s = 0.0;
      for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) {
          s += kBinomial[a][i] * kBinomial[b][j] * px[a - i] * py[b - j] * weighted_[i][j];
        }
      }
      weighted[a][b] = s + df * coord[a][b];
    }
  }
  scatter_ += 2.0 * df * weighted_[0][0] + n_ * df * df;
  coord_ = coord;
  weighted_ = weighted;
  cx_ = cx;
  cy_ = cy;
  fmean_ = fmean;
}

PolyMoments PolyMoments::merge(const PolyMoments& a, const PolyMoments& b) {
  const double n = a.n_ + b.n_;
  const double cx = (a.n_ * a.cx_ + b.n_ * b.cx_) / n;
  const double cy = (a.n_ * a.cy_ + b.n_ * b.cy_) / n;
  const double fm = (a.n_ * a.fmean_ + b.n_ * b.fmean_) / n;
  PolyMoments sa = a;
  PolyMoments sb = b;
  sa.shift_to(cx, cy, fm);
  sb.shift_to(cx, cy, fm);
  PolyMoments out = sa;
  out.n_ = n;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; i + j <= 4; ++j) out.coord_[i][j] += sb.coord_[i][j];
  }
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; i + j <= 2; ++j) out.weighted_[i][j] += sb.weighted_[i][j];
  }
  out.scatter_ += sb.scatter_;
  return out;
}

PolyFit PolyMoments::solve(int degree) const {
  check_degree(degree);
  PolyFit fit;
  fit.poly.degree = degree;
  fit.poly.center_x = cx_;
  fit.poly.center_y = cy_;
  fit.poly.coefficients.assign(static_cast<std::size_t>(monomial_count(degree)), 0.0);

  for (int d = degree; d >= 0; --d) {
    const int k = monomial_count(d);
    std::array<std::array<double, 6>, 6> normal{};
    std::array<double, 6> rhs{};
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        normal[i][j] = coord_[kMonomials[i].a + kMonomials[j].a][kMonomials[i].b + kMonomials[j].b];
      }
      rhs[i] = weighted_[kMonomials[i].a][kMonomials[i].b];
    }
    std::array<double, 6> c{};
    if (!solve_normal_equations(k, normal, rhs, c)) continue;
    double explained = 0.0;
    for (int i = 0; i < k; ++i) {
      fit.poly.coefficients[static_cast<std::size_t>(i)] = c[i];
      explained += c[i] * rhs[i];
    }
    fit.poly.coefficients[0] += fmean_;
    fit.sse = std::max(0.0, scatter_ - explained);
    fit.effective_degree = d;
    return fit;
  }
  // Unreachable for a nonempty region: the constant monomial is always
  // independent.
  fit.poly.coefficients[0] = fmean_;
  fit.sse = scatter_;
  return fit;
}

PolyFit fit_polynomial(const RegionView& region, const Image& f, int degree) {
  check_degree(degree);
  PolyFit fit = PolyMoments::from_pixels(region.pixels(), f).solve(degree);
  double sse = 0.0;
  for (const Pixel& p : region.pixels()) {
    const double r = f.at(p) - fit.poly.evaluate(p.x, p.y);
    sse += r * r;
  }
  fit.sse = sse;
  return fit;
}

std::vector<double> eval_polynomial(const PolyCoefficients& c, const RegionView& region) {
  std::vector<double> out;
  out.reserve(region.size());
  for (const Pixel& p : region.pixels()) out.push_back(c.evaluate(p.x, p.y));
  return out;
}

}  // namespace mscodec
