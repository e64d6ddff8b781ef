#pragma once

#include <array>
#include <functional>
#include <vector>

namespace lhpp {

/// Closed interval [lo, hi] with finite endpoints.
struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_);
    double width() const { return hi - lo; }
};

/// Lower-triangular 4x4 factor of a correlation matrix.
struct LowerTriangular4 {
    // entries[i][j] == 0 for j > i
    std::array<std::array<double, 4>, 4> entries{};

    double operator()(int i, int j) const { return entries[i][j]; }

    /// C * C^T
    std::array<std::array<double, 4>, 4> self_product() const;
};

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function, accurate to ~1e-16 absolute.
/// NaN propagates; +-inf map to 1/0.
double norm_cdf(double x);

/// Inverse of norm_cdf. p must lie in [0,1]; the endpoints map to -+inf.
double norm_inv(double p);

/// Bivariate standard normal distribution function P(X <= x, Y <= y) with
/// correlation rho in [-1,1]. Absolute accuracy ~1e-15 (Drezner-Wesolowsky /
/// Genz scheme).
double bivar_norm_cdf(double x, double y, double rho);

/// Gauss-Legendre rule on [-1,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule with the given number of nodes (nodes >= 2).
const QuadratureRule& gauss_legendre(int nodes);

/// Gauss-Legendre integral of f over the interval.
double integrate(const std::function<double(double)>& f, const Interval& interval,
                 int nodes);

/// Root of f inside the bracket: bisection with secant acceleration, never
/// leaves the bracket. Stops at |f| <= tol or bracket width <= 1e-12.
double find_root(const std::function<double(double)>& f, const Interval& bracket,
                 double tol);

/// Closed-form Cholesky factor of the 4x4 correlation matrix
///   [ 1      rho_b   rho_rb  rho_rb ]
///   [ rho_b  1       rho_rb  rho_rb ]
///   [ rho_rb rho_rb  1       rho_r  ]
///   [ rho_rb rho_rb  rho_r   1      ]
/// for two banks and their two RE loans. Throws parameter_error when the
/// matrix is not positive semidefinite.
LowerTriangular4 cholesky4(double rho_b, double rho_r, double rho_rb);

/// log of the binomial coefficient C(n, k), exact for n <= 20.
double log_binomial(int n, int k);

}  // namespace lhpp
