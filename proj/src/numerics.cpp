#include "lhpp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "lhpp/errors.hpp"

namespace lhpp {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo > hi) {
        std::ostringstream os;
        os << "invalid interval [" << lo_ << ", " << hi_ << "]";
        throw parameter_error(os.str());
    }
}

std::array<std::array<double, 4>, 4> LowerTriangular4::self_product() const {
    std::array<std::array<double, 4>, 4> p{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k <= std::min(i, j); ++k) s += entries[i][k] * entries[j][k];
            p[i][j] = s;
        }
    return p;
}

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double norm_cdf(double x) {
    if (std::isnan(x)) return x;
    return 0.5 * std::erfc(-x / kSqrt2);
}

// Wichura's AS 241 (PPND16) rational approximations, polished with one
// Halley step against norm_cdf.
double norm_inv(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw std::domain_error("norm_inv: p must lie in [0,1]");
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;

    const double q = p - 0.5;
    double x;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        x = q *
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
    } else {
        double r = q < 0.0 ? p : 1.0 - p;
        r = std::sqrt(-std::log(r));
        if (r <= 5.0) {
            r -= 1.6;
            x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                    3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                  4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                  2.05319162663775882187e0) * r + 1.0);
        } else {
            r -= 5.0;
            x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                  5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
                ((((((1.42151175831644588870e-15 * r + 1.84631831751005468180e-6) * r +
                     7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r +
                   1.36929880922735805310e-1) * r + 5.99832206555887937690e-1) * r +
                 1.0);
        }
        if (q < 0.0) x = -x;
    }

    // one Halley refinement; skipped in the extreme tail where the cdf
    // underflows
    if (std::fabs(x) < 37.0) {
        const double e = norm_cdf(x) - p;
        const double u = e / norm_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

namespace {

// P(X > h, Y > k) for standard bivariate normal with correlation r.
// Genz's adaptation of the Drezner-Wesolowsky scheme.
double bvn_upper(double h, double k, double r) {
    if (std::isnan(h) || std::isnan(k)) return std::numeric_limits<double>::quiet_NaN();
    if (h == kInf || k == kInf) return 0.0;
    if (h == -kInf) return k == -kInf ? 1.0 : norm_cdf(-k);
    if (k == -kInf) return norm_cdf(-h);

    int ng;
    if (std::fabs(r) < 0.3)
        ng = 6;
    else if (std::fabs(r) < 0.75)
        ng = 12;
    else
        ng = 20;
    const QuadratureRule& rule = gauss_legendre(ng);

    double hk = h * k;
    double bvn = 0.0;
    if (std::fabs(r) < 0.925) {
        if (std::fabs(r) > 0.0) {
            const double hs = (h * h + k * k) / 2.0;
            const double asr = std::asin(r);
            for (int i = 0; i < ng; ++i) {
                const double sn = std::sin(asr * (rule.nodes[i] + 1.0) / 2.0);
                bvn += rule.weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
            bvn = bvn * asr / (4.0 * kPi);
        }
        bvn += norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (std::fabs(r) < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 16.0;
            double asr = -(bs / as + hk) / 2.0;
            if (asr > -100.0)
                bvn = a * std::exp(asr) *
                      (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
                       c * d * as * as / 5.0);
            if (-hk < 100.0) {
                const double b = std::sqrt(bs);
                const double sp = std::sqrt(2.0 * kPi) * norm_cdf(-b / a);
                bvn -= std::exp(-hk / 2.0) * sp * b *
                       (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            const QuadratureRule& rule20 = gauss_legendre(20);
            for (int i = 0; i < 20; ++i) {
                const double x = a * (rule20.nodes[i] + 1.0);
                const double xs = x * x;
                const double rs = std::sqrt(1.0 - xs);
                asr = -(bs / xs + hk) / 2.0;
                if (asr > -100.0) {
                    const double sp = 1.0 + c * xs * (1.0 + d * xs);
                    const double ep =
                        std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
                    bvn += a * rule20.weights[i] * std::exp(asr) * (ep - sp);
                }
            }
            bvn = -bvn / (2.0 * kPi);
        }
        if (r > 0.0) {
            bvn += norm_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double bivar_norm_cdf(double x, double y, double rho) {
    if (std::isnan(rho) || std::fabs(rho) > 1.0)
        throw std::domain_error("bivar_norm_cdf: rho must lie in [-1,1]");
    return bvn_upper(-x, -y, rho);
}

namespace {

QuadratureRule make_gauss_legendre(int n) {
    // nodes via Newton iteration on the Legendre polynomial recurrence
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int nodes) {
    if (nodes < 2) throw std::domain_error("gauss_legendre: nodes must be >= 2");
    static std::mutex mtx;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(nodes);
    if (it == cache.end()) it = cache.emplace(nodes, make_gauss_legendre(nodes)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, const Interval& interval,
                 int nodes) {
    const QuadratureRule& rule = gauss_legendre(nodes);
    const double mid = 0.5 * (interval.lo + interval.hi);
    const double half = 0.5 * (interval.hi - interval.lo);
    double sum = 0.0, comp = 0.0;  // Neumaier summation
    for (int i = 0; i < nodes; ++i) {
        const double v = rule.weights[i] * f(mid + half * rule.nodes[i]);
        if (!std::isfinite(v))
            throw numerical_error("integrate: nonfinite integrand value");
        const double t = sum + v;
        comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return half * (sum + comp);
}

double find_root(const std::function<double(double)>& f, const Interval& bracket,
                 double tol) {
    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::isnan(fa) || std::isnan(fb))
        throw numerical_error("find_root: function returned NaN at a bracket endpoint");
    if (fa * fb > 0.0) {
        std::ostringstream os;
        os << "find_root: no sign change on [" << a << ", " << b << "]";
        throw bracketing_error(os.str());
    }
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        // secant proposal on even steps, bisection on odd steps so the
        // bracket provably shrinks; never step outside the bracket
        double x = 0.5 * (a + b);
        if (it % 2 == 0 && fb != fa) {
            const double secant = (a * fb - b * fa) / (fb - fa);
            const double w = b - a;
            if (secant > a + 1e-3 * w && secant < b - 1e-3 * w) x = secant;
        }
        const double fx = f(x);
        if (std::isnan(fx)) throw numerical_error("find_root: function returned NaN");
        if (std::fabs(fx) <= tol) return x;
        if (fa * fx <= 0.0) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    return 0.5 * (a + b);
}

LowerTriangular4 cholesky4(double rho_b, double rho_r, double rho_rb) {
    const double one_b = 1.0 + rho_b;
    const double dd = 1.0 + rho_b - 2.0 * rho_rb * rho_rb;
    const double c33s = dd / one_b;
    // last pivot; the numerator (1+rho_b)(1-rho_r^2) - 4 rho_rb^2 (1-rho_r)
    // comes from completing the Cholesky recurrence
    const double c44s_num = one_b * (1.0 - rho_r * rho_r) - 4.0 * rho_rb * rho_rb * (1.0 - rho_r);
    if (std::fabs(rho_b) > 1.0 || std::fabs(rho_r) > 1.0 || std::fabs(rho_rb) > 1.0 ||
        dd < -1e-14 || c44s_num < -1e-12) {
        std::ostringstream os;
        os << "cholesky4: correlation matrix (rho_b=" << rho_b << ", rho_r=" << rho_r
           << ", rho_rb=" << rho_rb << ") is not positive semidefinite";
        throw parameter_error(os.str());
    }
    const double c44s = dd > 0.0 ? std::max(0.0, c44s_num) / dd : 0.0;

    LowerTriangular4 c;
    c.entries[0][0] = 1.0;
    c.entries[1][0] = rho_b;
    c.entries[1][1] = std::sqrt(std::max(0.0, 1.0 - rho_b * rho_b));
    c.entries[2][0] = rho_rb;
    c.entries[2][1] =
        c.entries[1][1] > 0.0 ? rho_rb * (1.0 - rho_b) / c.entries[1][1] : 0.0;
    c.entries[2][2] = std::sqrt(std::max(0.0, c33s));
    c.entries[3][0] = rho_rb;
    c.entries[3][1] = c.entries[2][1];
    c.entries[3][2] = c.entries[2][2] > 0.0
                          ? (rho_r * one_b - 2.0 * rho_rb * rho_rb) /
                                std::sqrt(one_b * dd)
                          : 0.0;
    c.entries[3][3] = std::sqrt(c44s);

    // reject indefinite matrices that slip past the closed-form pivots
    const auto p = c.self_product();
    const double target[4][4] = {{1.0, rho_b, rho_rb, rho_rb},
                                 {rho_b, 1.0, rho_rb, rho_rb},
                                 {rho_rb, rho_rb, 1.0, rho_r},
                                 {rho_rb, rho_rb, rho_r, 1.0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::fabs(p[i][j] - target[i][j]) > 1e-9)
                throw parameter_error(
                    "cholesky4: correlation matrix is not positive semidefinite");
    return c;
}

double log_binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) throw std::domain_error("log_binomial: need 0 <= k <= n");
    if (k == 0 || k == n) return 0.0;
    if (n <= 20) {
        // exact in double precision for n <= 20
        double c = 1.0;
        const int kk = std::min(k, n - k);
        for (int i = 1; i <= kk; ++i) c = c * (n - kk + i) / i;
        return std::log(std::round(c));
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace lhpp
