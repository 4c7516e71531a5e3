#include "sphk/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sphk/util.hpp"

namespace sphk {

namespace {

// Direct products stay exact for small degrees; beyond this the log-gamma
// route avoids overflow.
constexpr int kDirectProductLimit = 30;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// log (a)_k for a > 0.
double log_pochhammer(double a, int k) {
  return std::lgamma(a + k) - std::lgamma(a);
}

// Exact binomial coefficient; throws if the value exceeds int64.
std::int64_t binomial_exact(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) /
        static_cast<unsigned __int128>(i);
    if (r > static_cast<unsigned __int128>(
                std::numeric_limits<std::int64_t>::max())) {
      throw std::overflow_error("binomial coefficient exceeds 64-bit range");
    }
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace

double pochhammer(double a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

double gegenbauer_eval(double lambda, int n, double x) {
  require(lambda >= 0.0, "gegenbauer_eval: lambda must be >= 0");
  require(n >= 0, "gegenbauer_eval: degree must be >= 0");
  x = clip_unit(x);
  if (n == 0) return 1.0;
  if (lambda == 0.0) {
    // Chebyshev limit: T_n = 2 x T_{n-1} - T_{n-2}.
    double y0 = 1.0, y1 = x;
    for (int k = 2; k <= n; ++k) {
      double y = 2.0 * x * y1 - y0;
      y0 = y1;
      y1 = y;
    }
    return y1;
  }
  double y0 = 1.0, y1 = 2.0 * lambda * x;
  for (int k = 2; k <= n; ++k) {
    double y =
        (2.0 * (k + lambda - 1.0) * x * y1 - (k + 2.0 * lambda - 2.0) * y0) / k;
    y0 = y1;
    y1 = y;
  }
  return y1;
}

double gegenbauer_normalized_eval(double lambda, int n, double x) {
  require(lambda >= 0.0, "gegenbauer_normalized_eval: lambda must be >= 0");
  require(n >= 0, "gegenbauer_normalized_eval: degree must be >= 0");
  x = clip_unit(x);
  if (n == 0) return 1.0;
  if (n == 1) return x;
  double y0 = 1.0, y1 = x;
  for (int k = 2; k <= n; ++k) {
    double y = (2.0 * (k + lambda - 1.0) * x * y1 - (k - 1.0) * y0) /
               (2.0 * lambda + k - 1.0);
    y0 = y1;
    y1 = y;
  }
  return y1;
}

double ultraspherical(int d, int n, double x) {
  require(d >= 1, "ultraspherical: dimension must be >= 1");
  require(n >= 0, "ultraspherical: degree must be >= 0");
  x = clip_unit(x);
  if (n == 0) return 1.0;
  if (n == 1) return x;
  // Same normalized recurrence with lambda = (d-1)/2; all coefficients are
  // exact small integers, so c_n(d,1) evaluates to exactly 1.
  double y0 = 1.0, y1 = x;
  for (int k = 2; k <= n; ++k) {
    double y = ((2.0 * k + d - 3.0) * x * y1 - (k - 1.0) * y0) / (k + d - 2.0);
    y0 = y1;
    y1 = y;
  }
  return y1;
}

std::vector<double> ultraspherical_row(int d, int n_max, double x) {
  require(d >= 1, "ultraspherical_row: dimension must be >= 1");
  require(n_max >= 0, "ultraspherical_row: n_max must be >= 0");
  x = clip_unit(x);
  std::vector<double> row(n_max + 1);
  row[0] = 1.0;
  if (n_max >= 1) row[1] = x;
  for (int k = 2; k <= n_max; ++k) {
    row[k] =
        ((2.0 * k + d - 3.0) * x * row[k - 1] - (k - 1.0) * row[k - 2]) /
        (k + d - 2.0);
  }
  return row;
}

std::int64_t harmonic_dim(int d, int n) {
  require(d >= 1, "harmonic_dim: dimension must be >= 1");
  require(n >= 0, "harmonic_dim: degree must be >= 0");
  if (n == 0) return 1;
  // (d)_{n-1} (2n+d-1)/n! == C(n+d-1, n) + C(n+d-2, n-1), exact in integers.
  return binomial_exact(n + d - 1, n) + binomial_exact(n + d - 2, n - 1);
}

double sphere_surface(int d) {
  require(d >= 0, "sphere_surface: dimension must be >= 0");
  // sigma_d = sigma_{d-2} * 2 pi / (d-1); avoids Gamma evaluations entirely.
  double even = 2.0;              // sigma_0
  double odd = 2.0 * M_PI;        // sigma_1
  if (d == 0) return even;
  if (d == 1) return odd;
  double s = (d % 2 == 0) ? even : odd;
  for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) {
    s *= 2.0 * M_PI / (k - 1);
  }
  return s;
}

UltrasphericalBasis make_basis(int d, int n_max) {
  require(d >= 1, "make_basis: dimension must be >= 1");
  require(n_max >= 0, "make_basis: n_max must be >= 0");
  UltrasphericalBasis basis;
  basis.d = d;
  basis.n_max = n_max;
  basis.norm_constants.resize(n_max + 1);
  const double ratio = sphere_surface(d) / sphere_surface(d - 1);
  for (int n = 0; n <= n_max; ++n) {
    basis.norm_constants[n] = ratio / static_cast<double>(harmonic_dim(d, n));
  }
  return basis;
}

double ultraspherical_eval(const UltrasphericalBasis& basis, int n, double x) {
  require(n >= 0 && n <= basis.n_max,
          "ultraspherical_eval: degree outside basis range");
  return ultraspherical(basis.d, n, x);
}

double ultraspherical_derivative(int d, int n, double x) {
  require(d >= 1, "ultraspherical_derivative: dimension must be >= 1");
  require(n >= 0, "ultraspherical_derivative: degree must be >= 0");
  if (n == 0) return 0.0;
  double scale = static_cast<double>(n) * (n + d - 1.0) / d;
  return scale * ultraspherical(d + 2, n - 1, x);
}

double ultraspherical_derivative(const UltrasphericalBasis& basis, int n,
                                 double x) {
  require(n >= 0 && n <= basis.n_max,
          "ultraspherical_derivative: degree outside basis range");
  return ultraspherical_derivative(basis.d, n, x);
}

ConnectionRow gegenbauer_connection(double lambda, double mu, int n) {
  require(lambda > 0.0 && mu > 0.0,
          "gegenbauer_connection: parameters must be > 0");
  require(n >= 0, "gegenbauer_connection: degree must be >= 0");
  ConnectionRow row;
  row.source_degree = n;
  row.terms.reserve(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    // (lambda)_{n-k} (lambda-mu)_k (n+mu-2k) / ((mu)_{n-k+1} k!).
    // The (lambda-mu)_k factor may be zero or negative; it stays a direct
    // product while the large positive ratio goes through log-gamma.
    double value;
    if (n <= kDirectProductLimit) {
      value = pochhammer(lambda, n - k) * pochhammer(lambda - mu, k) *
              (n + mu - 2.0 * k) /
              (pochhammer(mu, n - k + 1) * std::tgamma(k + 1.0));
    } else {
      double log_ratio = log_pochhammer(lambda, n - k) -
                         log_pochhammer(mu, n - k + 1) -
                         std::lgamma(k + 1.0);
      value = std::exp(log_ratio) * pochhammer(lambda - mu, k) *
              (n + mu - 2.0 * k);
    }
    row.terms.push_back({n - 2 * k, value});
  }
  return row;
}

double monomial_connection_value(int d, int n, int k) {
  require(d >= 1, "monomial_connection: dimension must be >= 1");
  require(n >= 0, "monomial_connection: degree must be >= 0");
  require(k >= 0 && 2 * k <= n, "monomial_connection: index out of range");
  if (d == 1) {
    // x^n = 2^{-n} sum_k C(n,k) N_{n-2k}(1) T_{n-2k}(x).
    double weight = (n - 2 * k == 0) ? 1.0 : 2.0;
    if (n <= 62) {
      return std::ldexp(static_cast<double>(binomial_exact(n, k)) * weight,
                        -n);
    }
    return weight * std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                             std::lgamma(n - k + 1.0) - n * std::log(2.0));
  }
  const double half = 0.5 * (d - 1);
  if (n <= kDirectProductLimit) {
    double num = std::tgamma(n + 1.0) * pochhammer(d - 1.0, n - 2 * k) *
                 (n - 2 * k + half);
    double den = std::ldexp(1.0, n) * std::tgamma(k + 1.0) *
                 std::tgamma(n - 2 * k + 1.0) * pochhammer(half, n - k + 1);
    return num / den;
  }
  double log_value = std::lgamma(n + 1.0) - n * std::log(2.0) -
                     std::lgamma(k + 1.0) - std::lgamma(n - 2 * k + 1.0) +
                     log_pochhammer(d - 1.0, n - 2 * k) +
                     std::log(n - 2 * k + half) -
                     log_pochhammer(half, n - k + 1);
  return std::exp(log_value);
}

ConnectionRow monomial_connection(int d, int n) {
  ConnectionRow row;
  row.source_degree = n;
  row.terms.reserve(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    row.terms.push_back({n - 2 * k, monomial_connection_value(d, n, k)});
  }
  return row;
}

double lambda_limit_gap(double lambda, int n, double x) {
  return std::fabs(gegenbauer_normalized_eval(lambda, n, x) -
                   std::pow(x, static_cast<double>(n)));
}

}  // namespace sphk
