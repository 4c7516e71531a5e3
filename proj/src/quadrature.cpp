#include "sphk/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "sphk/special_functions.hpp"
#include "sphk/util.hpp"

namespace sphk {

namespace {

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix,
// accumulating only the first component of each eigenvector (all the
// Golub-Welsch weights need). diag/z are overwritten with eigenvalues and
// first components; sub is destroyed. O(q^2).
void tridiag_golub_welsch(std::vector<double>& diag, std::vector<double>& sub,
                          std::vector<double>& z) {
  const int n = static_cast<int>(diag.size());
  const double prec = 2.220446049250313e-16;
  if (n == 1) return;
  sub.resize(n, 0.0);
  sub[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(sub[m]) <= prec * dd) break;
      }
      if (m == l) break;
      if (++iter > 30) {
        throw numerical_error(
            "quadrature: tridiagonal QL iteration failed to converge");
      }
      double g = (diag[l + 1] - diag[l]) / (2.0 * sub[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + sub[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * sub[i];
        double b = c * sub[i];
        r = std::hypot(f, g);
        sub[i + 1] = r;
        if (r == 0.0) {
          // rotation annihilated early; deflate and restart this sweep
          diag[i + 1] -= p;
          sub[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        // rotate the tracked eigenvector row
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (underflow) continue;
      diag[l] -= p;
      sub[l] = g;
      sub[m] = 0.0;
    }
  }

  // insertion sort by node, carrying the first components along
  for (int i = 1; i < n; ++i) {
    double dv = diag[i], zv = z[i];
    int j = i - 1;
    while (j >= 0 && diag[j] > dv) {
      diag[j + 1] = diag[j];
      z[j + 1] = z[j];
      --j;
    }
    diag[j + 1] = dv;
    z[j + 1] = zv;
  }
}

}  // namespace

QuadratureRule build_rule(int d, int q) {
  if (d < 1) throw std::domain_error("build_rule: dimension must be >= 1");
  if (q < 1) throw std::domain_error("build_rule: node count must be >= 1");

  const double alpha = 0.5 * d - 1.0;  // Jacobi exponents, alpha = beta
  // total mass of the weight; the recursion through sphere_surface keeps the
  // n=m=0 orthogonality identity exact by construction
  const double zemu = sphere_surface(d) / sphere_surface(d - 1);

  // symmetric Jacobi matrix: zero diagonal, classic subdiagonal entries
  std::vector<double> diag(q, 0.0);
  std::vector<double> sub(q, 0.0);
  for (int i = 1; i < q; ++i) {
    double b2 = (i == 1)
                    ? 1.0 / (2.0 * alpha + 3.0)
                    : i * (i + 2.0 * alpha) /
                          (4.0 * (i + alpha) * (i + alpha) - 1.0);
    sub[i - 1] = std::sqrt(b2);
  }
  std::vector<double> z(q, 0.0);
  z[0] = 1.0;

  tridiag_golub_welsch(diag, sub, z);

  QuadratureRule rule;
  rule.d = d;
  rule.nodes = std::move(diag);
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) rule.weights[i] = zemu * z[i] * z[i];

  // The matrix has zero diagonal, so the spectrum is symmetric; enforce the
  // pairing exactly so odd integrands cancel to rounding.
  for (int i = 0; i < q / 2; ++i) {
    int j = q - 1 - i;
    double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;

  for (int i = 0; i < q; ++i) {
    bool ordered = (i == 0) || rule.nodes[i] > rule.nodes[i - 1];
    if (!ordered || rule.weights[i] <= 0.0 || rule.nodes[i] <= -1.0 ||
        rule.nodes[i] >= 1.0) {
      throw numerical_error("build_rule: eigen-decomposition produced an "
                            "invalid rule");
    }
  }
  return rule;
}

}  // namespace sphk
