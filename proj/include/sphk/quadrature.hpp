#pragma once

#include <complex>
#include <vector>

namespace sphk {

// Gauss-Jacobi rule for the weight (1-x^2)^{d/2-1} on [-1,1], the measure of
// every coefficient integral on S^d. A q-point rule integrates polynomials of
// degree <= 2q-1 exactly.
struct QuadratureRule {
  int d = 1;
  std::vector<double> nodes;    // strictly increasing, inside (-1,1)
  std::vector<double> weights;  // positive; sum = sigma_d / sigma_{d-1}
  int q() const { return static_cast<int>(nodes.size()); }
};

// Builds the rule by Golub-Welsch: implicit-QL eigen-decomposition of the
// symmetric Jacobi matrix, weights from the first eigenvector components.
// Throws numerical_error if the eigen iteration fails to converge.
QuadratureRule build_rule(int d, int q);

template <typename F>
std::complex<double> integrate(const QuadratureRule& rule, F&& g) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * std::complex<double>(g(rule.nodes[i]));
  }
  return acc;
}

}  // namespace sphk
