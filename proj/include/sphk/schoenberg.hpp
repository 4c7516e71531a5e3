#pragma once

#include <complex>
#include <vector>

#include "sphk/kernels.hpp"
#include "sphk/quadrature.hpp"
#include "sphk/sequence.hpp"

namespace sphk {

// Coefficient extraction: phi_{n,d}(u) = integral of f(., u) against
// c_n(d, .) over the sphere weight, divided by the basis norm constant,
// sampled on u_grid (which must contain the identity). q = 0 picks the
// automatic rule: exact for band-limited specs, a doubling refinement
// ladder capped at 2048 nodes for raw closed forms (numerical_error on
// non-convergence). Negative identity values are diagnosed, never thrown.
SchoenbergSequence extract(const KernelSpec& spec, int d, int n_max,
                           const std::vector<GroupElement>& u_grid, int q = 0);

struct SynthesisValue {
  std::complex<double> value;
  // Bound on |dropped tail| carried over from the sequence: the tail at the
  // identity dominates every (x, u) because |phi_n(u) c_n(d,x)| <= phi_n(e).
  double truncation_bound = 0.0;
};

// Sum of phi_n(u) times the basis function at x (c_n(d,.) or x^n).
SynthesisValue synthesize(const SchoenbergSequence& seq, double x,
                          const GroupElement& u);

// Maps d-coefficients to (d+2)-coefficients through the three-term relation
// between neighbouring ultraspherical families. Output is truncated at
// n_max - 2 (each new coefficient needs the entry two degrees above). A
// negative identity value in the output certifies that the kernel fails
// membership on the larger sphere.
SchoenbergSequence step_up(const SchoenbergSequence& seq);

// Turns a power-series coefficient sequence (basis Monomial) into the
// d_target expansion: phi_{n,d} = sum_j phi_{n+2j} gamma^{(d)}(n+2j, j).
SchoenbergSequence project_from_infty(const SchoenbergSequence& power_seq,
                                      int d_target);

// Monomial-basis sequence straight from a kernel's power-series view.
SchoenbergSequence power_sequence(const KernelSpec& spec);

// |phi_{n,d}(u) - phi_n(u)| for a kernel with a power-series view: the
// finite-dimensional coefficient against its dimension-free limit.
double infty_limit_gap(const KernelSpec& spec, int n, const GroupElement& u,
                       int d);

// Double-quadrature coefficient table of f2 over S^d x S^{d'}:
// f2(x,y) ~ sum_{n,m} fhat_{n,m} c_n(d,x) c_m(d',y).
ProductSphereCoefficients product_sphere_extract(const BivariateSpec& f2,
                                                 int d, int dprime, int n_max,
                                                 int m_max, int q = 0);

// The d = infinity variant: monomial in x (separable f2 with power-series
// x-factors only), quadrature in y.
ProductSphereCoefficients product_sphere_extract_infty(const BivariateSpec& f2,
                                                       int dprime, int n_max,
                                                       int m_max, int q = 0);

double product_sphere_synthesize(const ProductSphereCoefficients& coeffs,
                                 double x, double y);

}  // namespace sphk
