#pragma once

#include <cstdint>
#include <vector>

namespace sphk {

// Gegenbauer (ultraspherical) polynomials C_n^{(lambda)} and the
// sphere-normalized family c_n(d,x) = C_n^{((d-1)/2)}(x) / C_n^{((d-1)/2)}(1),
// together with the dimension/surface constants and the connection
// coefficients between bases. Everything here is pure and thread-safe.

// C_n^{(lambda)}(x) by the three-term recurrence
//   n C_n = 2(n+lambda-1) x C_{n-1} - (n+2*lambda-2) C_{n-2},
// seeded C_0 = 1, C_1 = 2*lambda*x. lambda = 0 degenerates to the Chebyshev
// polynomials T_n with their own recurrence (the generic one collapses).
double gegenbauer_eval(double lambda, int n, double x);

// C_n^{(lambda)}(x) / C_n^{(lambda)}(1), evaluated by the recurrence on the
// normalized sequence itself so large n never overflows:
//   chat_n = (2(n+lambda-1) x chat_{n-1} - (n-1) chat_{n-2}) / (2*lambda+n-1),
// seeds chat_0 = 1, chat_1 = x (valid for every lambda >= 0).
double gegenbauer_normalized_eval(double lambda, int n, double x);

// c_n(d,x) for integer sphere dimension d >= 1; c_n(d,1) = 1 exactly.
double ultraspherical(int d, int n, double x);

// One recurrence pass: { c_0(d,x), ..., c_{n_max}(d,x) }.
std::vector<double> ultraspherical_row(int d, int n_max, double x);

// N_n(d) = dim of the degree-n spherical harmonics on S^d; exact integer.
std::int64_t harmonic_dim(int d, int n);

// Surface measure sigma_d of S^d (sigma_0 = 2).
double sphere_surface(int d);

struct UltrasphericalBasis {
  int d = 1;
  int n_max = 0;
  // norm_constants[n] = integral of c_n(d,.)^2 against (1-x^2)^{d/2-1},
  // i.e. sigma_d / (N_n(d) sigma_{d-1}); always > 0.
  std::vector<double> norm_constants;
};

UltrasphericalBasis make_basis(int d, int n_max);

// c_n(d,x) through a basis handle; n must be within the basis range.
double ultraspherical_eval(const UltrasphericalBasis& basis, int n, double x);

// c_n'(d,x) = n(n+d-1)/d * c_{n-1}(d+2,x); 0 for n = 0.
double ultraspherical_derivative(const UltrasphericalBasis& basis, int n,
                                 double x);
double ultraspherical_derivative(int d, int n, double x);

struct ConnectionTerm {
  int degree = 0;   // target degree, same parity as the source
  double value = 0;
};

struct ConnectionRow {
  int source_degree = 0;
  std::vector<ConnectionTerm> terms;  // degrees n, n-2, ..., n mod 2
};

// Coefficients of C_n^{(lambda)} in the basis {C_{n-2k}^{(mu)}}; nonnegative
// whenever lambda >= mu.
ConnectionRow gegenbauer_connection(double lambda, double mu, int n);

// gamma^{(d)}(n,k) with x^n = sum_k gamma^{(d)}(n,k) c_{n-2k}(d,x); all
// entries >= 0 and each row sums to 1.
ConnectionRow monomial_connection(int d, int n);
double monomial_connection_value(int d, int n, int k);

// | C_n^{(lambda)}(x)/C_n^{(lambda)}(1) - x^n |; shrinks to 0 as lambda grows.
double lambda_limit_gap(double lambda, int n, double x);

// (a)_k = a(a+1)...(a+k-1) by direct product; exact for small integer cases.
double pochhammer(double a, int k);

}  // namespace sphk
