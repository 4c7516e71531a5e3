#pragma once

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "sphk/groups.hpp"

namespace sphk {

// Sampled representation of a coefficient function phi_{n,d}: values on a
// fixed grid of group elements. No interpolation: off-grid lookups throw.
struct NumericProfile {
  GroupModel group;
  std::vector<GroupElement> grid;  // must contain the identity
  std::vector<std::complex<double>> values;
  std::size_t identity_index = 0;

  static NumericProfile zeros(GroupModel group,
                              std::vector<GroupElement> grid);
  std::complex<double> value_at(const GroupElement& u) const;
  std::complex<double> at_identity() const { return values[identity_index]; }
  std::optional<std::size_t> find(const GroupElement& u) const;
};

// A coefficient function: either a weighted sum of catalog PD functions
// (parametric form, closed under the linear dimension-step recurrences) or a
// NumericProfile. Weights may be negative; that is exactly how
// non-membership shows up.
class CoefficientFn {
 public:
  struct Term {
    double weight = 0.0;
    PdFunctionSpec phi;
  };

  static CoefficientFn zero(GroupModel group);
  static CoefficientFn parametric(double weight, PdFunctionSpec phi);
  static CoefficientFn sampled(NumericProfile profile);

  bool is_sampled() const { return profile_.has_value(); }
  const NumericProfile* profile() const {
    return profile_ ? &*profile_ : nullptr;
  }
  const std::vector<Term>& terms() const { return terms_; }
  const GroupModel& group() const { return group_; }

  std::complex<double> eval(const GroupElement& u) const;
  std::complex<double> at_identity() const;

  // a*f + b*g; parametric terms concatenate, profiles combine pointwise
  // (parametric halves are sampled onto the profile grid when mixed).
  static CoefficientFn combine(double a, const CoefficientFn& f, double b,
                               const CoefficientFn& g);
  CoefficientFn scaled(double a) const;
  NumericProfile sample_on(const std::vector<GroupElement>& grid) const;

 private:
  GroupModel group_;
  std::vector<Term> terms_;
  std::optional<NumericProfile> profile_;
};

enum class ExpansionBasis {
  Ultraspherical,  // c_n(d, x)
  Monomial         // x^n, the d = infinity expansion
};

struct SequenceDiagnostics {
  // identity values all >= -1e-10 (the certifying tolerance)
  bool certifying = true;
  double min_identity_value = 0.0;
  double max_identity_imag = 0.0;
  // max over grid of |phi_n(u)| - Re phi_n(e); meaningful for sampled entries
  double max_bound_excess = 0.0;
  // degrees whose identity value drops below -1e-8: a machine-readable
  // non-membership certificate
  std::vector<std::pair<int, double>> negative_identity;
};

// Truncated expansion coefficients phi_{n,d} (or the monomial phi_n when
// basis == Monomial). Missing degrees are zero. Invariants are diagnosed,
// never silently enforced.
struct SchoenbergSequence {
  ExpansionBasis basis = ExpansionBasis::Ultraspherical;
  int d = 1;  // sphere dimension; ignored when basis == Monomial
  int n_max = 0;
  GroupModel group;
  std::map<int, CoefficientFn> entries;
  double identity_mass = 0.0;     // sum over retained degrees of Re phi_n(e)
  double truncation_bound = 0.0;  // bound on the dropped tail at identity
  SequenceDiagnostics diagnostics;

  const CoefficientFn* entry(int n) const;
  std::complex<double> coef_at(int n, const GroupElement& u) const;
};

// Recomputes identity mass and diagnostics from the entries.
void finalize_sequence(SchoenbergSequence& seq);

// PSD verdict for one coefficient function over explicit points (their
// pairwise displacements must be evaluable, i.e. on-grid for profiles).
PdValidation validate_coefficient_on_points(
    const CoefficientFn& fn, const std::vector<GroupElement>& points);

// Coefficient table of f restricted to S^d x S^{d'}: f_hat_{n,m} with
// f2(x,y) ~ sum f_hat_{n,m} c_n(d,x) c_m(d',y); d may be the monomial tag.
struct ProductSphereCoefficients {
  bool d_infinite = false;  // true: spatial factor is x^n instead of c_n(d,.)
  int d = 1;
  int dprime = 1;
  int n_max = 0;
  int m_max = 0;
  std::vector<double> table;  // (n_max+1) x (m_max+1), row-major
  double mass = 0.0;          // sum of all entries
  double min_entry = 0.0;
  bool certifying = true;  // all entries >= -1e-10
  std::vector<std::pair<std::pair<int, int>, double>> negative_entries;

  double at(int n, int m) const;
  double& at(int n, int m);
};

void finalize_product_coefficients(ProductSphereCoefficients& coeffs);

}  // namespace sphk
