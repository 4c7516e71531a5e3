#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace sphk {

// The locally compact group G, written additively: the real line, the
// integers, the cyclic group Z_m, and R^k. Elements are tagged by value type;
// the owning model checks membership on every operation.
enum class GroupKind { RealLine, Integers, Cyclic, RealVector };

using GroupElement = std::variant<double, std::int64_t, std::vector<double>>;

class GroupModel {
 public:
  GroupModel() = default;  // real line

  static GroupModel real_line();
  static GroupModel integers();
  static GroupModel cyclic(std::int64_t m);
  static GroupModel real_vector(int k);

  GroupKind kind() const { return kind_; }
  std::int64_t modulus() const { return m_; }
  int vector_dim() const { return k_; }
  bool operator==(const GroupModel& other) const;
  bool operator!=(const GroupModel& other) const { return !(*this == other); }

  GroupElement identity() const;
  GroupElement inverse(const GroupElement& u) const;
  GroupElement compose(const GroupElement& a, const GroupElement& b) const;
  // u^{-1} v, the displacement entering every Gram matrix
  GroupElement displacement(const GroupElement& u, const GroupElement& v) const;

  bool contains(const GroupElement& u) const;
  void require_element(const GroupElement& u) const;
  bool is_identity(const GroupElement& u) const;
  bool almost_equal(const GroupElement& a, const GroupElement& b,
                    double tol = 1e-12) const;

  // |u|: absolute value, Euclidean norm, or cyclic distance min(u, m-u)
  double norm(const GroupElement& u) const;

  // validation draw: standard normal coordinates on RealLine/RealVector,
  // uniform on {-50..50} for Integers, uniform residues for Cyclic
  GroupElement sample(std::mt19937_64& engine) const;

  std::string describe() const;

 private:
  GroupKind kind_ = GroupKind::RealLine;
  std::int64_t m_ = 0;  // Cyclic modulus
  int k_ = 0;           // RealVector dimension
};

// A parametric continuous positive definite function phi on G. Constructors
// reject form/model combinations that are not positive definite (e.g. the
// Gaussian of the cyclic distance, or a cosine of the Euclidean norm on R^k
// with k >= 2), so every constructible instance satisfies the Gram test.
enum class PdForm {
  ExpDecay,      // exp(-a |u|),          a > 0
  Gaussian,      // exp(-a |u|^2),        a > 0
  Cosine,        // cos(omega u),         scalar models
  Triangular,    // max(0, 1 - |u|/c),    c > 0
  Constant,      // r >= 0
  CharacterMix,  // sum w_j exp(i <omega_j, u>), w_j >= 0
  Unchecked      // test-only escape hatch, no PD guarantee
};

struct CharacterTerm {
  double weight = 0.0;
  std::vector<double> omega;  // one entry, or vector_dim entries on R^k
};

class PdFunctionSpec {
 public:
  static PdFunctionSpec exp_decay(GroupModel group, double a);
  static PdFunctionSpec gaussian(GroupModel group, double a);
  static PdFunctionSpec cosine(GroupModel group, double omega);
  static PdFunctionSpec triangular(GroupModel group, double c);
  static PdFunctionSpec constant(GroupModel group, double r);
  static PdFunctionSpec character_mix(GroupModel group,
                                      std::vector<CharacterTerm> terms);
  // Bypasses all validation; exists so tests can probe the verifier with
  // deliberately non-PD functions. Never reachable from file input.
  static PdFunctionSpec unchecked(
      GroupModel group,
      std::function<std::complex<double>(const GroupElement&)> fn,
      std::string label);

  std::complex<double> eval(const GroupElement& u) const;
  std::complex<double> at_identity() const;

  const GroupModel& group() const { return group_; }
  PdForm form() const { return form_; }
  double param() const { return param_; }
  const std::vector<CharacterTerm>& mix() const { return mix_; }
  bool is_catalog() const { return form_ != PdForm::Unchecked; }
  std::string describe() const;

 private:
  PdFunctionSpec() = default;
  GroupModel group_;
  PdForm form_ = PdForm::Constant;
  double param_ = 0.0;
  std::vector<CharacterTerm> mix_;
  std::function<std::complex<double>(const GroupElement&)> raw_;
  std::string label_;
};

std::complex<double> pd_eval(const PdFunctionSpec& phi, const GroupElement& u);

struct PdValidation {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double hermitian_gap = 0.0;
  double bound_excess = 0.0;  // max over samples of |phi(u)| - Re phi(e)
  bool pass = false;
};

// Draws n_points elements from the model's validation distribution, forms
// the matrix [phi(u_k^{-1} u_l)], and applies the PSD pass rule
// min_eig >= -1e-8 max(1, max_eig) plus a boundedness precheck.
PdValidation validate_pd_on_samples(const PdFunctionSpec& phi, int n_points,
                                    std::uint64_t seed);

// Same Gram/eigen verdict for an arbitrary evaluator at explicit points;
// shared by the sequence-level validation of extracted coefficients.
PdValidation validate_kernel_on_points(
    const GroupModel& group,
    const std::function<std::complex<double>(const GroupElement&)>& phi,
    const std::vector<GroupElement>& points);

}  // namespace sphk
