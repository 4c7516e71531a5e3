#include "sphk/groups.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "sphk/util.hpp"

namespace sphk {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

[[noreturn]] void bad_element(const GroupModel& model) {
  throw std::domain_error("group element does not belong to " +
                          model.describe());
}

}  // namespace

GroupModel GroupModel::real_line() { return GroupModel(); }

GroupModel GroupModel::integers() {
  GroupModel g;
  g.kind_ = GroupKind::Integers;
  return g;
}

GroupModel GroupModel::cyclic(std::int64_t m) {
  if (m < 1) throw std::domain_error("cyclic group needs modulus >= 1");
  GroupModel g;
  g.kind_ = GroupKind::Cyclic;
  g.m_ = m;
  return g;
}

GroupModel GroupModel::real_vector(int k) {
  if (k < 1) throw std::domain_error("real vector group needs dimension >= 1");
  GroupModel g;
  g.kind_ = GroupKind::RealVector;
  g.k_ = k;
  return g;
}

bool GroupModel::operator==(const GroupModel& other) const {
  return kind_ == other.kind_ && m_ == other.m_ && k_ == other.k_;
}

GroupElement GroupModel::identity() const {
  switch (kind_) {
    case GroupKind::RealLine:
      return 0.0;
    case GroupKind::Integers:
    case GroupKind::Cyclic:
      return std::int64_t{0};
    case GroupKind::RealVector:
      return std::vector<double>(k_, 0.0);
  }
  throw std::logic_error("unreachable");
}

bool GroupModel::contains(const GroupElement& u) const {
  switch (kind_) {
    case GroupKind::RealLine:
      return std::holds_alternative<double>(u) &&
             std::isfinite(std::get<double>(u));
    case GroupKind::Integers:
      return std::holds_alternative<std::int64_t>(u);
    case GroupKind::Cyclic: {
      if (!std::holds_alternative<std::int64_t>(u)) return false;
      std::int64_t r = std::get<std::int64_t>(u);
      return r >= 0 && r < m_;
    }
    case GroupKind::RealVector: {
      if (!std::holds_alternative<std::vector<double>>(u)) return false;
      const auto& v = std::get<std::vector<double>>(u);
      if (static_cast<int>(v.size()) != k_) return false;
      for (double x : v) {
        if (!std::isfinite(x)) return false;
      }
      return true;
    }
  }
  return false;
}

void GroupModel::require_element(const GroupElement& u) const {
  if (!contains(u)) bad_element(*this);
}

GroupElement GroupModel::inverse(const GroupElement& u) const {
  require_element(u);
  switch (kind_) {
    case GroupKind::RealLine:
      return -std::get<double>(u);
    case GroupKind::Integers:
      return -std::get<std::int64_t>(u);
    case GroupKind::Cyclic:
      return mod_floor(-std::get<std::int64_t>(u), m_);
    case GroupKind::RealVector: {
      auto v = std::get<std::vector<double>>(u);
      for (double& x : v) x = -x;
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

GroupElement GroupModel::compose(const GroupElement& a,
                                 const GroupElement& b) const {
  require_element(a);
  require_element(b);
  switch (kind_) {
    case GroupKind::RealLine:
      return std::get<double>(a) + std::get<double>(b);
    case GroupKind::Integers:
      return std::get<std::int64_t>(a) + std::get<std::int64_t>(b);
    case GroupKind::Cyclic:
      return mod_floor(std::get<std::int64_t>(a) + std::get<std::int64_t>(b),
                       m_);
    case GroupKind::RealVector: {
      auto v = std::get<std::vector<double>>(a);
      const auto& w = std::get<std::vector<double>>(b);
      for (int i = 0; i < k_; ++i) v[i] += w[i];
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

GroupElement GroupModel::displacement(const GroupElement& u,
                                      const GroupElement& v) const {
  return compose(inverse(u), v);
}

bool GroupModel::is_identity(const GroupElement& u) const {
  return almost_equal(u, identity(), 0.0);
}

bool GroupModel::almost_equal(const GroupElement& a, const GroupElement& b,
                              double tol) const {
  require_element(a);
  require_element(b);
  switch (kind_) {
    case GroupKind::RealLine:
      return std::fabs(std::get<double>(a) - std::get<double>(b)) <= tol;
    case GroupKind::Integers:
    case GroupKind::Cyclic:
      return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
    case GroupKind::RealVector: {
      const auto& x = std::get<std::vector<double>>(a);
      const auto& y = std::get<std::vector<double>>(b);
      for (int i = 0; i < k_; ++i) {
        if (std::fabs(x[i] - y[i]) > tol) return false;
      }
      return true;
    }
  }
  return false;
}

double GroupModel::norm(const GroupElement& u) const {
  require_element(u);
  switch (kind_) {
    case GroupKind::RealLine:
      return std::fabs(std::get<double>(u));
    case GroupKind::Integers:
      return static_cast<double>(std::llabs(std::get<std::int64_t>(u)));
    case GroupKind::Cyclic: {
      std::int64_t r = std::get<std::int64_t>(u);
      return static_cast<double>(std::min(r, m_ - r));
    }
    case GroupKind::RealVector: {
      const auto& v = std::get<std::vector<double>>(u);
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
  }
  return 0.0;
}

GroupElement GroupModel::sample(std::mt19937_64& engine) const {
  switch (kind_) {
    case GroupKind::RealLine: {
      std::normal_distribution<double> normal(0.0, 1.0);
      return normal(engine);
    }
    case GroupKind::Integers: {
      std::uniform_int_distribution<std::int64_t> uniform(-50, 50);
      return uniform(engine);
    }
    case GroupKind::Cyclic: {
      std::uniform_int_distribution<std::int64_t> uniform(0, m_ - 1);
      return uniform(engine);
    }
    case GroupKind::RealVector: {
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> v(k_);
      for (double& x : v) x = normal(engine);
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

std::string GroupModel::describe() const {
  switch (kind_) {
    case GroupKind::RealLine:
      return "real_line";
    case GroupKind::Integers:
      return "integers";
    case GroupKind::Cyclic:
      return "cyclic(" + std::to_string(m_) + ")";
    case GroupKind::RealVector:
      return "real_vector(" + std::to_string(k_) + ")";
  }
  return "?";
}

namespace {

// scalar coordinate for the cosine/character forms on 1-d models
double scalar_coordinate(const GroupModel& g, const GroupElement& u) {
  switch (g.kind()) {
    case GroupKind::RealLine:
      return std::get<double>(u);
    case GroupKind::Integers:
    case GroupKind::Cyclic:
      return static_cast<double>(std::get<std::int64_t>(u));
    case GroupKind::RealVector:
      return std::get<std::vector<double>>(u)[0];
  }
  return 0.0;
}

// A frequency is a character of Z_m only when omega*m is a multiple of 2*pi;
// anything else fails the Gram test and is rejected up front.
void require_cyclic_character(double omega, std::int64_t m) {
  double harmonics = omega * static_cast<double>(m) / kTwoPi;
  if (std::fabs(harmonics - std::round(harmonics)) > 1e-9) {
    throw std::domain_error(
        "frequency is not a character of the cyclic group: omega*m must be a "
        "multiple of 2*pi");
  }
}

}  // namespace

PdFunctionSpec PdFunctionSpec::exp_decay(GroupModel group, double a) {
  if (!(a > 0.0)) throw std::domain_error("exp_decay needs a > 0");
  PdFunctionSpec phi;
  phi.group_ = std::move(group);
  phi.form_ = PdForm::ExpDecay;
  phi.param_ = a;
  return phi;
}

PdFunctionSpec PdFunctionSpec::gaussian(GroupModel group, double a) {
  if (!(a > 0.0)) throw std::domain_error("gaussian needs a > 0");
  if (group.kind() == GroupKind::Cyclic) {
    throw std::domain_error(
        "gaussian of the cyclic distance is not positive definite on "
        "cyclic groups; use exp_decay or character_mix");
  }
  PdFunctionSpec phi;
  phi.group_ = std::move(group);
  phi.form_ = PdForm::Gaussian;
  phi.param_ = a;
  return phi;
}

PdFunctionSpec PdFunctionSpec::cosine(GroupModel group, double omega) {
  if (group.kind() == GroupKind::RealVector && group.vector_dim() >= 2) {
    throw std::domain_error(
        "cosine of the Euclidean norm is not positive definite on R^k for "
        "k >= 2; use character_mix with a vector frequency");
  }
  if (group.kind() == GroupKind::Cyclic) {
    require_cyclic_character(omega, group.modulus());
  }
  PdFunctionSpec phi;
  phi.group_ = std::move(group);
  phi.form_ = PdForm::Cosine;
  phi.param_ = omega;
  return phi;
}

PdFunctionSpec PdFunctionSpec::triangular(GroupModel group, double c) {
  if (!(c > 0.0)) throw std::domain_error("triangular needs width c > 0");
  if (group.kind() == GroupKind::RealVector && group.vector_dim() >= 2) {
    throw std::domain_error(
        "the triangular bump is not positive definite on R^k for k >= 2");
  }
  if (group.kind() == GroupKind::Cyclic) {
    // The periodized triangle has negative Fourier coefficients for some
    // widths (Z_5 with c = 1 already fails), so the form is not admitted.
    throw std::domain_error(
        "the triangular bump is not positive definite on cyclic groups for "
        "general widths; use exp_decay or character_mix");
  }
  PdFunctionSpec phi;
  phi.group_ = std::move(group);
  phi.form_ = PdForm::Triangular;
  phi.param_ = c;
  return phi;
}

PdFunctionSpec PdFunctionSpec::constant(GroupModel group, double r) {
  if (!(r >= 0.0)) throw std::domain_error("constant needs r >= 0");
  PdFunctionSpec phi;
  phi.group_ = std::move(group);
  phi.form_ = PdForm::Constant;
  phi.param_ = r;
  return phi;
}

PdFunctionSpec PdFunctionSpec::character_mix(GroupModel group,
                                             std::vector<CharacterTerm> terms) {
  const std::size_t want =
      group.kind() == GroupKind::RealVector
          ? static_cast<std::size_t>(group.vector_dim())
          : 1u;
  for (const auto& t : terms) {
    if (!(t.weight >= 0.0)) {
      throw std::domain_error("character_mix weights must be >= 0");
    }
    if (t.omega.size() != want) {
      throw std::domain_error("character_mix frequency has wrong dimension");
    }
    if (group.kind() == GroupKind::Cyclic) {
      require_cyclic_character(t.omega[0], group.modulus());
    }
  }
  PdFunctionSpec phi;
  phi.group_ = std::move(group);
  phi.form_ = PdForm::CharacterMix;
  phi.mix_ = std::move(terms);
  return phi;
}

PdFunctionSpec PdFunctionSpec::unchecked(
    GroupModel group,
    std::function<std::complex<double>(const GroupElement&)> fn,
    std::string label) {
  PdFunctionSpec phi;
  phi.group_ = std::move(group);
  phi.form_ = PdForm::Unchecked;
  phi.raw_ = std::move(fn);
  phi.label_ = std::move(label);
  return phi;
}

std::complex<double> PdFunctionSpec::eval(const GroupElement& u) const {
  group_.require_element(u);
  switch (form_) {
    case PdForm::ExpDecay:
      return std::exp(-param_ * group_.norm(u));
    case PdForm::Gaussian: {
      double r = group_.norm(u);
      return std::exp(-param_ * r * r);
    }
    case PdForm::Cosine:
      return std::cos(param_ * scalar_coordinate(group_, u));
    case PdForm::Triangular:
      return std::max(0.0, 1.0 - group_.norm(u) / param_);
    case PdForm::Constant:
      return param_;
    case PdForm::CharacterMix: {
      std::complex<double> acc = 0.0;
      if (group_.kind() == GroupKind::RealVector) {
        const auto& v = std::get<std::vector<double>>(u);
        for (const auto& t : mix_) {
          double phase = 0.0;
          for (std::size_t i = 0; i < v.size(); ++i) phase += t.omega[i] * v[i];
          acc += t.weight * std::exp(std::complex<double>(0.0, phase));
        }
      } else {
        double x = scalar_coordinate(group_, u);
        for (const auto& t : mix_) {
          acc += t.weight * std::exp(std::complex<double>(0.0, t.omega[0] * x));
        }
      }
      return acc;
    }
    case PdForm::Unchecked:
      return raw_(u);
  }
  throw std::logic_error("unreachable");
}

std::complex<double> PdFunctionSpec::at_identity() const {
  return eval(group_.identity());
}

std::string PdFunctionSpec::describe() const {
  switch (form_) {
    case PdForm::ExpDecay:
      return "exp_decay(" + std::to_string(param_) + ")";
    case PdForm::Gaussian:
      return "gaussian(" + std::to_string(param_) + ")";
    case PdForm::Cosine:
      return "cosine(" + std::to_string(param_) + ")";
    case PdForm::Triangular:
      return "triangular(" + std::to_string(param_) + ")";
    case PdForm::Constant:
      return "constant(" + std::to_string(param_) + ")";
    case PdForm::CharacterMix:
      return "character_mix[" + std::to_string(mix_.size()) + "]";
    case PdForm::Unchecked:
      return "unchecked(" + label_ + ")";
  }
  return "?";
}

std::complex<double> pd_eval(const PdFunctionSpec& phi, const GroupElement& u) {
  return phi.eval(u);
}

PdValidation validate_kernel_on_points(
    const GroupModel& group,
    const std::function<std::complex<double>(const GroupElement&)>& phi,
    const std::vector<GroupElement>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 1) throw std::domain_error("validation needs at least one point");

  Eigen::MatrixXcd gram(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      gram(k, l) = phi(group.displacement(points[k], points[l]));
    }
  }

  PdValidation out;
  out.hermitian_gap = (gram - gram.adjoint()).cwiseAbs().maxCoeff();

  const double at_e = phi(group.identity()).real();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      out.bound_excess =
          std::max(out.bound_excess, std::abs(gram(k, l)) - at_e);
    }
  }

  Eigen::MatrixXcd sym = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("validation eigen-decomposition failed");
  }
  out.min_eig = solver.eigenvalues().minCoeff();
  out.max_eig = solver.eigenvalues().maxCoeff();
  out.pass = out.bound_excess <= 1e-10 * std::max(1.0, std::fabs(at_e)) &&
             out.min_eig >= -1e-8 * std::max(1.0, out.max_eig);
  return out;
}

PdValidation validate_pd_on_samples(const PdFunctionSpec& phi, int n_points,
                                    std::uint64_t seed) {
  if (n_points < 1) throw std::domain_error("validation needs n_points >= 1");
  std::mt19937_64 engine(seed);
  std::vector<GroupElement> points;
  points.reserve(n_points);
  for (int i = 0; i < n_points; ++i) points.push_back(phi.group().sample(engine));
  return validate_kernel_on_points(
      phi.group(), [&phi](const GroupElement& u) { return phi.eval(u); },
      points);
}

}  // namespace sphk
