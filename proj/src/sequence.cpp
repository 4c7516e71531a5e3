#include "sphk/sequence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sphk {

NumericProfile NumericProfile::zeros(GroupModel group,
                                     std::vector<GroupElement> grid) {
  NumericProfile p;
  p.group = std::move(group);
  p.grid = std::move(grid);
  p.values.assign(p.grid.size(), 0.0);
  bool found = false;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    p.group.require_element(p.grid[i]);
    if (!found && p.group.is_identity(p.grid[i])) {
      p.identity_index = i;
      found = true;
    }
  }
  if (!found) {
    throw std::domain_error("profile grid must contain the identity");
  }
  return p;
}

std::optional<std::size_t> NumericProfile::find(const GroupElement& u) const {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (group.almost_equal(grid[i], u)) return i;
  }
  return std::nullopt;
}

std::complex<double> NumericProfile::value_at(const GroupElement& u) const {
  if (auto i = find(u)) return values[*i];
  throw std::domain_error(
      "group element is off the profile grid (no interpolation)");
}

CoefficientFn CoefficientFn::zero(GroupModel group) {
  CoefficientFn fn;
  fn.group_ = std::move(group);
  return fn;
}

CoefficientFn CoefficientFn::parametric(double weight, PdFunctionSpec phi) {
  CoefficientFn fn;
  fn.group_ = phi.group();
  fn.terms_.push_back({weight, std::move(phi)});
  return fn;
}

CoefficientFn CoefficientFn::sampled(NumericProfile profile) {
  CoefficientFn fn;
  fn.group_ = profile.group;
  fn.profile_ = std::move(profile);
  return fn;
}

std::complex<double> CoefficientFn::eval(const GroupElement& u) const {
  if (profile_) return profile_->value_at(u);
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) acc += t.weight * t.phi.eval(u);
  return acc;
}

std::complex<double> CoefficientFn::at_identity() const {
  if (profile_) return profile_->at_identity();
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) acc += t.weight * t.phi.at_identity();
  return acc;
}

NumericProfile CoefficientFn::sample_on(
    const std::vector<GroupElement>& grid) const {
  NumericProfile p = NumericProfile::zeros(group_, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) p.values[i] = eval(grid[i]);
  return p;
}

CoefficientFn CoefficientFn::scaled(double a) const {
  return combine(a, *this, 0.0, zero(group_));
}

CoefficientFn CoefficientFn::combine(double a, const CoefficientFn& f,
                                     double b, const CoefficientFn& g) {
  if (f.group_ != g.group_) {
    throw std::domain_error("cannot combine coefficients over different groups");
  }
  CoefficientFn out;
  out.group_ = f.group_;

  auto add_parametric = [&out](double scale, const CoefficientFn& src) {
    for (const auto& t : src.terms_) {
      double w = scale * t.weight;
      if (w != 0.0) out.terms_.push_back({w, t.phi});
    }
  };

  if (!f.profile_ && !g.profile_) {
    add_parametric(a, f);
    add_parametric(b, g);
    return out;
  }

  // At least one sampled side: resolve on the (shared) grid.
  const NumericProfile* base = f.profile_ ? &*f.profile_ : &*g.profile_;
  if (f.profile_ && g.profile_) {
    const auto& fg = f.profile_->grid;
    const auto& gg = g.profile_->grid;
    if (fg.size() != gg.size()) {
      throw std::domain_error("profile grids differ; cannot combine");
    }
    for (std::size_t i = 0; i < fg.size(); ++i) {
      if (!out.group_.almost_equal(fg[i], gg[i])) {
        throw std::domain_error("profile grids differ; cannot combine");
      }
    }
  }
  NumericProfile merged = NumericProfile::zeros(out.group_, base->grid);
  for (std::size_t i = 0; i < merged.grid.size(); ++i) {
    std::complex<double> fv =
        f.profile_ ? f.profile_->values[i] : f.eval(merged.grid[i]);
    std::complex<double> gv =
        g.profile_ ? g.profile_->values[i] : g.eval(merged.grid[i]);
    merged.values[i] = a * fv + b * gv;
  }
  out.profile_ = std::move(merged);
  return out;
}

const CoefficientFn* SchoenbergSequence::entry(int n) const {
  auto it = entries.find(n);
  return it == entries.end() ? nullptr : &it->second;
}

std::complex<double> SchoenbergSequence::coef_at(int n,
                                                 const GroupElement& u) const {
  const CoefficientFn* fn = entry(n);
  return fn ? fn->eval(u) : std::complex<double>(0.0);
}

void finalize_sequence(SchoenbergSequence& seq) {
  SequenceDiagnostics diag;
  double mass = 0.0;
  diag.min_identity_value = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& [n, fn] : seq.entries) {
    any = true;
    std::complex<double> at_e = fn.at_identity();
    mass += at_e.real();
    diag.min_identity_value = std::min(diag.min_identity_value, at_e.real());
    diag.max_identity_imag =
        std::max(diag.max_identity_imag, std::fabs(at_e.imag()));
    if (at_e.real() < -1e-8) {
      diag.negative_identity.emplace_back(n, at_e.real());
    }
    if (at_e.real() < -1e-10) diag.certifying = false;
    if (const NumericProfile* p = fn.profile()) {
      for (const auto& v : p->values) {
        diag.max_bound_excess =
            std::max(diag.max_bound_excess, std::abs(v) - at_e.real());
      }
    }
  }
  if (!any) diag.min_identity_value = 0.0;
  seq.identity_mass = mass;
  seq.diagnostics = std::move(diag);
}

PdValidation validate_coefficient_on_points(
    const CoefficientFn& fn, const std::vector<GroupElement>& points) {
  return validate_kernel_on_points(
      fn.group(), [&fn](const GroupElement& u) { return fn.eval(u); }, points);
}

double ProductSphereCoefficients::at(int n, int m) const {
  return table[static_cast<std::size_t>(n) * (m_max + 1) + m];
}

double& ProductSphereCoefficients::at(int n, int m) {
  return table[static_cast<std::size_t>(n) * (m_max + 1) + m];
}

void finalize_product_coefficients(ProductSphereCoefficients& coeffs) {
  coeffs.mass = 0.0;
  coeffs.min_entry = std::numeric_limits<double>::infinity();
  coeffs.certifying = true;
  coeffs.negative_entries.clear();
  for (int n = 0; n <= coeffs.n_max; ++n) {
    for (int m = 0; m <= coeffs.m_max; ++m) {
      double v = coeffs.at(n, m);
      coeffs.mass += v;
      coeffs.min_entry = std::min(coeffs.min_entry, v);
      if (v < -1e-10) coeffs.certifying = false;
      if (v < -1e-8) coeffs.negative_entries.push_back({{n, m}, v});
    }
  }
  if (coeffs.table.empty()) coeffs.min_entry = 0.0;
}

}  // namespace sphk
