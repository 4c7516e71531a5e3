#include "sphk/schoenberg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphk/special_functions.hpp"
#include "sphk/util.hpp"

namespace sphk {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

constexpr int kLadderCap = 2048;
constexpr double kLadderRelTol = 1e-10;

// One full pass of the coefficient quadrature at a fixed rule size:
// values[n][iu] = (1 / h_n) * sum_i w_i f(x_i, u_iu) c_n(d, x_i).
std::vector<std::vector<std::complex<double>>> extract_at_q(
    const KernelSpec& spec, int d, int n_max,
    const std::vector<GroupElement>& grid, int q) {
  QuadratureRule rule = build_rule(d, q);
  UltrasphericalBasis basis = make_basis(d, n_max);

  std::vector<std::vector<double>> cn(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    cn[i] = ultraspherical_row(d, n_max, rule.nodes[i]);
  }

  std::vector<std::vector<std::complex<double>>> values(
      n_max + 1, std::vector<std::complex<double>>(grid.size(), 0.0));
  parallel_for(grid.size(), [&](std::size_t iu) {
    std::vector<std::complex<double>> acc(n_max + 1, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      std::complex<double> f = spec.eval(rule.nodes[i], grid[iu]);
      std::complex<double> wf = rule.weights[i] * f;
      for (int n = 0; n <= n_max; ++n) acc[n] += wf * cn[i][n];
    }
    for (int n = 0; n <= n_max; ++n) {
      values[n][iu] = acc[n] / basis.norm_constants[n];
    }
  });
  return values;
}

double table_gap(const std::vector<std::vector<std::complex<double>>>& a,
                 const std::vector<std::vector<std::complex<double>>>& b) {
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    for (std::size_t i = 0; i < a[n].size(); ++i) {
      double gap = std::abs(a[n][i] - b[n][i]) /
                   std::max(1.0, std::abs(b[n][i]));
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

SchoenbergSequence sequence_from_values(
    const KernelSpec& spec, int d, int n_max,
    const std::vector<GroupElement>& grid,
    std::vector<std::vector<std::complex<double>>>&& values) {
  SchoenbergSequence seq;
  seq.basis = ExpansionBasis::Ultraspherical;
  seq.d = d;
  seq.n_max = n_max;
  seq.group = spec.group();
  for (int n = 0; n <= n_max; ++n) {
    NumericProfile profile = NumericProfile::zeros(spec.group(), grid);
    profile.values = std::move(values[n]);
    seq.entries.emplace(n, CoefficientFn::sampled(std::move(profile)));
  }
  finalize_sequence(seq);
  double mass_at_one =
      spec.eval(1.0, spec.group().identity()).real();
  seq.truncation_bound = std::max(0.0, mass_at_one - seq.identity_mass);
  return seq;
}

CoefficientFn entry_or_zero(const SchoenbergSequence& seq, int n) {
  const CoefficientFn* fn = seq.entry(n);
  return fn ? *fn : CoefficientFn::zero(seq.group);
}

}  // namespace

SchoenbergSequence extract(const KernelSpec& spec, int d, int n_max,
                           const std::vector<GroupElement>& u_grid, int q) {
  require(d >= 1, "extract: dimension must be >= 1");
  require(n_max >= 0, "extract: n_max must be >= 0");
  require(!u_grid.empty(), "extract: grid must not be empty");
  require(q >= 0, "extract: q must be >= 0 (0 = automatic)");
  // Grid membership and the identity requirement are enforced by the
  // profile constructor below; fail early for clearer diagnostics.
  NumericProfile::zeros(spec.group(), u_grid);

  std::optional<int> deg = spec.spatial_degree();
  if (deg) {
    // Band-limited: one exact pass. A q-point rule integrates degree
    // <= 2q-1, and the integrands have degree <= n_max + deg.
    if (q == 0) {
      q = std::max(n_max, *deg) + 8;
    } else {
      require(q >= n_max + *deg + 1,
              "extract: q too small for exact band-limited extraction "
              "(need >= n_max + degree + 1)");
    }
    return sequence_from_values(spec, d, n_max, u_grid,
                                extract_at_q(spec, d, n_max, u_grid, q));
  }

  // Raw closed form: refine by doubling until the whole table is stable.
  int q0 = (q == 0) ? n_max + 8 : q;
  if (q0 > kLadderCap / 2) {
    throw numerical_error(
        "extract: refinement ladder needs headroom below 2048 nodes; "
        "starting q is too large");
  }
  auto prev = extract_at_q(spec, d, n_max, u_grid, q0);
  for (int qq = 2 * q0; qq <= kLadderCap; qq *= 2) {
    auto next = extract_at_q(spec, d, n_max, u_grid, qq);
    if (table_gap(prev, next) < kLadderRelTol) {
      return sequence_from_values(spec, d, n_max, u_grid, std::move(next));
    }
    prev = std::move(next);
  }
  throw numerical_error(
      "extract: quadrature did not converge by q = 2048 (raw-form spec)");
}

SynthesisValue synthesize(const SchoenbergSequence& seq, double x,
                          const GroupElement& u) {
  x = clip_unit(x);
  seq.group.require_element(u);
  SynthesisValue out;
  out.truncation_bound = seq.truncation_bound;
  if (seq.basis == ExpansionBasis::Ultraspherical) {
    std::vector<double> cn = ultraspherical_row(seq.d, seq.n_max, x);
    for (const auto& [n, fn] : seq.entries) out.value += fn.eval(u) * cn[n];
  } else {
    for (const auto& [n, fn] : seq.entries) {
      out.value += fn.eval(u) * std::pow(x, n);
    }
  }
  return out;
}

SchoenbergSequence step_up(const SchoenbergSequence& seq) {
  require(seq.basis == ExpansionBasis::Ultraspherical,
          "step_up: project the power series to a finite dimension first");
  require(seq.d >= 1, "step_up: dimension must be >= 1");
  require(seq.n_max >= 2,
          "step_up: needs n_max >= 2 (output is truncated two degrees down)");

  SchoenbergSequence out;
  out.basis = ExpansionBasis::Ultraspherical;
  out.d = seq.d + 2;
  out.n_max = seq.n_max - 2;
  out.group = seq.group;

  const int d = seq.d;
  for (int n = 0; n <= out.n_max; ++n) {
    CoefficientFn here = entry_or_zero(seq, n);
    CoefficientFn above = entry_or_zero(seq, n + 2);
    double a, b;
    if (d == 1) {
      // Chebyshev to dimension 3: the n = 0 row has its own weights.
      a = (n == 0) ? 1.0 : 0.5 * (n + 1);
      b = (n == 0) ? -0.5 : -0.5 * (n + 1);
    } else {
      a = static_cast<double>(n + d - 1) * (n + d) / (d * (2.0 * n + d - 1));
      b = -static_cast<double>(n + 1) * (n + 2) / (d * (2.0 * n + d + 3));
    }
    out.entries.emplace(n, CoefficientFn::combine(a, here, b, above));
  }
  finalize_sequence(out);
  out.truncation_bound = std::max(
      0.0, seq.identity_mass + seq.truncation_bound - out.identity_mass);
  return out;
}

SchoenbergSequence project_from_infty(const SchoenbergSequence& power_seq,
                                      int d_target) {
  require(power_seq.basis == ExpansionBasis::Monomial,
          "project: input must be a power-series (monomial) sequence");
  require(d_target >= 1, "project: target dimension must be >= 1");

  SchoenbergSequence out;
  out.basis = ExpansionBasis::Ultraspherical;
  out.d = d_target;
  out.n_max = power_seq.n_max;
  out.group = power_seq.group;

  for (int n = 0; n <= out.n_max; ++n) {
    CoefficientFn acc = CoefficientFn::zero(out.group);
    bool any = false;
    for (int j = 0; n + 2 * j <= power_seq.n_max; ++j) {
      const CoefficientFn* src = power_seq.entry(n + 2 * j);
      if (!src) continue;
      double gamma = monomial_connection_value(d_target, n + 2 * j, j);
      if (gamma == 0.0) continue;
      acc = CoefficientFn::combine(1.0, acc, gamma, *src);
      any = true;
    }
    if (any) out.entries.emplace(n, std::move(acc));
  }
  finalize_sequence(out);
  // The connection table redistributes mass within degrees <= n_max (the
  // coefficients for each source degree are a convex split), so the only
  // dropped tail is the one the input already carried.
  out.truncation_bound = power_seq.truncation_bound;
  return out;
}

SchoenbergSequence power_sequence(const KernelSpec& spec) {
  std::map<int, CoefficientFn> profile = spec.monomial_profile();
  SchoenbergSequence seq;
  seq.basis = ExpansionBasis::Monomial;
  seq.d = 0;
  seq.group = spec.group();
  seq.n_max = profile.empty() ? 0 : profile.rbegin()->first;
  seq.entries = std::move(profile);
  finalize_sequence(seq);
  return seq;
}

double infty_limit_gap(const KernelSpec& spec, int n, const GroupElement& u,
                       int d) {
  require(n >= 0, "limit gap: degree must be >= 0");
  SchoenbergSequence powers = power_sequence(spec);

  std::vector<GroupElement> grid;
  grid.push_back(spec.group().identity());
  if (!spec.group().is_identity(u)) grid.push_back(u);

  int n_max = std::max(n, powers.n_max);
  SchoenbergSequence at_d = extract(spec, d, n_max, grid);

  std::complex<double> finite = at_d.coef_at(n, u);
  std::complex<double> limit = powers.coef_at(n, u);
  return std::abs(finite - limit);
}

// ---------------------------------------------------------------------------
// Product spheres

namespace {

// values[n][m] = (1 / (h_n h_m)) * double quadrature of f2 c_n c_m.
std::vector<double> product_table_at_q(const BivariateSpec& f2, int d,
                                       int dprime, int n_max, int m_max,
                                       int qx, int qy) {
  QuadratureRule rx = build_rule(d, qx);
  QuadratureRule ry = build_rule(dprime, qy);
  UltrasphericalBasis bx = make_basis(d, n_max);
  UltrasphericalBasis by = make_basis(dprime, m_max);

  std::vector<std::vector<double>> cx(rx.nodes.size());
  for (std::size_t i = 0; i < rx.nodes.size(); ++i) {
    cx[i] = ultraspherical_row(d, n_max, rx.nodes[i]);
  }
  std::vector<std::vector<double>> cy(ry.nodes.size());
  for (std::size_t j = 0; j < ry.nodes.size(); ++j) {
    cy[j] = ultraspherical_row(dprime, m_max, ry.nodes[j]);
  }

  // Contract the y axis first: inner[i][m] = sum_j w_j f2(x_i, y_j) c_m(y_j).
  std::vector<std::vector<double>> inner(
      rx.nodes.size(), std::vector<double>(m_max + 1, 0.0));
  parallel_for(rx.nodes.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < ry.nodes.size(); ++j) {
      double wf = ry.weights[j] * f2.eval(rx.nodes[i], ry.nodes[j]);
      for (int m = 0; m <= m_max; ++m) inner[i][m] += wf * cy[j][m];
    }
  });

  std::vector<double> table((n_max + 1) * (m_max + 1), 0.0);
  for (std::size_t i = 0; i < rx.nodes.size(); ++i) {
    for (int n = 0; n <= n_max; ++n) {
      double wc = rx.weights[i] * cx[i][n];
      for (int m = 0; m <= m_max; ++m) {
        table[n * (m_max + 1) + m] += wc * inner[i][m];
      }
    }
  }
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= m_max; ++m) {
      table[n * (m_max + 1) + m] /=
          bx.norm_constants[n] * by.norm_constants[m];
    }
  }
  return table;
}

double product_table_gap(const std::vector<double>& a,
                         const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst,
                     std::fabs(a[i] - b[i]) / std::max(1.0, std::fabs(b[i])));
  }
  return worst;
}

ProductSphereCoefficients product_from_table(int d, int dprime, int n_max,
                                             int m_max,
                                             std::vector<double>&& table) {
  ProductSphereCoefficients out;
  out.d_infinite = false;
  out.d = d;
  out.dprime = dprime;
  out.n_max = n_max;
  out.m_max = m_max;
  out.table = std::move(table);
  finalize_product_coefficients(out);
  return out;
}

}  // namespace

ProductSphereCoefficients product_sphere_extract(const BivariateSpec& f2,
                                                 int d, int dprime, int n_max,
                                                 int m_max, int q) {
  require(d >= 1 && dprime >= 1, "product extract: dimensions must be >= 1");
  require(n_max >= 0 && m_max >= 0, "product extract: degrees must be >= 0");
  require(q >= 0, "product extract: q must be >= 0 (0 = automatic)");

  if (f2.is_band_limited()) {
    int qx = (q == 0) ? std::max(n_max, *f2.degree_x()) + 8 : q;
    int qy = (q == 0) ? std::max(m_max, *f2.degree_y()) + 8 : q;
    if (q != 0) {
      require(q >= n_max + *f2.degree_x() + 1 &&
                  q >= m_max + *f2.degree_y() + 1,
              "product extract: q too small for exact extraction");
    }
    return product_from_table(
        d, dprime, n_max, m_max,
        product_table_at_q(f2, d, dprime, n_max, m_max, qx, qy));
  }

  int q0 = (q == 0) ? std::max(n_max, m_max) + 8 : q;
  if (q0 > kLadderCap / 2) {
    throw numerical_error(
        "product extract: refinement ladder needs headroom below 2048 nodes");
  }
  auto prev = product_table_at_q(f2, d, dprime, n_max, m_max, q0, q0);
  for (int qq = 2 * q0; qq <= kLadderCap; qq *= 2) {
    auto next = product_table_at_q(f2, d, dprime, n_max, m_max, qq, qq);
    if (product_table_gap(prev, next) < kLadderRelTol) {
      return product_from_table(d, dprime, n_max, m_max, std::move(next));
    }
    prev = std::move(next);
  }
  throw numerical_error(
      "product extract: quadrature did not converge by q = 2048");
}

ProductSphereCoefficients product_sphere_extract_infty(const BivariateSpec& f2,
                                                       int dprime, int n_max,
                                                       int m_max, int q) {
  require(dprime >= 1, "product extract: dimension must be >= 1");
  require(n_max >= 0 && m_max >= 0, "product extract: degrees must be >= 0");
  require(f2.is_separable(),
          "product extract at d = infinity: needs a separable bivariate spec");

  ProductSphereCoefficients out;
  out.d_infinite = true;
  out.d = 0;
  out.dprime = dprime;
  out.n_max = n_max;
  out.m_max = m_max;
  out.table.assign((n_max + 1) * (m_max + 1), 0.0);

  UltrasphericalBasis by = make_basis(dprime, m_max);
  for (const auto& term : f2.terms()) {
    auto mono = term.gx.monomial_coeffs();
    require(mono.has_value(),
            "product extract at d = infinity: x factor " +
                term.gx.describe() + " has no power-series expansion");
    auto ydeg = term.gy.degree();
    int qy = (q == 0) ? std::max(m_max, ydeg.value_or(0)) + 8 : q;
    require(ydeg.has_value() || q > 0,
            "product extract at d = infinity: raw y factor needs explicit q");
    QuadratureRule ry = build_rule(dprime, qy);
    std::vector<double> yhat(m_max + 1, 0.0);
    for (std::size_t j = 0; j < ry.nodes.size(); ++j) {
      double wf = ry.weights[j] * term.gy.eval(ry.nodes[j]);
      std::vector<double> cm = ultraspherical_row(dprime, m_max, ry.nodes[j]);
      for (int m = 0; m <= m_max; ++m) yhat[m] += wf * cm[m];
    }
    for (int m = 0; m <= m_max; ++m) yhat[m] /= by.norm_constants[m];

    for (std::size_t n = 0; n < mono->size() &&
                            n <= static_cast<std::size_t>(n_max); ++n) {
      if ((*mono)[n] == 0.0) continue;
      for (int m = 0; m <= m_max; ++m) {
        out.at(static_cast<int>(n), m) += term.weight * (*mono)[n] * yhat[m];
      }
    }
  }
  finalize_product_coefficients(out);
  return out;
}

double product_sphere_synthesize(const ProductSphereCoefficients& coeffs,
                                 double x, double y) {
  x = clip_unit(x, "x");
  y = clip_unit(y, "y");
  std::vector<double> fx(coeffs.n_max + 1, 1.0);
  if (coeffs.d_infinite) {
    for (int n = 1; n <= coeffs.n_max; ++n) fx[n] = fx[n - 1] * x;
  } else {
    fx = ultraspherical_row(coeffs.d, coeffs.n_max, x);
  }
  std::vector<double> fy = ultraspherical_row(coeffs.dprime, coeffs.m_max, y);
  double acc = 0.0;
  for (int n = 0; n <= coeffs.n_max; ++n) {
    for (int m = 0; m <= coeffs.m_max; ++m) {
      acc += coeffs.at(n, m) * fx[n] * fy[m];
    }
  }
  return acc;
}

}  // namespace sphk
