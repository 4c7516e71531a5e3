#include "sphk/kernels.hpp"

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

}  // namespace

// ---------------------------------------------------------------------------
// SpatialFactor

SpatialFactor SpatialFactor::ultraspherical(int d, int n) {
  require(d >= 1, "spatial factor: ultraspherical dimension must be >= 1");
  require(n >= 0, "spatial factor: degree must be >= 0");
  SpatialFactor g;
  g.kind_ = SpatialKind::Ultraspherical;
  g.d_ = d;
  g.n_ = n;
  return g;
}

SpatialFactor SpatialFactor::monomial(int n) {
  require(n >= 0, "spatial factor: degree must be >= 0");
  SpatialFactor g;
  g.kind_ = SpatialKind::Monomial;
  g.n_ = n;
  return g;
}

SpatialFactor SpatialFactor::scaled_shift() {
  SpatialFactor g;
  g.kind_ = SpatialKind::ScaledShift;
  return g;
}

SpatialFactor SpatialFactor::powered_exponential(double a, double alpha) {
  require(a > 0.0, "spatial factor: decay rate must be > 0");
  require(alpha > 0.0 && alpha <= 2.0,
          "spatial factor: exponent must be in (0, 2]");
  SpatialFactor g;
  g.kind_ = SpatialKind::PoweredExponential;
  g.a_ = a;
  g.alpha_ = alpha;
  return g;
}

double SpatialFactor::eval(double x) const {
  x = clip_unit(x);
  switch (kind_) {
    case SpatialKind::Ultraspherical:
      return ::sphk::ultraspherical(d_, n_, x);
    case SpatialKind::Monomial:
      return std::pow(x, n_);
    case SpatialKind::ScaledShift:
      return 0.5 * (1.0 + x);
    case SpatialKind::PoweredExponential:
      return std::exp(-a_ * std::pow(std::acos(x), alpha_));
  }
  throw std::logic_error("spatial factor: unhandled kind");
}

std::optional<int> SpatialFactor::degree() const {
  switch (kind_) {
    case SpatialKind::Ultraspherical:
    case SpatialKind::Monomial:
      return n_;
    case SpatialKind::ScaledShift:
      return 1;
    case SpatialKind::PoweredExponential:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> SpatialFactor::monomial_coeffs() const {
  switch (kind_) {
    case SpatialKind::Monomial: {
      std::vector<double> m(n_ + 1, 0.0);
      m[n_] = 1.0;
      return m;
    }
    case SpatialKind::ScaledShift:
      return std::vector<double>{0.5, 0.5};
    default:
      return std::nullopt;
  }
}

std::optional<int> SpatialFactor::certified_dimension() const {
  switch (kind_) {
    case SpatialKind::Ultraspherical:
      // c_n(d, .) stays positive definite under restriction to lower
      // dimensions but leaves the class above its own d once n >= 2;
      // degrees 0 and 1 coincide with 1 and x, which work everywhere.
      return n_ <= 1 ? kAllDimensions : d_;
    case SpatialKind::Monomial:
    case SpatialKind::ScaledShift:
      // Nonnegative expansion coefficients in every dimension.
      return kAllDimensions;
    case SpatialKind::PoweredExponential:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string SpatialFactor::describe() const {
  switch (kind_) {
    case SpatialKind::Ultraspherical:
      return "c_" + std::to_string(n_) + "(" + std::to_string(d_) + ", x)";
    case SpatialKind::Monomial:
      return "x^" + std::to_string(n_);
    case SpatialKind::ScaledShift:
      return "(1+x)/2";
    case SpatialKind::PoweredExponential:
      return "exp(-" + format_g17(a_) + " acos(x)^" + format_g17(alpha_) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// KernelSpec

struct KernelSpec::Node {
  KernelKind kind = KernelKind::TensorProduct;
  GroupModel group;

  // TensorProduct
  std::optional<SpatialFactor> spatial;
  std::optional<PdFunctionSpec> temporal;
  // Sum / Product
  std::vector<KernelSpec> children;
  // Scale
  double factor = 1.0;
  // Expansion
  std::optional<SchoenbergSequence> seq;
  // RawForm
  GneitingParams gneiting;
};

KernelSpec::KernelSpec(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

namespace {

// Dimension tags of expansion nodes in a subtree; used to reject sums that
// mix expansions over different spheres.
void collect_expansion_dims(const KernelSpec& spec, std::vector<int>& dims) {
  switch (spec.kind()) {
    case KernelKind::Expansion:
      if (spec.sequence().basis == ExpansionBasis::Ultraspherical) {
        dims.push_back(spec.sequence().d);
      }
      return;
    case KernelKind::Sum:
    case KernelKind::Product:
      for (const auto& child : spec.children()) {
        collect_expansion_dims(child, dims);
      }
      return;
    case KernelKind::Scale:
      collect_expansion_dims(spec.scaled_child(), dims);
      return;
    default:
      return;
  }
}

}  // namespace

KernelSpec KernelSpec::tensor(SpatialFactor spatial, PdFunctionSpec temporal) {
  auto node = std::make_shared<Node>();
  node->kind = KernelKind::TensorProduct;
  node->group = temporal.group();
  node->spatial = std::move(spatial);
  node->temporal = std::move(temporal);
  return KernelSpec(std::move(node));
}

KernelSpec KernelSpec::sum(std::vector<KernelSpec> children) {
  require(!children.empty(), "kernel sum: needs at least one term");
  for (std::size_t i = 1; i < children.size(); ++i) {
    require(children[i].group() == children[0].group(),
            "kernel sum: terms live on different groups");
  }
  std::vector<int> dims;
  for (const auto& child : children) collect_expansion_dims(child, dims);
  for (std::size_t i = 1; i < dims.size(); ++i) {
    require(dims[i] == dims[0],
            "kernel sum: mixes expansions over different sphere dimensions");
  }
  auto node = std::make_shared<Node>();
  node->kind = KernelKind::Sum;
  node->group = children[0].group();
  node->children = std::move(children);
  return KernelSpec(std::move(node));
}

KernelSpec KernelSpec::product(std::vector<KernelSpec> children) {
  require(!children.empty(), "kernel product: needs at least one factor");
  for (std::size_t i = 1; i < children.size(); ++i) {
    require(children[i].group() == children[0].group(),
            "kernel product: factors live on different groups");
  }
  auto node = std::make_shared<Node>();
  node->kind = KernelKind::Product;
  node->group = children[0].group();
  node->children = std::move(children);
  return KernelSpec(std::move(node));
}

KernelSpec KernelSpec::scale(double r, KernelSpec child) {
  require(r >= 0.0, "kernel scale: factor must be >= 0");
  auto node = std::make_shared<Node>();
  node->kind = KernelKind::Scale;
  node->group = child.group();
  node->factor = r;
  node->children.push_back(std::move(child));
  return KernelSpec(std::move(node));
}

KernelSpec KernelSpec::expansion(SchoenbergSequence seq) {
  require(seq.basis == ExpansionBasis::Ultraspherical,
          "kernel expansion: needs ultraspherical coefficients (project "
          "power series down to a finite dimension first)");
  require(seq.d >= 1, "kernel expansion: dimension must be >= 1");
  auto node = std::make_shared<Node>();
  node->kind = KernelKind::Expansion;
  node->group = seq.group;
  node->seq = std::move(seq);
  return KernelSpec(std::move(node));
}

KernelSpec KernelSpec::gneiting(GroupModel group, GneitingParams p) {
  require(p.a > 0.0, "gneiting: a must be > 0");
  require(p.alpha > 0.0 && p.alpha <= 2.0, "gneiting: alpha must be in (0,2]");
  require(p.beta >= 0.0 && p.beta <= 2.0, "gneiting: beta must be in [0,2]");
  require(p.gamma > 0.0 && p.gamma <= 2.0, "gneiting: gamma must be in (0,2]");
  require(p.tau > 0.0, "gneiting: tau must be > 0");
  require(p.c > 0.0, "gneiting: c must be > 0");
  auto node = std::make_shared<Node>();
  node->kind = KernelKind::RawForm;
  node->group = group;
  node->gneiting = p;
  return KernelSpec(std::move(node));
}

KernelKind KernelSpec::kind() const { return node_->kind; }

const GroupModel& KernelSpec::group() const { return node_->group; }

const std::vector<KernelSpec>& KernelSpec::children() const {
  return node_->children;
}

double KernelSpec::scale_factor() const {
  require(node_->kind == KernelKind::Scale, "not a scale node");
  return node_->factor;
}

const KernelSpec& KernelSpec::scaled_child() const {
  require(node_->kind == KernelKind::Scale, "not a scale node");
  return node_->children[0];
}

const SpatialFactor& KernelSpec::spatial() const {
  require(node_->kind == KernelKind::TensorProduct, "not a tensor node");
  return *node_->spatial;
}

const PdFunctionSpec& KernelSpec::temporal() const {
  require(node_->kind == KernelKind::TensorProduct, "not a tensor node");
  return *node_->temporal;
}

const SchoenbergSequence& KernelSpec::sequence() const {
  require(node_->kind == KernelKind::Expansion, "not an expansion node");
  return *node_->seq;
}

const GneitingParams& KernelSpec::gneiting_params() const {
  require(node_->kind == KernelKind::RawForm, "not a raw-form node");
  return node_->gneiting;
}

std::complex<double> KernelSpec::eval(double x, const GroupElement& u) const {
  x = clip_unit(x);
  node_->group.require_element(u);
  switch (node_->kind) {
    case KernelKind::TensorProduct:
      return node_->spatial->eval(x) * node_->temporal->eval(u);
    case KernelKind::Sum: {
      std::complex<double> acc = 0.0;
      for (const auto& child : node_->children) acc += child.eval(x, u);
      return acc;
    }
    case KernelKind::Product: {
      std::complex<double> acc = 1.0;
      for (const auto& child : node_->children) acc *= child.eval(x, u);
      return acc;
    }
    case KernelKind::Scale:
      return node_->factor * node_->children[0].eval(x, u);
    case KernelKind::Expansion: {
      const SchoenbergSequence& seq = *node_->seq;
      std::vector<double> cn = ultraspherical_row(seq.d, seq.n_max, x);
      std::complex<double> acc = 0.0;
      for (const auto& [n, fn] : seq.entries) acc += fn.eval(u) * cn[n];
      return acc;
    }
    case KernelKind::RawForm: {
      const GneitingParams& p = node_->gneiting;
      double t = node_->group.norm(u);
      double h = 1.0 + p.a * std::pow(t, p.alpha);
      double theta = std::acos(x);
      return std::pow(h, -p.tau) *
             std::exp(-p.c * std::pow(theta, p.gamma) /
                      std::pow(h, 0.5 * p.beta));
    }
  }
  throw std::logic_error("kernel eval: unhandled kind");
}

std::optional<int> KernelSpec::spatial_degree() const {
  switch (node_->kind) {
    case KernelKind::TensorProduct:
      return node_->spatial->degree();
    case KernelKind::Sum: {
      int deg = 0;
      for (const auto& child : node_->children) {
        auto c = child.spatial_degree();
        if (!c) return std::nullopt;
        deg = std::max(deg, *c);
      }
      return deg;
    }
    case KernelKind::Product: {
      int deg = 0;
      for (const auto& child : node_->children) {
        auto c = child.spatial_degree();
        if (!c) return std::nullopt;
        deg += *c;
      }
      return deg;
    }
    case KernelKind::Scale:
      return node_->children[0].spatial_degree();
    case KernelKind::Expansion:
      return node_->seq->n_max;
    case KernelKind::RawForm:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<int> KernelSpec::certified_dimension() const {
  switch (node_->kind) {
    case KernelKind::TensorProduct: {
      if (!node_->temporal->is_catalog()) return std::nullopt;
      return node_->spatial->certified_dimension();
    }
    case KernelKind::Sum:
    case KernelKind::Product: {
      // Sums and Schur products preserve membership dimension by dimension.
      int dim = kAllDimensions;
      for (const auto& child : node_->children) {
        auto c = child.certified_dimension();
        if (!c) return std::nullopt;
        dim = std::min(dim, *c);
      }
      return dim;
    }
    case KernelKind::Scale:
      return node_->children[0].certified_dimension();
    case KernelKind::Expansion: {
      const SchoenbergSequence& seq = *node_->seq;
      if (!seq.diagnostics.certifying) return std::nullopt;
      for (const auto& [n, fn] : seq.entries) {
        if (fn.is_sampled()) return std::nullopt;
        for (const auto& term : fn.terms()) {
          if (term.weight < 0.0 || !term.phi.is_catalog()) return std::nullopt;
        }
      }
      return seq.d;
    }
    case KernelKind::RawForm:
      return std::nullopt;
  }
  return std::nullopt;
}

std::map<int, CoefficientFn> KernelSpec::monomial_profile() const {
  switch (node_->kind) {
    case KernelKind::TensorProduct: {
      auto coeffs = node_->spatial->monomial_coeffs();
      require(coeffs.has_value(),
              "power-series view: spatial factor " +
                  node_->spatial->describe() + " has no monomial expansion");
      std::map<int, CoefficientFn> out;
      for (std::size_t j = 0; j < coeffs->size(); ++j) {
        if ((*coeffs)[j] == 0.0) continue;
        out.emplace(static_cast<int>(j),
                    CoefficientFn::parametric((*coeffs)[j], *node_->temporal));
      }
      return out;
    }
    case KernelKind::Sum: {
      std::map<int, CoefficientFn> out;
      for (const auto& child : node_->children) {
        for (auto& [n, fn] : child.monomial_profile()) {
          auto it = out.find(n);
          if (it == out.end()) {
            out.emplace(n, fn);
          } else {
            it->second = CoefficientFn::combine(1.0, it->second, 1.0, fn);
          }
        }
      }
      return out;
    }
    case KernelKind::Scale: {
      std::map<int, CoefficientFn> out;
      for (auto& [n, fn] : node_->children[0].monomial_profile()) {
        out.emplace(n, fn.scaled(node_->factor));
      }
      return out;
    }
    case KernelKind::Expansion: {
      throw std::domain_error(
          "power-series view: expansion nodes carry a finite dimension tag");
    }
    default:
      throw std::domain_error(
          "power-series view: only sums and scalings of monomial or "
          "(1+x)/2 tensor kernels are expressible");
  }
}

std::string KernelSpec::describe() const {
  switch (node_->kind) {
    case KernelKind::TensorProduct:
      return node_->spatial->describe() + " (x) " +
             node_->temporal->describe();
    case KernelKind::Sum: {
      std::string s = "sum(";
      for (std::size_t i = 0; i < node_->children.size(); ++i) {
        if (i) s += ", ";
        s += node_->children[i].describe();
      }
      return s + ")";
    }
    case KernelKind::Product: {
      std::string s = "product(";
      for (std::size_t i = 0; i < node_->children.size(); ++i) {
        if (i) s += ", ";
        s += node_->children[i].describe();
      }
      return s + ")";
    }
    case KernelKind::Scale:
      return format_g17(node_->factor) + " * " +
             node_->children[0].describe();
    case KernelKind::Expansion:
      return "expansion(d=" + std::to_string(node_->seq->d) +
             ", n_max=" + std::to_string(node_->seq->n_max) + ")";
    case KernelKind::RawForm:
      return "gneiting(a=" + format_g17(node_->gneiting.a) +
             ", alpha=" + format_g17(node_->gneiting.alpha) +
             ", beta=" + format_g17(node_->gneiting.beta) +
             ", gamma=" + format_g17(node_->gneiting.gamma) +
             ", tau=" + format_g17(node_->gneiting.tau) +
             ", c=" + format_g17(node_->gneiting.c) + ")";
  }
  return "?";
}

std::complex<double> kernel_eval(const KernelSpec& spec, double x,
                                 const GroupElement& u) {
  return spec.eval(x, u);
}

// ---------------------------------------------------------------------------
// Gram assembly

namespace {

std::vector<double> unit_or_throw(const std::vector<double>& xi,
                                  std::size_t index) {
  double norm_sq = 0.0;
  for (double v : xi) norm_sq += v * v;
  double norm = std::sqrt(norm_sq);
  if (std::fabs(norm - 1.0) > 1e-10) {
    throw std::domain_error("gram: point " + std::to_string(index) +
                            " is not a unit vector (|xi| = " +
                            format_g17(norm) + ")");
  }
  std::vector<double> out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = xi[i] / norm;
  return out;
}

}  // namespace

Eigen::MatrixXcd kernel_gram(const KernelSpec& spec,
                             const std::vector<SpaceTimePoint>& points) {
  const std::size_t n = points.size();
  require(n >= 1, "gram: needs at least one point");
  const std::size_t dim = points[0].xi.size();
  require(dim >= 2, "gram: sphere points need at least 2 coordinates");

  std::vector<std::vector<double>> xi(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(points[i].xi.size() == dim, "gram: mixed point dimensions");
    spec.group().require_element(points[i].u);
    xi[i] = unit_or_throw(points[i].xi, i);
  }

  Eigen::MatrixXcd gram(n, n);
  parallel_for(n, [&](std::size_t k) {
    for (std::size_t l = 0; l < n; ++l) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dot += xi[k][j] * xi[l][j];
      GroupElement disp = spec.group().displacement(points[k].u, points[l].u);
      gram(k, l) = spec.eval(clip_unit(dot, "gram dot product"), disp);
    }
  });
  return gram;
}

// ---------------------------------------------------------------------------
// BivariateSpec

BivariateSpec BivariateSpec::separable(std::vector<Term> terms) {
  require(!terms.empty(), "bivariate: needs at least one term");
  BivariateSpec f2;
  f2.terms_ = std::move(terms);
  return f2;
}

BivariateSpec BivariateSpec::raw(std::function<double(double, double)> f2,
                                 std::string label) {
  require(f2 != nullptr, "bivariate: callable must not be empty");
  BivariateSpec spec;
  spec.raw_ = std::move(f2);
  spec.label_ = std::move(label);
  return spec;
}

double BivariateSpec::eval(double x, double y) const {
  x = clip_unit(x, "x");
  y = clip_unit(y, "y");
  if (raw_) return raw_(x, y);
  double acc = 0.0;
  for (const auto& term : terms_) {
    acc += term.weight * term.gx.eval(x) * term.gy.eval(y);
  }
  return acc;
}

std::optional<int> BivariateSpec::degree_x() const {
  if (raw_) return std::nullopt;
  int deg = 0;
  for (const auto& term : terms_) {
    auto d = term.gx.degree();
    if (!d) return std::nullopt;
    deg = std::max(deg, *d);
  }
  return deg;
}

std::optional<int> BivariateSpec::degree_y() const {
  if (raw_) return std::nullopt;
  int deg = 0;
  for (const auto& term : terms_) {
    auto d = term.gy.degree();
    if (!d) return std::nullopt;
    deg = std::max(deg, *d);
  }
  return deg;
}

std::string BivariateSpec::describe() const {
  if (raw_) return "raw(" + label_ + ")";
  std::string s = "separable(";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += " + ";
    s += format_g17(terms_[i].weight) + " * " + terms_[i].gx.describe() +
         " * " + terms_[i].gy.describe();
  }
  return s + ")";
}

}  // namespace sphk
