#include "sphk/pd_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphk/util.hpp"

namespace sphk {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

std::vector<double> draw_unit_vector(int dim, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> xi(dim);
  for (;;) {
    double norm_sq = 0.0;
    for (double& v : xi) {
      v = normal(engine);
      norm_sq += v * v;
    }
    if (norm_sq > 1e-24) {
      double inv = 1.0 / std::sqrt(norm_sq);
      for (double& v : xi) v *= inv;
      return xi;
    }
  }
}

}  // namespace

std::vector<std::vector<double>> sample_sphere(int d, int n,
                                               std::uint64_t seed) {
  require(d >= 1, "sample_sphere: dimension must be >= 1");
  require(n >= 1, "sample_sphere: need at least one point");
  std::mt19937_64 engine(seed);
  std::vector<std::vector<double>> points(n);
  for (auto& xi : points) xi = draw_unit_vector(d + 1, engine);
  return points;
}

double great_circle(const std::vector<double>& xi,
                    const std::vector<double>& eta) {
  require(xi.size() == eta.size(), "great_circle: dimension mismatch");
  require(xi.size() >= 2, "great_circle: points need at least 2 coordinates");
  double dot = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) dot += xi[i] * eta[i];
  return std::acos(clip_unit(dot, "dot product"));
}

Configuration draw_test_configuration(const GroupModel& model, int d,
                                      int n_points, std::uint64_t seed) {
  require(d >= 1, "configuration: dimension must be >= 1");
  require(n_points >= 1, "configuration: need at least one point");
  std::mt19937_64 engine(seed);
  Configuration config;
  config.d = d;
  config.seed = seed;
  config.points.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    SpaceTimePoint p;
    p.xi = draw_unit_vector(d + 1, engine);
    p.u = model.sample(engine);
    config.points.push_back(std::move(p));
  }
  return config;
}

PsdReport check_configuration(const KernelSpec& spec,
                              const Configuration& config) {
  Eigen::MatrixXcd gram = kernel_gram(spec, config.points);
  PsdReport report;
  report.hermitian_gap =
      (gram - gram.adjoint()).cwiseAbs().maxCoeff();
  Eigen::MatrixXcd herm = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("psd check: eigen solver failed to converge");
  }
  report.min_eig = solver.eigenvalues().minCoeff();
  report.max_eig = solver.eigenvalues().maxCoeff();
  report.pass = report.min_eig >= -kPsdTol * std::max(1.0, report.max_eig);
  if (!report.pass) report.witness = config;
  return report;
}

namespace {

Configuration draw_configuration(int d, const GroupSampler& group_sampler,
                                 int n_points, std::uint64_t seed,
                                 std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint64_t>(0x5048u), seed, trial};
  std::mt19937_64 engine(seq);
  int low = std::min(10, n_points);
  std::uniform_int_distribution<int> size_dist(low, n_points);
  int size = size_dist(engine);

  Configuration config;
  config.d = d;
  config.seed = seed;
  config.points.reserve(size);
  for (int i = 0; i < size; ++i) {
    SpaceTimePoint p;
    p.xi = draw_unit_vector(d + 1, engine);
    p.u = group_sampler(engine);
    config.points.push_back(std::move(p));
  }
  return config;
}

}  // namespace

PsdReport membership_test(const KernelSpec& spec, int d,
                          const GroupSampler& group_sampler, int trials,
                          int n_points, std::uint64_t seed) {
  require(d >= 1, "membership test: dimension must be >= 1");
  require(trials >= 1, "membership test: need at least one trial");
  require(n_points >= 1, "membership test: need at least one point");

  std::vector<PsdReport> reports(trials);
  std::vector<Configuration> configs(trials);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    configs[t] = draw_configuration(d, group_sampler, n_points, seed,
                                    static_cast<std::uint64_t>(t));
    reports[t] = check_configuration(spec, configs[t]);
  });

  // Worst-case merge: the verdict and eigen range come from the trial with
  // the lowest minimum eigenvalue, the Hermitian gap from all of them.
  std::size_t worst = 0;
  double gap = 0.0;
  for (std::size_t t = 0; t < reports.size(); ++t) {
    gap = std::max(gap, reports[t].hermitian_gap);
    if (reports[t].min_eig < reports[worst].min_eig) worst = t;
  }
  PsdReport merged = reports[worst];
  merged.hermitian_gap = gap;
  if (!merged.pass && !merged.witness) merged.witness = configs[worst];
  return merged;
}

PsdReport membership_test(const KernelSpec& spec, int d, int trials,
                          int n_points, std::uint64_t seed) {
  const GroupModel& model = spec.group();
  GroupSampler sampler = [model](std::mt19937_64& engine) {
    return model.sample(engine);
  };
  return membership_test(spec, d, sampler, trials, n_points, seed);
}

Eigen::MatrixXd gaussian_sample(const KernelSpec& spec,
                                const Configuration& config, int n_samples,
                                std::uint64_t seed, double jitter) {
  require(n_samples >= 1, "gaussian_sample: need at least one sample");
  require(!config.points.empty(), "gaussian_sample: empty configuration");

  const auto n = static_cast<Eigen::Index>(config.points.size());
  Eigen::MatrixXcd gram = kernel_gram(spec, config.points);
  double imag_residue = gram.imag().cwiseAbs().maxCoeff();
  if (imag_residue > 1e-12) {
    throw std::domain_error(
        "gaussian_sample: kernel is not real on this configuration "
        "(imaginary residue " +
        format_g17(imag_residue) + ")");
  }

  PsdReport report = check_configuration(spec, config);
  if (!report.pass) {
    throw membership_failure(
        "gaussian_sample: covariance fails the eigen test (min_eig = " +
            format_g17(report.min_eig) + ")",
        report);
  }

  Eigen::MatrixXd cov =
      0.5 * (gram.real() + gram.real().transpose());
  double base = jitter;
  if (base < 0.0) base = 1e-10 * cov.trace() / static_cast<double>(n);

  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  double used = base;
  bool ok = false;
  for (int attempt = 0; attempt < 3; ++attempt) {
    // A requested jitter of exactly 0 escalates through the default scale.
    used = (attempt == 0)
               ? base
               : std::max(base, 1e-10 * cov.trace() / n) *
                     std::pow(10.0, attempt);
    Eigen::MatrixXd shifted = cov;
    shifted.diagonal().array() += used;
    ldlt.compute(shifted);
    if (ldlt.info() == Eigen::Success &&
        ldlt.vectorD().minCoeff() >= -kPsdTol * std::max(1.0, cov.trace())) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    throw numerical_error(
        "gaussian_sample: factorization failed after jitter escalation "
        "(last jitter " +
        format_g17(used) + ")");
  }

  // cov + jitter I = P^T L D L^T P, so B = P^T L sqrt(max(D,0)) maps
  // standard normals to the target covariance.
  Eigen::MatrixXd L = ldlt.matrixL();
  Eigen::VectorXd root_d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd B = L * root_d.asDiagonal();
  B = ldlt.transpositionsP().transpose() * B;

  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd samples(n_samples, n);
  Eigen::VectorXd z(n);
  for (int s = 0; s < n_samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(engine);
    samples.row(s) = (B * z).transpose();
  }
  return samples;
}

}  // namespace sphk
