#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sphk/kernels.hpp"

namespace sphk {

// A finite test configuration on S^d x G.
struct Configuration {
  int d = 1;
  std::vector<SpaceTimePoint> points;
  std::uint64_t seed = 0;  // provenance of the draw, 0 for hand-built sets
};

// Eigen verdict for one or many Gram matrices. pass holds iff
// min_eig >= -1e-8 * max(1, max_eig); a failing run keeps the offending
// configuration as a reusable counterexample.
struct PsdReport {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double hermitian_gap = 0.0;
  bool pass = true;
  std::optional<Configuration> witness;
};

inline constexpr double kPsdTol = 1e-8;

// Thrown when an operation that requires a positive semidefinite Gram
// (sampling, most prominently) meets a failing one. Carries the report so
// front ends can print the evidence and exit distinctly.
class membership_failure : public std::runtime_error {
 public:
  membership_failure(const std::string& msg, PsdReport report)
      : std::runtime_error(msg), report(std::move(report)) {}
  PsdReport report;
};

// n i.i.d. uniform points on S^d (normalized Gaussians), each of length d+1.
std::vector<std::vector<double>> sample_sphere(int d, int n,
                                               std::uint64_t seed);

// arccos of the clipped dot product, in [0, pi].
double great_circle(const std::vector<double>& xi,
                    const std::vector<double>& eta);

using GroupSampler = std::function<GroupElement(std::mt19937_64&)>;

// A reproducible configuration of exactly n_points sites: uniform sphere
// points paired with draws from the model's validation distribution.
Configuration draw_test_configuration(const GroupModel& model, int d,
                                      int n_points, std::uint64_t seed);

// Eigen-tests the Gram matrix of one fixed configuration.
PsdReport check_configuration(const KernelSpec& spec,
                              const Configuration& config);

// Randomized search for a negative eigenvalue: `trials` configurations with
// between min(10, n_points) and n_points sites each, drawn independently
// (trial t uses seed_seq{seed, t}, so the schedule is reproducible and
// thread-count independent). Returns the worst report; a pass after many
// trials is evidence, not proof.
PsdReport membership_test(const KernelSpec& spec, int d,
                          const GroupSampler& group_sampler, int trials,
                          int n_points, std::uint64_t seed);
// Same, drawing group elements from the model's validation distribution.
PsdReport membership_test(const KernelSpec& spec, int d, int trials,
                          int n_points, std::uint64_t seed);

// Mean-zero Gaussian draws (rows = samples) with covariance equal to the
// configuration's Gram matrix plus jitter * I. jitter < 0 picks the default
// 1e-10 * trace / n; factorization failures escalate jitter by 10x twice
// before giving up with numerical_error. Throws membership_failure when the
// Gram itself fails the eigen test, and domain_error when it is not real.
Eigen::MatrixXd gaussian_sample(const KernelSpec& spec,
                                const Configuration& config, int n_samples,
                                std::uint64_t seed, double jitter = -1.0);

}  // namespace sphk
