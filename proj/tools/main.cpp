// Command-line front end: kernel spec files in, tables and reports out.
// Exit codes: 0 success, 2 input or schema error, 3 numerical failure,
// 4 membership-check FAIL.

#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphk/groups.hpp"
#include "sphk/kernels.hpp"
#include "sphk/pd_check.hpp"
#include "sphk/schoenberg.hpp"
#include "sphk/sequence.hpp"
#include "sphk/serialization.hpp"
#include "sphk/util.hpp"

namespace {

using sphk::spec_error;

// Writes through `emit` to --out when given, else to stdout.
void with_output(const std::string& out_path,
                 const std::function<void(std::ostream&)>& emit) {
  if (out_path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw spec_error("cannot open output file: " + out_path);
  emit(out);
  if (!out) throw spec_error("failed while writing: " + out_path);
}

std::vector<sphk::GroupElement> grid_with_identity(
    const sphk::GroupModel& model, const std::string& grid_spec) {
  std::vector<sphk::GroupElement> grid = sphk::parse_grid(model, grid_spec);
  for (const auto& u : grid) {
    if (model.is_identity(u)) return grid;
  }
  grid.push_back(model.identity());
  return grid;
}

sphk::GroupElement element_or_identity(const sphk::GroupModel& model,
                                       const std::string& u_text) {
  if (u_text.empty()) return model.identity();
  return sphk::element_from_string(model, u_text);
}

struct Options {
  std::string spec_path;
  std::string seq_path;
  std::string out_path;
  std::string grid_spec;
  std::string x_spec;
  std::string u_text;
  std::string d_text;  // product: integer or "inf"
  double x = 1.0;
  int d = 1;
  int dprime = 1;
  int n_max = 8;
  int m_max = 8;
  int q = 0;
  int trials = 200;
  int points = 30;
  int samples = 100;
  std::uint64_t seed = 0;
  double jitter = -1.0;
};

int run_eval(const Options& opt) {
  sphk::KernelFile file = sphk::load_kernel_file(opt.spec_path);
  sphk::GroupElement u = element_or_identity(file.group, opt.u_text);
  if (opt.x < -1.0 || opt.x > 1.0) {
    throw spec_error("--x must lie in [-1,1]");
  }
  std::complex<double> value = file.kernel.eval(opt.x, u);
  with_output(opt.out_path, [&](std::ostream& out) {
    out << sphk::format_g17(value.real()) << "\n";
    if (std::abs(value.imag()) > 1e-12) {
      out << "# imag," << sphk::format_g17(value.imag()) << "\n";
    }
  });
  return 0;
}

int run_extract(const Options& opt) {
  sphk::KernelFile file = sphk::load_kernel_file(opt.spec_path);
  std::vector<sphk::GroupElement> grid =
      grid_with_identity(file.group, opt.grid_spec);
  sphk::SchoenbergSequence seq =
      sphk::extract(file.kernel, opt.d, opt.n_max, grid, opt.q);
  with_output(opt.out_path,
              [&](std::ostream& out) { sphk::write_sequence_csv(out, seq); });
  return 0;
}

int run_synth(const Options& opt) {
  sphk::SchoenbergSequence seq = sphk::load_sequence_file(opt.seq_path);
  std::vector<double> xs = sphk::parse_x_list(opt.x_spec);
  const sphk::NumericProfile* reference = nullptr;
  for (const auto& [n, fn] : seq.entries) {
    if (fn.is_sampled()) {
      reference = fn.profile();
      break;
    }
  }
  if (!reference) throw spec_error("synth: sequence carries no grid");
  with_output(opt.out_path, [&](std::ostream& out) {
    out << "# sphere-kernels synthesis v1\n";
    out << "# truncation_bound," << sphk::format_g17(seq.truncation_bound)
        << "\n";
    out << "x,u,re,im\n";
    for (double x : xs) {
      for (const auto& u : reference->grid) {
        sphk::SynthesisValue v = sphk::synthesize(seq, x, u);
        out << sphk::format_g17(x) << ","
            << "\"" << sphk::element_to_string(seq.group, u) << "\""
            << "," << sphk::format_g17(v.value.real()) << ","
            << sphk::format_g17(v.value.imag()) << "\n";
      }
    }
  });
  return 0;
}

int run_check(const Options& opt) {
  sphk::KernelFile file = sphk::load_kernel_file(opt.spec_path);
  sphk::PsdReport report = sphk::membership_test(
      file.kernel, opt.d, opt.trials, opt.points, opt.seed);
  std::string text = sphk::psd_report_to_json_text(report, file.group);
  with_output(opt.out_path, [&](std::ostream& out) { out << text; });
  return report.pass ? 0 : 4;
}

int run_stepup(const Options& opt) {
  sphk::SchoenbergSequence seq = sphk::load_sequence_file(opt.seq_path);
  sphk::SchoenbergSequence up = sphk::step_up(seq);
  with_output(opt.out_path,
              [&](std::ostream& out) { sphk::write_sequence_csv(out, up); });
  return 0;
}

int run_project(const Options& opt) {
  sphk::KernelFile file = sphk::load_kernel_file(opt.spec_path);
  std::vector<sphk::GroupElement> grid =
      grid_with_identity(file.group, opt.grid_spec);
  sphk::SchoenbergSequence powers = sphk::power_sequence(file.kernel);
  sphk::SchoenbergSequence projected =
      sphk::project_from_infty(powers, opt.d);
  // The projection is parametric; write it out sampled on the grid.
  sphk::SchoenbergSequence sampled = projected;
  sampled.entries.clear();
  for (const auto& [n, fn] : projected.entries) {
    sampled.entries.emplace(
        n, sphk::CoefficientFn::sampled(fn.sample_on(grid)));
  }
  sphk::finalize_sequence(sampled);
  sampled.truncation_bound = projected.truncation_bound;
  with_output(opt.out_path, [&](std::ostream& out) {
    sphk::write_sequence_csv(out, sampled);
  });
  return 0;
}

int run_product(const Options& opt) {
  sphk::BivariateSpec f2 = sphk::load_bivariate_file(opt.spec_path);
  sphk::ProductSphereCoefficients coeffs = [&] {
    if (opt.d_text == "inf" || opt.d_text == "infinity") {
      return sphk::product_sphere_extract_infty(f2, opt.dprime, opt.n_max,
                                                opt.m_max, opt.q);
    }
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(opt.d_text, &used);
      if (used != opt.d_text.size()) throw std::invalid_argument(opt.d_text);
    } catch (const std::exception&) {
      throw spec_error("--d must be an integer >= 1 or 'inf'");
    }
    return sphk::product_sphere_extract(f2, d, opt.dprime, opt.n_max,
                                        opt.m_max, opt.q);
  }();
  with_output(opt.out_path, [&](std::ostream& out) {
    sphk::write_product_csv(out, coeffs);
  });
  return 0;
}

int run_simulate(const Options& opt) {
  sphk::KernelFile file = sphk::load_kernel_file(opt.spec_path);
  sphk::Configuration config = sphk::draw_test_configuration(
      file.group, opt.d, opt.points, opt.seed);
  Eigen::MatrixXd samples = sphk::gaussian_sample(
      file.kernel, config, opt.samples, opt.seed, opt.jitter);
  with_output(opt.out_path, [&](std::ostream& out) {
    sphk::write_samples_csv(out, file.group, config, samples, opt.jitter);
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Positive definite kernels on the sphere times a group: expansion "
      "coefficients, membership checks, and Gaussian field sampling"};
  app.require_subcommand(1);
  Options opt;

  auto* eval = app.add_subcommand("eval", "Evaluate f(x, u) from a spec file");
  eval->add_option("--spec", opt.spec_path, "kernel spec JSON")->required();
  eval->add_option("--x", opt.x, "spatial argument in [-1,1]")->required();
  eval->add_option("--u", opt.u_text,
                   "group element as JSON (default: identity)");
  eval->add_option("--out", opt.out_path, "output path (default: stdout)");

  auto* extract = app.add_subcommand(
      "extract", "Expansion coefficients of a kernel on a group grid");
  extract->add_option("--spec", opt.spec_path, "kernel spec JSON")->required();
  extract->add_option("--d", opt.d, "sphere dimension")->required();
  extract->add_option("--n-max", opt.n_max, "truncation degree")->required();
  extract->add_option("--grid", opt.grid_spec,
                      "group grid (real:A:B:STEP, int:A:B[:STEP], cyclic, "
                      "file:PATH); the identity is added if missing")
      ->required();
  extract->add_option("--q", opt.q, "quadrature nodes (0 = automatic)");
  extract->add_option("--out", opt.out_path, "output CSV (default: stdout)");

  auto* synth = app.add_subcommand(
      "synth", "Re-evaluate an extracted sequence at given x values");
  synth->add_option("--seq", opt.seq_path, "sequence CSV")->required();
  synth->add_option("--x", opt.x_spec, "x values: A,B,C or lin:LO:HI:N")
      ->required();
  synth->add_option("--out", opt.out_path, "output CSV (default: stdout)");

  auto* check = app.add_subcommand(
      "check", "Randomized positive-semidefiniteness verdict");
  check->add_option("--spec", opt.spec_path, "kernel spec JSON")->required();
  check->add_option("--d", opt.d, "sphere dimension")->required();
  check->add_option("--trials", opt.trials, "random configurations (200)");
  check->add_option("--points", opt.points, "max sites per configuration (30)");
  check->add_option("--seed", opt.seed, "RNG seed (0)");
  check->add_option("--out", opt.out_path, "report JSON (default: stdout)");

  auto* stepup = app.add_subcommand(
      "stepup", "Map d-coefficients to (d+2)-coefficients");
  stepup->add_option("--seq", opt.seq_path, "sequence CSV")->required();
  stepup->add_option("--out", opt.out_path, "output CSV (default: stdout)");

  auto* project = app.add_subcommand(
      "project", "Project a power-series kernel to a finite dimension");
  project->add_option("--spec", opt.spec_path,
                      "kernel spec JSON (monomial spatial factors)")
      ->required();
  project->add_option("--d", opt.d, "target sphere dimension")->required();
  project->add_option("--grid", opt.grid_spec, "group grid")->required();
  project->add_option("--out", opt.out_path, "output CSV (default: stdout)");

  auto* product = app.add_subcommand(
      "product", "Coefficient table of a bivariate spatial function");
  product->add_option("--spec", opt.spec_path, "bivariate spec JSON")
      ->required();
  product->add_option("--d", opt.d_text, "first dimension (integer or 'inf')")
      ->required();
  product->add_option("--dprime", opt.dprime, "second dimension")->required();
  product->add_option("--n-max", opt.n_max, "degree cap, first factor")
      ->required();
  product->add_option("--m-max", opt.m_max, "degree cap, second factor")
      ->required();
  product->add_option("--q", opt.q, "quadrature nodes (0 = automatic)");
  product->add_option("--out", opt.out_path, "output CSV (default: stdout)");

  auto* simulate = app.add_subcommand(
      "simulate", "Gaussian field samples at a random configuration");
  simulate->add_option("--spec", opt.spec_path, "kernel spec JSON")
      ->required();
  simulate->add_option("--d", opt.d, "sphere dimension")->required();
  simulate->add_option("--points", opt.points, "configuration size")
      ->required();
  simulate->add_option("--samples", opt.samples, "number of draws (100)");
  simulate->add_option("--seed", opt.seed, "RNG seed (0)");
  simulate->add_option("--jitter", opt.jitter,
                       "diagonal regularization (default: 1e-10 trace/n)");
  simulate->add_option("--out", opt.out_path, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) return run_eval(opt);
    if (extract->parsed()) return run_extract(opt);
    if (synth->parsed()) return run_synth(opt);
    if (check->parsed()) return run_check(opt);
    if (stepup->parsed()) return run_stepup(opt);
    if (project->parsed()) return run_project(opt);
    if (product->parsed()) return run_product(opt);
    if (simulate->parsed()) return run_simulate(opt);
  } catch (const sphk::membership_failure& e) {
    std::cerr << "membership failure: " << e.what() << "\n";
    return 4;
  } catch (const sphk::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const spec_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
