#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphk/groups.hpp"
#include "sphk/kernels.hpp"
#include "sphk/pd_check.hpp"
#include "sphk/sequence.hpp"

namespace sphk {

// Malformed or schema-violating input. Messages carry a JSON-pointer style
// path ("$.kernel.children[1].kind") so users can find the offending node.
class spec_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

json load_json_file(const std::string& path);

GroupModel group_from_json(const json& j, const std::string& path);
json group_to_json(const GroupModel& model);

GroupElement element_from_json(const GroupModel& model, const json& j,
                               const std::string& path);
json element_to_json(const GroupModel& model, const GroupElement& u);
// The element as compact JSON text (the form used in CSV columns and flags).
std::string element_to_string(const GroupModel& model, const GroupElement& u);
GroupElement element_from_string(const GroupModel& model,
                                 const std::string& text);

PdFunctionSpec pd_function_from_json(const GroupModel& model, const json& j,
                                     const std::string& path);
SpatialFactor spatial_from_json(const json& j, const std::string& path);
KernelSpec kernel_from_json(const GroupModel& model, const json& j,
                            const std::string& path);

struct KernelFile {
  GroupModel group;
  KernelSpec kernel;
};

// Top-level document: {"group": {...}, "kernel": {...}, "meta": optional}.
KernelFile load_kernel_file(const std::string& path);

// Top-level document: {"f2": {...}, "meta": optional}.
BivariateSpec load_bivariate_file(const std::string& path);

// Grid descriptors: "real:A:B:STEP", "int:A:B[:STEP]", "cyclic" (all
// residues), "file:PATH" (one JSON element per line, '#' comments allowed).
std::vector<GroupElement> parse_grid(const GroupModel& model,
                                     const std::string& grid_spec);

// "A,B,C" or "lin:LO:HI:COUNT"; values must lie in [-1, 1].
std::vector<double> parse_x_list(const std::string& x_spec);

// Sequence tables round-trip through a '#'-annotated CSV: metadata header
// (basis, d, n_max, group), one row per (degree, grid element), then
// identity values, mass, truncation bound, and any non-membership
// diagnostics as footers. Only sampled (grid-valued) sequences serialize.
void write_sequence_csv(std::ostream& out, const SchoenbergSequence& seq);
SchoenbergSequence read_sequence_csv(std::istream& in);
SchoenbergSequence load_sequence_file(const std::string& path);

void write_product_csv(std::ostream& out,
                       const ProductSphereCoefficients& coeffs);

std::string psd_report_to_json_text(const PsdReport& report,
                                    const GroupModel& model);

void write_samples_csv(std::ostream& out, const GroupModel& model,
                       const Configuration& config,
                       const Eigen::MatrixXd& samples, double jitter);

}  // namespace sphk
