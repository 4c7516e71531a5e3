#include "sphk/serialization.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sphk/util.hpp"

namespace sphk {

namespace {

std::string at(const std::string& path, const std::string& key) {
  return path + "." + key;
}

std::string idx(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) {
    throw spec_error(path + ": expected an object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw spec_error(at(path, key) + ": missing");
  }
  return *it;
}

double need_number(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) {
    throw spec_error(at(path, key) + ": expected a number");
  }
  return v.get<double>();
}

std::int64_t need_int(const json& j, const char* key,
                      const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number_integer()) {
    throw spec_error(at(path, key) + ": expected an integer");
  }
  return v.get<std::int64_t>();
}

std::string need_string(const json& j, const char* key,
                        const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_string()) {
    throw spec_error(at(path, key) + ": expected a string");
  }
  return v.get<std::string>();
}

// CSV quoting for fields that may contain commas or quotes (JSON text).
std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw spec_error(what + ": not a number: '" + text + "'");
  }
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw spec_error(what + ": not an integer: '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Groups and elements

GroupModel group_from_json(const json& j, const std::string& path) {
  std::string kind = need_string(j, "kind", path);
  try {
    if (kind == "real_line") return GroupModel::real_line();
    if (kind == "integers") return GroupModel::integers();
    if (kind == "cyclic") return GroupModel::cyclic(need_int(j, "m", path));
    if (kind == "real_vector") {
      return GroupModel::real_vector(
          static_cast<int>(need_int(j, "k", path)));
    }
  } catch (const std::domain_error& e) {
    throw spec_error(path + ": " + e.what());
  }
  throw spec_error(at(path, "kind") + ": unknown group kind '" + kind +
                   "' (expected real_line, integers, cyclic, real_vector)");
}

json group_to_json(const GroupModel& model) {
  json j;
  switch (model.kind()) {
    case GroupKind::RealLine:
      j["kind"] = "real_line";
      break;
    case GroupKind::Integers:
      j["kind"] = "integers";
      break;
    case GroupKind::Cyclic:
      j["kind"] = "cyclic";
      j["m"] = model.modulus();
      break;
    case GroupKind::RealVector:
      j["kind"] = "real_vector";
      j["k"] = model.vector_dim();
      break;
  }
  return j;
}

GroupElement element_from_json(const GroupModel& model, const json& j,
                               const std::string& path) {
  GroupElement u;
  switch (model.kind()) {
    case GroupKind::RealLine:
      if (!j.is_number()) throw spec_error(path + ": expected a real number");
      u = j.get<double>();
      break;
    case GroupKind::Integers:
    case GroupKind::Cyclic:
      if (!j.is_number_integer()) {
        throw spec_error(path + ": expected an integer");
      }
      u = j.get<std::int64_t>();
      break;
    case GroupKind::RealVector: {
      if (!j.is_array()) throw spec_error(path + ": expected an array");
      std::vector<double> coords;
      coords.reserve(j.size());
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
          throw spec_error(idx(path, i) + ": expected a number");
        }
        coords.push_back(j[i].get<double>());
      }
      u = std::move(coords);
      break;
    }
  }
  try {
    model.require_element(u);
  } catch (const std::domain_error& e) {
    throw spec_error(path + ": " + e.what());
  }
  return u;
}

json element_to_json(const GroupModel& model, const GroupElement& u) {
  model.require_element(u);
  switch (model.kind()) {
    case GroupKind::RealLine:
      return json(std::get<double>(u));
    case GroupKind::Integers:
    case GroupKind::Cyclic:
      return json(std::get<std::int64_t>(u));
    case GroupKind::RealVector:
      return json(std::get<std::vector<double>>(u));
  }
  throw std::logic_error("element_to_json: unhandled kind");
}

std::string element_to_string(const GroupModel& model, const GroupElement& u) {
  return element_to_json(model, u).dump();
}

GroupElement element_from_string(const GroupModel& model,
                                 const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw spec_error("element '" + text + "': " + e.what());
  }
  return element_from_json(model, j, "element");
}

// ---------------------------------------------------------------------------
// Positive definite functions and kernels

PdFunctionSpec pd_function_from_json(const GroupModel& model, const json& j,
                                     const std::string& path) {
  std::string form = need_string(j, "form", path);
  try {
    if (form == "exp_decay") {
      return PdFunctionSpec::exp_decay(model, need_number(j, "a", path));
    }
    if (form == "gaussian") {
      return PdFunctionSpec::gaussian(model, need_number(j, "a", path));
    }
    if (form == "cosine") {
      return PdFunctionSpec::cosine(model, need_number(j, "omega", path));
    }
    if (form == "triangular") {
      return PdFunctionSpec::triangular(model, need_number(j, "c", path));
    }
    if (form == "constant") {
      return PdFunctionSpec::constant(model, need_number(j, "r", path));
    }
    if (form == "character_mix") {
      const json& terms = need(j, "terms", path);
      if (!terms.is_array() || terms.empty()) {
        throw spec_error(at(path, "terms") + ": expected a non-empty array");
      }
      std::vector<CharacterTerm> mix;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string term_path = idx(at(path, "terms"), i);
        CharacterTerm term;
        term.weight = need_number(terms[i], "weight", term_path);
        const json& omega = need(terms[i], "omega", term_path);
        if (omega.is_number()) {
          term.omega.push_back(omega.get<double>());
        } else if (omega.is_array()) {
          for (std::size_t c = 0; c < omega.size(); ++c) {
            if (!omega[c].is_number()) {
              throw spec_error(idx(at(term_path, "omega"), c) +
                               ": expected a number");
            }
            term.omega.push_back(omega[c].get<double>());
          }
        } else {
          throw spec_error(at(term_path, "omega") +
                           ": expected a number or an array");
        }
        mix.push_back(std::move(term));
      }
      return PdFunctionSpec::character_mix(model, std::move(mix));
    }
  } catch (const std::domain_error& e) {
    throw spec_error(path + ": " + e.what());
  }
  throw spec_error(at(path, "form") + ": unknown form '" + form +
                   "' (expected exp_decay, gaussian, cosine, triangular, "
                   "constant, character_mix)");
}

SpatialFactor spatial_from_json(const json& j, const std::string& path) {
  std::string kind = need_string(j, "kind", path);
  try {
    if (kind == "ultraspherical") {
      return SpatialFactor::ultraspherical(
          static_cast<int>(need_int(j, "d", path)),
          static_cast<int>(need_int(j, "n", path)));
    }
    if (kind == "monomial") {
      return SpatialFactor::monomial(static_cast<int>(need_int(j, "n", path)));
    }
    if (kind == "scaled_shift") return SpatialFactor::scaled_shift();
    if (kind == "powered_exponential") {
      return SpatialFactor::powered_exponential(need_number(j, "a", path),
                                                need_number(j, "alpha", path));
    }
  } catch (const std::domain_error& e) {
    throw spec_error(path + ": " + e.what());
  }
  throw spec_error(at(path, "kind") + ": unknown spatial kind '" + kind +
                   "' (expected ultraspherical, monomial, scaled_shift, "
                   "powered_exponential)");
}

KernelSpec kernel_from_json(const GroupModel& model, const json& j,
                            const std::string& path) {
  std::string kind = need_string(j, "kind", path);
  try {
    if (kind == "tensor") {
      SpatialFactor spatial =
          spatial_from_json(need(j, "spatial", path), at(path, "spatial"));
      PdFunctionSpec temporal = pd_function_from_json(
          model, need(j, "temporal", path), at(path, "temporal"));
      return KernelSpec::tensor(std::move(spatial), std::move(temporal));
    }
    if (kind == "sum" || kind == "product") {
      const json& children = need(j, "children", path);
      if (!children.is_array() || children.empty()) {
        throw spec_error(at(path, "children") +
                         ": expected a non-empty array");
      }
      std::vector<KernelSpec> parsed;
      parsed.reserve(children.size());
      for (std::size_t i = 0; i < children.size(); ++i) {
        parsed.push_back(kernel_from_json(model, children[i],
                                          idx(at(path, "children"), i)));
      }
      return kind == "sum" ? KernelSpec::sum(std::move(parsed))
                           : KernelSpec::product(std::move(parsed));
    }
    if (kind == "scale") {
      double r = need_number(j, "r", path);
      return KernelSpec::scale(
          r, kernel_from_json(model, need(j, "child", path),
                              at(path, "child")));
    }
    if (kind == "gneiting") {
      GneitingParams p;
      p.a = need_number(j, "a", path);
      p.alpha = need_number(j, "alpha", path);
      p.beta = need_number(j, "beta", path);
      p.gamma = need_number(j, "gamma", path);
      p.tau = need_number(j, "tau", path);
      p.c = need_number(j, "c", path);
      return KernelSpec::gneiting(model, p);
    }
  } catch (const std::domain_error& e) {
    throw spec_error(path + ": " + e.what());
  }
  throw spec_error(at(path, "kind") + ": unknown kernel kind '" + kind +
                   "' (expected tensor, sum, product, scale, gneiting)");
}

KernelFile load_kernel_file(const std::string& path) {
  json doc = load_json_file(path);
  if (!doc.is_object()) throw spec_error("$: expected an object");
  GroupModel model = group_from_json(need(doc, "group", "$"), "$.group");
  KernelSpec kernel =
      kernel_from_json(model, need(doc, "kernel", "$"), "$.kernel");
  return KernelFile{std::move(model), std::move(kernel)};
}

BivariateSpec load_bivariate_file(const std::string& path) {
  json doc = load_json_file(path);
  if (!doc.is_object()) throw spec_error("$: expected an object");
  const json& f2 = need(doc, "f2", "$");
  std::string kind = need_string(f2, "kind", "$.f2");
  if (kind != "separable") {
    throw spec_error("$.f2.kind: unknown bivariate kind '" + kind +
                     "' (expected separable)");
  }
  const json& terms = need(f2, "terms", "$.f2");
  if (!terms.is_array() || terms.empty()) {
    throw spec_error("$.f2.terms: expected a non-empty array");
  }
  std::vector<BivariateSpec::Term> parsed;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string term_path = idx("$.f2.terms", i);
    parsed.push_back(BivariateSpec::Term{
        need_number(terms[i], "weight", term_path),
        spatial_from_json(need(terms[i], "x", term_path), at(term_path, "x")),
        spatial_from_json(need(terms[i], "y", term_path),
                          at(term_path, "y"))});
  }
  return BivariateSpec::separable(std::move(parsed));
}

// ---------------------------------------------------------------------------
// Grids and x lists

namespace {

constexpr std::size_t kMaxGridSize = 200000;

std::vector<GroupElement> grid_from_file(const GroupModel& model,
                                         const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open grid file: " + path);
  std::vector<GroupElement> grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    if (trimmed.empty() || trimmed[0] == '#') continue;
    json j;
    try {
      j = json::parse(trimmed);
    } catch (const nlohmann::json::exception& e) {
      throw spec_error(path + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
    grid.push_back(element_from_json(
        model, j, path + ":" + std::to_string(line_no)));
  }
  if (grid.empty()) throw spec_error(path + ": grid file has no elements");
  return grid;
}

}  // namespace

std::vector<GroupElement> parse_grid(const GroupModel& model,
                                     const std::string& grid_spec) {
  std::vector<std::string> parts = split(grid_spec, ':');
  const std::string& head = parts[0];

  if (head == "file") {
    if (parts.size() < 2) throw spec_error("grid: file spec needs a path");
    // Paths may contain ':'; rejoin everything after the prefix.
    std::string path = grid_spec.substr(5);
    return grid_from_file(model, path);
  }

  if (head == "cyclic") {
    if (model.kind() != GroupKind::Cyclic) {
      throw spec_error("grid: 'cyclic' needs a cyclic group model");
    }
    if (parts.size() > 2 || (parts.size() == 2 && parts[1] != "all")) {
      throw spec_error("grid: cyclic spec is 'cyclic' or 'cyclic:all'");
    }
    std::vector<GroupElement> grid;
    for (std::int64_t r = 0; r < model.modulus(); ++r) grid.emplace_back(r);
    return grid;
  }

  if (head == "real") {
    if (model.kind() != GroupKind::RealLine) {
      throw spec_error("grid: 'real' needs the real-line group model");
    }
    if (parts.size() != 4) throw spec_error("grid: expected real:A:B:STEP");
    double a = parse_double(parts[1], "grid start");
    double b = parse_double(parts[2], "grid end");
    double step = parse_double(parts[3], "grid step");
    if (step <= 0 || b < a) {
      throw spec_error("grid: need step > 0 and end >= start");
    }
    auto count = static_cast<std::size_t>((b - a) / step + 1e-9) + 1;
    if (count > kMaxGridSize) throw spec_error("grid: too many points");
    std::vector<GroupElement> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      grid.emplace_back(a + step * static_cast<double>(i));
    }
    return grid;
  }

  if (head == "int") {
    if (model.kind() != GroupKind::Integers) {
      throw spec_error("grid: 'int' needs the integers group model");
    }
    if (parts.size() != 3 && parts.size() != 4) {
      throw spec_error("grid: expected int:A:B[:STEP]");
    }
    std::int64_t a = parse_int(parts[1], "grid start");
    std::int64_t b = parse_int(parts[2], "grid end");
    std::int64_t step =
        parts.size() == 4 ? parse_int(parts[3], "grid step") : 1;
    if (step <= 0 || b < a) {
      throw spec_error("grid: need step > 0 and end >= start");
    }
    if (static_cast<std::size_t>((b - a) / step) + 1 > kMaxGridSize) {
      throw spec_error("grid: too many points");
    }
    std::vector<GroupElement> grid;
    for (std::int64_t v = a; v <= b; v += step) grid.emplace_back(v);
    return grid;
  }

  throw spec_error("grid: unknown spec '" + grid_spec +
                   "' (expected real:A:B:STEP, int:A:B[:STEP], cyclic, "
                   "file:PATH)");
}

std::vector<double> parse_x_list(const std::string& x_spec) {
  std::vector<double> xs;
  if (x_spec.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts = split(x_spec, ':');
    if (parts.size() != 4) throw spec_error("x list: expected lin:LO:HI:N");
    double lo = parse_double(parts[1], "x list low");
    double hi = parse_double(parts[2], "x list high");
    std::int64_t count = parse_int(parts[3], "x list count");
    if (count < 1 || count > static_cast<std::int64_t>(kMaxGridSize)) {
      throw spec_error("x list: count out of range");
    }
    for (std::int64_t i = 0; i < count; ++i) {
      double t = count == 1 ? 0.0
                            : static_cast<double>(i) /
                                  static_cast<double>(count - 1);
      xs.push_back(lo + (hi - lo) * t);
    }
  } else {
    for (const std::string& field : split(x_spec, ',')) {
      xs.push_back(parse_double(field, "x list"));
    }
  }
  for (double x : xs) {
    if (x < -1.0 || x > 1.0) {
      throw spec_error("x list: value outside [-1,1]: " + format_g17(x));
    }
  }
  return xs;
}

// ---------------------------------------------------------------------------
// Sequence CSV

namespace {

const char* basis_name(ExpansionBasis basis) {
  return basis == ExpansionBasis::Ultraspherical ? "ultraspherical"
                                                 : "monomial";
}

}  // namespace

void write_sequence_csv(std::ostream& out, const SchoenbergSequence& seq) {
  // Serialization needs a common grid; parametric entries are sampled onto
  // the grid of the first sampled entry.
  const NumericProfile* reference = nullptr;
  for (const auto& [n, fn] : seq.entries) {
    if (fn.is_sampled()) {
      reference = fn.profile();
      break;
    }
  }
  if (!reference) {
    throw spec_error(
        "sequence csv: no grid to write (sample the sequence on a grid "
        "first)");
  }
  for (const auto& [n, fn] : seq.entries) {
    if (!fn.is_sampled()) continue;
    const NumericProfile* p = fn.profile();
    bool same = p->grid.size() == reference->grid.size();
    for (std::size_t i = 0; same && i < p->grid.size(); ++i) {
      same = seq.group.almost_equal(p->grid[i], reference->grid[i]);
    }
    if (!same) {
      throw spec_error("sequence csv: entries sampled on different grids");
    }
  }

  out << "# sphere-kernels sequence v1\n";
  out << "# basis," << basis_name(seq.basis) << "\n";
  out << "# d," << seq.d << "\n";
  out << "# n_max," << seq.n_max << "\n";
  out << "# group," << csv_quote(group_to_json(seq.group).dump()) << "\n";
  out << "n,u,re,im\n";
  for (const auto& [n, fn] : seq.entries) {
    NumericProfile row =
        fn.is_sampled() ? *fn.profile() : fn.sample_on(reference->grid);
    for (std::size_t i = 0; i < row.grid.size(); ++i) {
      out << n << ","
          << csv_quote(element_to_string(seq.group, row.grid[i])) << ","
          << format_g17(row.values[i].real()) << ","
          << format_g17(row.values[i].imag()) << "\n";
    }
  }
  for (const auto& [n, fn] : seq.entries) {
    std::complex<double> e = fn.at_identity();
    out << "# identity," << n << "," << format_g17(e.real()) << ","
        << format_g17(e.imag()) << "\n";
  }
  out << "# identity_mass," << format_g17(seq.identity_mass) << "\n";
  out << "# truncation_bound," << format_g17(seq.truncation_bound) << "\n";
  for (const auto& [n, value] : seq.diagnostics.negative_identity) {
    out << "# DIAGNOSTIC:nonmember," << n << "," << format_g17(value) << "\n";
  }
}

SchoenbergSequence read_sequence_csv(std::istream& in) {
  SchoenbergSequence seq;
  bool have_basis = false, have_d = false, have_n_max = false,
       have_group = false, have_header = false;
  double stored_truncation = 0.0;

  // degree -> (element text, value) rows in file order
  std::map<int, std::vector<std::pair<std::string, std::complex<double>>>>
      rows;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string where = "sequence csv line " + std::to_string(line_no);

    if (line[0] == '#') {
      std::string body = line.substr(1);
      body.erase(0, body.find_first_not_of(' '));
      std::vector<std::string> fields = split_csv_row(body);
      if (fields.empty()) continue;
      const std::string& key = fields[0];
      if (key.rfind("sphere-kernels", 0) == 0) {
        if (key != "sphere-kernels sequence v1") {
          throw spec_error(where + ": unsupported format marker '" + key +
                           "' (expected sphere-kernels sequence v1)");
        }
      } else if (key == "basis" && fields.size() >= 2) {
        if (fields[1] == "ultraspherical") {
          seq.basis = ExpansionBasis::Ultraspherical;
        } else if (fields[1] == "monomial") {
          seq.basis = ExpansionBasis::Monomial;
        } else {
          throw spec_error(where + ": unknown basis '" + fields[1] + "'");
        }
        have_basis = true;
      } else if (key == "d" && fields.size() >= 2) {
        seq.d = static_cast<int>(parse_int(fields[1], where));
        have_d = true;
      } else if (key == "n_max" && fields.size() >= 2) {
        seq.n_max = static_cast<int>(parse_int(fields[1], where));
        have_n_max = true;
      } else if (key == "group" && fields.size() >= 2) {
        json j;
        try {
          j = json::parse(fields[1]);
        } catch (const nlohmann::json::exception& e) {
          throw spec_error(where + ": " + e.what());
        }
        seq.group = group_from_json(j, where + " group");
        have_group = true;
      } else if (key == "truncation_bound" && fields.size() >= 2) {
        stored_truncation = parse_double(fields[1], where);
      }
      // identity / identity_mass / DIAGNOSTIC footers are recomputed.
      continue;
    }

    if (!have_header) {
      if (line != "n,u,re,im") {
        throw spec_error(where + ": expected column header n,u,re,im");
      }
      have_header = true;
      continue;
    }

    std::vector<std::string> fields = split_csv_row(line);
    if (fields.size() != 4) {
      throw spec_error(where + ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    }
    int n = static_cast<int>(parse_int(fields[0], where));
    std::complex<double> value(parse_double(fields[2], where),
                               parse_double(fields[3], where));
    rows[n].emplace_back(fields[1], value);
  }

  if (!have_basis || !have_d || !have_n_max || !have_group) {
    throw spec_error(
        "sequence csv: missing metadata (need basis, d, n_max, group)");
  }
  if (rows.empty()) throw spec_error("sequence csv: no data rows");

  // All degrees must agree on the grid, in order.
  const auto& first = rows.begin()->second;
  std::vector<GroupElement> grid;
  grid.reserve(first.size());
  for (const auto& [text, value] : first) {
    grid.push_back(element_from_string(seq.group, text));
  }
  for (const auto& [n, degree_rows] : rows) {
    if (degree_rows.size() != first.size()) {
      throw spec_error("sequence csv: degree " + std::to_string(n) +
                       " has a different grid size");
    }
    for (std::size_t i = 0; i < degree_rows.size(); ++i) {
      if (degree_rows[i].first != first[i].first) {
        throw spec_error("sequence csv: degree " + std::to_string(n) +
                         " lists grid elements in a different order");
      }
    }
  }

  for (const auto& [n, degree_rows] : rows) {
    if (n < 0 || n > seq.n_max) {
      throw spec_error("sequence csv: degree " + std::to_string(n) +
                       " outside [0, n_max]");
    }
    NumericProfile profile = NumericProfile::zeros(seq.group, grid);
    for (std::size_t i = 0; i < degree_rows.size(); ++i) {
      profile.values[i] = degree_rows[i].second;
    }
    seq.entries.emplace(n, CoefficientFn::sampled(std::move(profile)));
  }
  finalize_sequence(seq);
  seq.truncation_bound = stored_truncation;
  return seq;
}

SchoenbergSequence load_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open file: " + path);
  return read_sequence_csv(in);
}

// ---------------------------------------------------------------------------
// Product coefficients, reports, samples

void write_product_csv(std::ostream& out,
                       const ProductSphereCoefficients& coeffs) {
  out << "# sphere-kernels product-coefficients v1\n";
  out << "# d," << (coeffs.d_infinite ? std::string("inf")
                                      : std::to_string(coeffs.d)) << "\n";
  out << "# dprime," << coeffs.dprime << "\n";
  out << "# n_max," << coeffs.n_max << "\n";
  out << "# m_max," << coeffs.m_max << "\n";
  out << "n,m,value\n";
  for (int n = 0; n <= coeffs.n_max; ++n) {
    for (int m = 0; m <= coeffs.m_max; ++m) {
      out << n << "," << m << "," << format_g17(coeffs.at(n, m)) << "\n";
    }
  }
  out << "# mass," << format_g17(coeffs.mass) << "\n";
  out << "# min_entry," << format_g17(coeffs.min_entry) << "\n";
  for (const auto& [nm, value] : coeffs.negative_entries) {
    out << "# DIAGNOSTIC:nonmember," << nm.first << "," << nm.second << ","
        << format_g17(value) << "\n";
  }
}

std::string psd_report_to_json_text(const PsdReport& report,
                                    const GroupModel& model) {
  json j;
  j["min_eig"] = report.min_eig;
  j["max_eig"] = report.max_eig;
  j["hermitian_gap"] = report.hermitian_gap;
  j["verdict"] = report.pass ? "pass" : "fail";
  if (report.witness) {
    json w;
    w["d"] = report.witness->d;
    w["seed"] = report.witness->seed;
    w["points"] = json::array();
    for (const auto& p : report.witness->points) {
      json point;
      point["xi"] = p.xi;
      point["u"] = element_to_json(model, p.u);
      w["points"].push_back(std::move(point));
    }
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j.dump(2) + "\n";
}

void write_samples_csv(std::ostream& out, const GroupModel& model,
                       const Configuration& config,
                       const Eigen::MatrixXd& samples, double jitter) {
  out << "# sphere-kernels samples v1\n";
  out << "# d," << config.d << "\n";
  out << "# group," << csv_quote(group_to_json(model).dump()) << "\n";
  out << "# seed," << config.seed << "\n";
  if (jitter < 0) {
    out << "# jitter,auto\n";
  } else {
    out << "# jitter," << format_g17(jitter) << "\n";
  }
  for (std::size_t i = 0; i < config.points.size(); ++i) {
    json xi = config.points[i].xi;
    out << "# point," << i << "," << csv_quote(xi.dump()) << ","
        << csv_quote(element_to_string(model, config.points[i].u)) << "\n";
  }
  out << "sample";
  for (Eigen::Index j = 0; j < samples.cols(); ++j) out << ",z_" << j;
  out << "\n";
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    out << s;
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      out << "," << format_g17(samples(s, j));
    }
    out << "\n";
  }
}

}  // namespace sphk
