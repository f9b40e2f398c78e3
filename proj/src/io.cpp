#include "sephorn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sephorn::io {
namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed document: ") + e.what());
  }
}

void check_header(const json& doc, std::string_view format) {
  if (!doc.is_object()) parse_fail("document must be an object");
  if (!doc.contains("format") || doc["format"] != format) parse_fail("format must be \"" + std::string(format) + "\"");
  if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"] != kFormatVersion) {
    parse_fail("unsupported version");
  }
}

std::pair<int, int> read_dims(const json& doc) {
  const json* dims = doc.contains("dims") ? &doc["dims"] : nullptr;
  if (!dims || !dims->is_array() || dims->size() != 2 || !(*dims)[0].is_number_integer() ||
      !(*dims)[1].is_number_integer()) {
    parse_fail("dims must be [N, M]");
  }
  const int N = (*dims)[0];
  const int M = (*dims)[1];
  if (N < 1 || M < 1 || N > 64 || M > 64) parse_fail("dims out of range");
  return {N, M};
}

double number(const json& v, const char* what) {
  if (!v.is_number()) parse_fail(std::string(what) + " must be numeric");
  const double x = v.get<double>();
  if (!std::isfinite(x)) parse_fail(std::string(what) + " must be finite");
  return x;
}

RealVector read_vector(const json& v, int length, const char* what) {
  if (!v.is_array() || static_cast<int>(v.size()) != length) {
    parse_fail(std::string(what) + " must have " + std::to_string(length) + " components");
  }
  RealVector out(length);
  for (int i = 0; i < length; ++i) out[i] = number(v[i], what);
  return out;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void put_vector(std::ostringstream& os, const RealVector& v) {
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << g17(v[i]);
  os << ']';
}

json criterion_json(const criteria::CriterionResult& c) {
  return {{"name", c.name},     {"passed", c.passed},     {"necessary", c.necessary},
          {"value", c.value},   {"bound", c.bound},       {"margin", c.margin},
          {"detail", c.detail}};
}

}  // namespace

StateFile parse_state(std::string_view text) {
  const json doc = parse_json(text);
  check_header(doc, kStateFormat);
  const auto [N, M] = read_dims(doc);
  const int dim = N * M;
  if (!doc.contains("entries") || !doc["entries"].is_array() ||
      doc["entries"].size() != static_cast<std::size_t>(dim) * dim) {
    parse_fail("entries must hold (N M)^2 [re, im] pairs");
  }
  StateFile sf;
  sf.dim_a = N;
  sf.dim_b = M;
  sf.rho.resize(dim, dim);
  const json& entries = doc["entries"];
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const json& e = entries[static_cast<std::size_t>(i) * dim + j];
      if (!e.is_array() || e.size() != 2) parse_fail("each entry must be [re, im]");
      sf.rho(i, j) = Complex(number(e[0], "entry"), number(e[1], "entry"));
    }
  }
  validate_state(sf.rho);
  return sf;
}

StateFile read_state(const std::filesystem::path& path) { return parse_state(slurp(path)); }

std::string emit_state(const ComplexMatrix& rho, int N, int M) {
  const int dim = N * M;
  if (rho.rows() != dim || rho.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "matrix is not (NM) x (NM)");
  std::ostringstream os;
  os << "{\n  \"format\": \"" << kStateFormat << "\",\n  \"version\": " << kFormatVersion << ",\n  \"dims\": [" << N
     << ", " << M << "],\n  \"entries\": [";
  for (int i = 0; i < dim; ++i) {
    os << "\n    ";
    for (int j = 0; j < dim; ++j) {
      os << '[' << g17(rho(i, j).real()) << ", " << g17(rho(i, j).imag()) << ']';
      if (i + 1 < dim || j + 1 < dim) os << (j + 1 < dim ? ", " : ",");
    }
  }
  os << "\n  ]\n}\n";
  return os.str();
}

void write_state(const std::filesystem::path& path, const ComplexMatrix& rho, int N, int M) {
  spill(path, emit_state(rho, N, M));
}

SeparableDecomposition parse_decomposition(std::string_view text) {
  const json doc = parse_json(text);
  check_header(doc, kDecompositionFormat);
  const auto [N, M] = read_dims(doc);
  if (!doc.contains("entries") || !doc["entries"].is_array() || doc["entries"].empty()) {
    parse_fail("entries must be a non-empty array");
  }
  SeparableDecomposition dec;
  dec.dim_a = N;
  dec.dim_b = M;
  for (const json& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("p") || !e.contains("r") || !e.contains("s")) {
      parse_fail("each entry needs p, r and s");
    }
    dec.entries.push_back({number(e["p"], "p"), BlochVector(N, read_vector(e["r"], N * N - 1, "r")),
                           BlochVector(M, read_vector(e["s"], M * M - 1, "s"))});
  }
  return dec;
}

SeparableDecomposition read_decomposition(const std::filesystem::path& path) {
  return parse_decomposition(slurp(path));
}

std::string emit_decomposition(const SeparableDecomposition& dec) {
  std::ostringstream os;
  os << "{\n  \"format\": \"" << kDecompositionFormat << "\",\n  \"version\": " << kFormatVersion
     << ",\n  \"dims\": [" << dec.dim_a << ", " << dec.dim_b << "],\n  \"entries\": [";
  for (std::size_t k = 0; k < dec.entries.size(); ++k) {
    const ProductTerm& e = dec.entries[k];
    os << (k ? "," : "") << "\n    {\"p\": " << g17(e.p) << ", \"r\": ";
    put_vector(os, e.r.components);
    os << ", \"s\": ";
    put_vector(os, e.s.components);
    os << '}';
  }
  os << "\n  ]\n}\n";
  return os.str();
}

void write_decomposition(const std::filesystem::path& path, const SeparableDecomposition& dec) {
  spill(path, emit_decomposition(dec));
}

std::filesystem::path decomposition_path(const std::filesystem::path& state_path) {
  std::filesystem::path out = state_path;
  out += ".decomposition";
  return out;
}

std::string text_report(const criteria::Verdict& v, std::string_view label, int N, int M) {
  std::ostringstream os;
  os << "state: " << label << " (" << N << "x" << M << ")\n";
  os << "status: " << criteria::to_string(v.status) << '\n';
  os << "normal form: " << (v.normal_form_converged ? "converged" : "not converged") << " after "
     << v.normal_form_iterations << " iterations\n";
  for (const auto& c : v.trail) {
    os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << "  value " << c.value << "  bound " << c.bound
       << "  margin " << c.margin;
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  if (const auto* c = v.violated()) {
    os << "evidence: " << c->name << " violated, margin " << c->margin << '\n';
  } else if (const auto* d = v.decomposition()) {
    os << "evidence: decomposition with " << d->size() << " product terms\n";
  } else {
    os << "evidence: no decisive criterion\n";
  }
  return os.str();
}

std::string structured_report(const criteria::Verdict& v, std::string_view label, int N, int M) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["version"] = kFormatVersion;
  doc["input"] = label;
  doc["dims"] = {N, M};
  doc["status"] = criteria::to_string(v.status);
  doc["normal_form"] = {{"converged", v.normal_form_converged}, {"iterations", v.normal_form_iterations}};
  doc["criteria"] = json::array();
  for (const auto& c : v.trail) doc["criteria"].push_back(criterion_json(c));
  if (const auto* c = v.violated()) {
    doc["evidence"] = {{"kind", "violated"}, {"criterion", criterion_json(*c)}};
  } else if (const auto* d = v.decomposition()) {
    doc["evidence"] = {{"kind", "decomposition"}, {"components", d->size()}};
  } else {
    doc["evidence"] = {{"kind", "criteria"}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace sephorn::io
