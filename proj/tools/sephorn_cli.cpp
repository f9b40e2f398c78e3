// sephorn: command-line front end for the separability toolkit.
//
// Exit codes: 0 separable, 1 entangled, 2 inconclusive, 64 bad input,
// 70 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "sephorn/criteria.hpp"
#include "sephorn/decompose.hpp"
#include "sephorn/horn.hpp"
#include "sephorn/io.hpp"
#include "sephorn/states.hpp"

namespace fs = std::filesystem;
using namespace sephorn;

namespace {

constexpr int kExitSeparable = 0;
constexpr int kExitEntangled = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNumeric = 70;

int exit_for(criteria::Status s) {
  switch (s) {
    case criteria::Status::Separable:
      return kExitSeparable;
    case criteria::Status::Entangled:
      return kExitEntangled;
    case criteria::Status::Inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::NotAState:
    case ErrorCode::CapExceeded:
    case ErrorCode::BadCardinality:
    case ErrorCode::DimensionTooSmall:
    case ErrorCode::NotPSD:
    case ErrorCode::OutOfPositivityRange:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

struct AnalyzeArgs {
  std::vector<std::string> paths;
  std::optional<double> tol;
  int max_iter = kNormalFormMaxIter;
  std::uint64_t seed = 0;
  std::string report = "text";
  int jobs = 0;
  bool write_decomposition = true;
};

struct FileOutcome {
  std::optional<io::StateFile> state;
  std::optional<criteria::Verdict> verdict;
  std::optional<ErrorCode> error;
  std::string message;
};

int cmd_analyze(const AnalyzeArgs& args) {
  criteria::Tolerances tol = criteria::Tolerances::from_env();
  if (args.tol) tol.psd = *args.tol;
  tol.normal_form_max_iter = args.max_iter;
  tol.seed = args.seed;

  std::vector<FileOutcome> outcomes(args.paths.size());
  for (std::size_t i = 0; i < args.paths.size(); ++i) {
    try {
      outcomes[i].state = io::read_state(args.paths[i]);
    } catch (const Error& e) {
      outcomes[i].error = e.code();
      outcomes[i].message = e.what();
    }
  }
  if (args.jobs > 0) omp_set_num_threads(args.jobs);
  const auto count = static_cast<std::ptrdiff_t>(outcomes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    FileOutcome& o = outcomes[i];
    if (!o.state) continue;
    try {
      o.verdict = criteria::analyze(o.state->rho, o.state->dim_a, o.state->dim_b, tol);
    } catch (const Error& e) {
      o.error = e.code();
      o.message = e.what();
    }
  }

  int worst = kExitSeparable;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const FileOutcome& o = outcomes[i];
    int code = 0;
    if (o.error) {
      code = exit_for(*o.error);
      std::cerr << args.paths[i] << ": " << o.message << '\n';
    } else {
      const int N = o.state->dim_a;
      const int M = o.state->dim_b;
      std::cout << (args.report == "structured" ? io::structured_report(*o.verdict, args.paths[i], N, M)
                                                : io::text_report(*o.verdict, args.paths[i], N, M));
      code = exit_for(o.verdict->status);
      if (const auto* dec = o.verdict->decomposition(); dec && args.write_decomposition) {
        const fs::path out = io::decomposition_path(args.paths[i]);
        io::write_decomposition(out, *dec);
        if (args.report != "structured") std::cout << "decomposition: " << out.string() << '\n';
      }
    }
    worst = std::max(worst, code);
  }
  return worst;
}

int cmd_horn_triples(int n, int r, const std::string& out) {
  const horn::TripleSet& set = horn::triple_set(n, r);
  if (out.empty() || out == "-") {
    horn::write_triple_set(std::cout, set);
  } else {
    std::ofstream os(out);
    if (!os) throw Error(ErrorCode::ParseError, "cannot write " + out);
    horn::write_triple_set(os, set);
  }
  return 0;
}

std::string default_werner_name(int N, double phi) {
  std::ostringstream os;
  os << "werner_" << N << "_phi" << phi << ".state";
  return os.str();
}

int cmd_werner(int N, double phi, bool decompose_flag, std::uint64_t seed, std::string out) {
  const BipartiteDecomposed d = states::werner({N, phi});
  if (out.empty()) out = default_werner_name(N, phi);
  io::write_state(out, compose_state(d), N, N);
  std::cout << "state: " << out << '\n';
  const decompose::FamilyOutcome outcome = decompose::werner_decompose(N, phi, seed);
  switch (outcome.kind) {
    case decompose::FamilyOutcome::Kind::Entangled:
      std::cout << "status: Entangled (" << outcome.note << ")\n";
      return kExitEntangled;
    case decompose::FamilyOutcome::Kind::NotDecomposedHere:
      std::cout << "status: Inconclusive (" << outcome.note << ")\n";
      return kExitInconclusive;
    case decompose::FamilyOutcome::Kind::Decomposed:
      break;
  }
  const VerifyReport report = verify_decomposition(*outcome.decomposition, d);
  if (!report.valid) {
    std::cout << "status: Inconclusive (construction residual " << report.max_residual << ")\n";
    return kExitInconclusive;
  }
  std::cout << "status: Separable (" << outcome.decomposition->size() << " product terms, residual "
            << report.max_residual << ")\n";
  if (decompose_flag) {
    const fs::path dec_path = io::decomposition_path(out);
    io::write_decomposition(dec_path, *outcome.decomposition);
    std::cout << "decomposition: " << dec_path.string() << '\n';
  }
  return kExitSeparable;
}

int cmd_normal_form(const std::string& path, std::string out, int max_iter) {
  const io::StateFile sf = io::read_state(path);
  const BipartiteDecomposed d = decompose_state(sf.rho, sf.dim_a, sf.dim_b);
  const NormalFormResult nf = normal_form(d, max_iter);
  const ComplexMatrix filtered = compose_state(nf.state);
  if (out.empty()) out = path + ".normal";
  io::write_state(out, filtered, sf.dim_a, sf.dim_b);
  std::printf("converged: %s\niterations: %d\n|a|: %.3e\n|b|: %.3e\n", nf.converged ? "true" : "false",
              nf.iterations, nf.state.a.norm(), nf.state.b.norm());
  if (sf.dim_a == 2 && sf.dim_b == 2) {
    const ComplexMatrix psi = states::psi_plus();
    const double fidelity = (psi.adjoint() * filtered * psi)(0, 0).real();
    std::printf("fidelity to psi+: %.12f\n", fidelity);
  }
  std::printf("filtered state: %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separability analysis of bipartite density matrices"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Classify one or more state files");
  analyze->add_option("paths", analyze_args.paths, "State files")->required()->check(CLI::ExistingFile);
  analyze->add_option("--tol", analyze_args.tol, "PSD tolerance (overrides SEP_HORN_TOL)");
  analyze->add_option("--max-iter", analyze_args.max_iter, "Normal-form iteration cap")->check(CLI::NonNegativeNumber);
  analyze->add_option("--seed", analyze_args.seed, "Seed for the simplex search");
  analyze->add_option("--report", analyze_args.report, "Report format")
      ->check(CLI::IsMember({"text", "structured"}));
  analyze->add_option("--jobs", analyze_args.jobs, "Threads for multi-file analysis")->check(CLI::NonNegativeNumber);
  analyze->add_flag("!--no-decomposition", analyze_args.write_decomposition,
                    "Do not write decomposition files");

  int horn_n = 0;
  int horn_r = 0;
  std::string horn_out;
  auto* horn_cmd = app.add_subcommand("horn-triples", "Dump the triple set T_r^n");
  horn_cmd->add_option("n", horn_n, "Size")->required();
  horn_cmd->add_option("r", horn_r, "Subset cardinality")->required();
  horn_cmd->add_option("--out", horn_out, "Output file (default stdout)");

  int werner_n = 2;
  double werner_phi = 1.0;
  bool werner_decompose_flag = false;
  std::uint64_t werner_seed = 0;
  std::string werner_out;
  auto* werner_cmd = app.add_subcommand("werner", "Write a Werner state and classify it");
  werner_cmd->add_option("N", werner_n, "Local dimension")->required();
  werner_cmd->add_option("phi", werner_phi, "Werner parameter")->required();
  werner_cmd->add_flag("--decompose", werner_decompose_flag, "Write the decomposition file");
  werner_cmd->add_option("--seed", werner_seed, "Seed for the simplex search");
  werner_cmd->add_option("--out", werner_out, "State file path");

  std::string nf_path;
  std::string nf_out;
  int nf_max_iter = kNormalFormMaxIter;
  auto* nf_cmd = app.add_subcommand("normal-form", "Filter a state to its local normal form");
  nf_cmd->add_option("path", nf_path, "State file")->required()->check(CLI::ExistingFile);
  nf_cmd->add_option("--out", nf_out, "Filtered state path");
  nf_cmd->add_option("--max-iter", nf_max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_args);
    if (*horn_cmd) return cmd_horn_triples(horn_n, horn_r, horn_out);
    if (*werner_cmd) return cmd_werner(werner_n, werner_phi, werner_decompose_flag, werner_seed, werner_out);
    if (*nf_cmd) return cmd_normal_form(nf_path, nf_out, nf_max_iter);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
