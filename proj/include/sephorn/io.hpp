#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sephorn/criteria.hpp"

namespace sephorn::io {

inline constexpr std::string_view kStateFormat = "sephorn-state";
inline constexpr std::string_view kDecompositionFormat = "sephorn-decomposition";
inline constexpr std::string_view kReportSchema = "sephorn-report";
inline constexpr int kFormatVersion = 1;

struct StateFile {
  int dim_a = 0;
  int dim_b = 0;
  ComplexMatrix rho;
};

/// {"format": "sephorn-state", "version": 1, "dims": [N, M],
///  "entries": [[re, im], ...]} with N*M*N*M row-major entries. Structural
/// problems throw ParseError; a non-Hermitian or non-unit-trace matrix
/// throws NotAState.
StateFile parse_state(std::string_view text);
StateFile read_state(const std::filesystem::path& path);
std::string emit_state(const ComplexMatrix& rho, int N, int M);
void write_state(const std::filesystem::path& path, const ComplexMatrix& rho, int N, int M);

/// Every number printed with 17 significant digits so that emit(parse(x))
/// reproduces the doubles bit for bit.
SeparableDecomposition parse_decomposition(std::string_view text);
SeparableDecomposition read_decomposition(const std::filesystem::path& path);
std::string emit_decomposition(const SeparableDecomposition& dec);
void write_decomposition(const std::filesystem::path& path, const SeparableDecomposition& dec);

/// Where analyze puts the decomposition of `state_path`.
std::filesystem::path decomposition_path(const std::filesystem::path& state_path);

std::string text_report(const criteria::Verdict& v, std::string_view label, int N, int M);
std::string structured_report(const criteria::Verdict& v, std::string_view label, int N, int M);

}  // namespace sephorn::io
