#pragma once

#include <string>

#include "cmatrix.hpp"
#include "ensembles.hpp"
#include "harness.hpp"

namespace orad {

// Matrix file formats, shared repo-wide.
//   JSON: {"n": n, "data": [[re, im], ...]} with n^2 row-major entries.
//   Text: first line n, then n^2 lines "re im".
// Both round-trip doubles bit-exactly (17 significant decimal digits).

std::string matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const std::string& text);

std::string matrix_to_text(const CMatrix& m);
CMatrix matrix_from_text(const std::string& text);

/// Detects the format from the leading non-space byte ('{' = JSON).
CMatrix load_matrix_file(const std::string& path);
void save_matrix_json(const CMatrix& m, const std::string& path);
void save_matrix_text(const CMatrix& m, const std::string& path);

// Ensemble spec JSON: {"family": str, "n": int, "count": int, "seed": int,
// "params": {...}} (params carries the scaled-family base and constant).
std::string ensemble_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_from_json(const std::string& text);

std::string suite_config_to_json(const SuiteConfig& config);
SuiteConfig suite_config_from_json(const std::string& text);
SuiteConfig load_suite_config(const std::string& path);

std::string report_to_json(const SuiteReport& report);
SuiteReport report_from_json(const std::string& text);
std::string report_to_csv(const SuiteReport& report);

/// Strips the execution block (wall time, worker count) for byte comparisons.
std::string report_json_without_execution(const std::string& report_json);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace orad
