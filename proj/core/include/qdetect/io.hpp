#pragma once

#include "qdetect/certify.hpp"
#include "qdetect/ensemble.hpp"
#include "qdetect/recovery.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdetect {

/// Parse an ensemble document: {"dim": n, "states": [{"prior": p,
/// "vector": [[re,im],...]} | {"prior": p, "matrix": [[[re,im],...],...]}]}.
/// Complex scalars are [re, im] pairs; matrix rows are listed top to
/// bottom. Vector states are expanded to rank-one density operators.
Ensemble load_ensemble(std::istream& in, const Tolerances& tol = {});
Ensemble load_ensemble_file(const std::string& path, const Tolerances& tol = {});

void save_ensemble(std::ostream& out, const Ensemble& e);

/// Measurement document {"operators": [matrix, ...]} with optional
/// {"vectors": [vector, ...]}.
Measurement load_measurement(std::istream& in);
Measurement load_measurement_file(const std::string& path);
void save_measurement(std::ostream& out, const Measurement& mmt);

/// A Hermitian matrix from a document holding either a bare matrix or
/// an object with an "X_hat" key (a solve report qualifies).
Matrix load_dual_matrix_file(const std::string& path);

/// Plot-ready 2-D coordinates for real qubit ensembles: each entry is
/// an (x, y) pair on the unit circle.
struct PlotData {
  std::vector<RealVector> states;
  std::vector<RealVector> optimal;
  std::vector<RealVector> lsm;
};

/// Everything a solve or verify reports.
struct ReportBundle {
  OptimalityReport report;
  std::optional<Matrix> x;  // absent when verifying without a dual matrix
  Measurement measurement;
  std::optional<double> lsm_p_correct;
  std::optional<std::vector<Vector>> lsm_vectors;
  std::optional<double> oracle_p_correct;  // Helstrom value when m = 2
  std::optional<PlotData> plot;
  bool has_verdict = true;  // false when only feasibility was checked
};

/// Machine-readable report. Numbers are printed with 17 significant
/// digits so equal inputs produce byte-identical documents.
std::string report_to_json(const ReportBundle& b);

void print_report_text(std::ostream& out, const ReportBundle& b);

}  // namespace qdetect
