#include "cli_commands.hpp"

#include "qdetect/generate.hpp"
#include "qdetect/io.hpp"
#include "qdetect/lsm.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace qdetect::cli {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void emit_error(std::ostream& err, const std::string& format,
                const char* type, const std::string& message) {
  if (format == "json")
    err << "{\"error\": {\"type\": \"" << type << "\", \"message\": \""
        << escape(message) << "\"}}\n";
  else
    err << "error (" << type << "): " << message << "\n";
}

void check_config(const RunConfig& cfg) {
  if (cfg.gap_tol <= 0.0 || cfg.rank_tol <= 0.0 || cfg.check_tol <= 0.0)
    throw ValidationError("tolerances must be positive");
  if (cfg.tolerances.herm_tol <= 0.0 || cfg.tolerances.psd_tol <= 0.0 ||
      cfg.tolerances.trace_tol <= 0.0 || cfg.tolerances.prior_tol <= 0.0)
    throw ValidationError("tolerances must be positive");
  if (cfg.format != "text" && cfg.format != "json")
    throw ValidationError("format must be text or json");
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
  PipelineOptions p;
  p.tolerances = cfg.tolerances;
  p.solver.gap_tol = cfg.gap_tol;
  p.solver.verbosity = cfg.verbosity;
  p.solver.log = cfg.log;
  p.recovery.rank_tol = cfg.rank_tol;
  p.check_tol = cfg.check_tol;
  return p;
}

void write_output(const RunConfig& cfg, std::ostream& fallback,
                  const std::string& payload) {
  if (cfg.output.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw ValidationError("cannot open output file " + cfg.output);
  file << payload;
}

void write_report(const RunConfig& cfg, std::ostream& fallback,
                  const ReportBundle& b) {
  if (cfg.format == "json") {
    write_output(cfg, fallback, report_to_json(b));
  } else {
    std::ostringstream text;
    print_report_text(text, b);
    write_output(cfg, fallback, text.str());
  }
}

// Rotate the global phase so the largest component is real positive;
// fails when the vector is not a phase away from real.
std::optional<RealVector> phase_fixed_real(const Vector& v) {
  Index lead = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(lead))) lead = i;
  if (std::abs(v(lead)) == 0.0) return RealVector(RealVector::Zero(v.size()));
  const Vector rotated = v * std::polar(1.0, -std::arg(v(lead)));
  if (rotated.imag().cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
  return RealVector(rotated.real());
}

std::optional<PlotData> make_plot(Index dim,
                                  const std::vector<Vector>& states,
                                  const std::optional<std::vector<Vector>>& optimal,
                                  const std::vector<Vector>& lsm) {
  if (dim != 2 || !optimal) return std::nullopt;
  PlotData plot;
  const auto convert = [](const std::vector<Vector>& in,
                          std::vector<RealVector>& out) {
    for (const Vector& v : in) {
      const auto fixed = phase_fixed_real(v);
      if (!fixed) return false;
      out.push_back(*fixed);
    }
    return true;
  };
  if (!convert(states, plot.states) || !convert(*optimal, plot.optimal) ||
      !convert(lsm, plot.lsm))
    return std::nullopt;
  return plot;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Ensemble e = load_ensemble_file(cfg.input, cfg.tolerances);
  const SolveOutcome res = solve_ensemble(e, pipeline_options(cfg));

  ReportBundle b;
  b.report = res.report;
  b.x = res.x;
  b.measurement = res.measurement;
  if (e.size() == 2) b.oracle_p_correct = helstrom_binary_pd(e);
  write_report(cfg, out, b);
  return b.report.optimal ? 0 : 2;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Ensemble e = load_ensemble_file(cfg.input, cfg.tolerances);
  Measurement mmt = load_measurement_file(cfg.measurement_path);

  ReportBundle b;
  if (!cfg.dual_path.empty()) {
    Matrix x = load_dual_matrix_file(cfg.dual_path);
    b.report = check_optimality(e, mmt, x, cfg.check_tol);
    b.x = std::move(x);
    b.measurement = std::move(mmt);
    write_report(cfg, out, b);
    return b.report.optimal ? 0 : 2;
  }
  b.report = check_feasibility(e, mmt, cfg.check_tol);
  b.measurement = std::move(mmt);
  b.has_verdict = false;
  write_report(cfg, out, b);
  return b.report.measurement_psd.passed && b.report.resolution.passed ? 0
                                                                       : 2;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const Ensemble e = load_ensemble_file(cfg.input, cfg.tolerances);

  const auto [reduced, embedding] = reduce_to_span(e, cfg.rank_tol);
  const PureEnsembleView view = pure_view(reduced, cfg.rank_tol);
  const std::vector<Vector> chi = lsm_vectors(view);
  double lsm_pd = 0.0;
  std::vector<Vector> chi_full, phi_full;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    lsm_pd += view.priors[i] * std::norm(chi[i].dot(view.phi[i]));
    chi_full.push_back(embedding.embed(chi[i]));
    phi_full.push_back(embedding.embed(view.phi[i]));
  }

  const SolveOutcome res = solve_ensemble(e, pipeline_options(cfg));

  ReportBundle b;
  b.report = res.report;
  b.x = res.x;
  b.measurement = res.measurement;
  b.lsm_p_correct = lsm_pd;
  b.lsm_vectors = chi_full;
  if (e.size() == 2) b.oracle_p_correct = helstrom_binary_pd(e);
  b.plot = make_plot(e.dim(), phi_full, res.measurement.vectors, chi_full);
  write_report(cfg, out, b);
  return b.report.optimal ? 0 : 2;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  StateKind kind;
  if (cfg.kind == "pure") {
    kind = StateKind::pure;
  } else if (cfg.kind == "mixed") {
    kind = StateKind::mixed;
  } else {
    throw ValidationError("kind must be pure or mixed");
  }
  if (cfg.dim < 1 || cfg.num_states < 1)
    throw ValidationError("generate needs dim >= 1 and states >= 1");

  const Ensemble e = generate_ensemble(
      kind, cfg.dim, static_cast<std::size_t>(cfg.num_states), cfg.seed);
  std::ostringstream doc;
  save_ensemble(doc, e);
  write_output(cfg, out, doc.str());
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_config(cfg);
    switch (cfg.command) {
      case Command::solve: return cmd_solve(cfg, out);
      case Command::verify: return cmd_verify(cfg, out);
      case Command::compare: return cmd_compare(cfg, out);
      case Command::generate: return cmd_generate(cfg, out);
    }
    return 4;
  } catch (const ParseError& ex) {
    emit_error(err, cfg.format, "parse", ex.what());
    return 3;
  } catch (const ValidationError& ex) {
    emit_error(err, cfg.format, "validation", ex.what());
    return 3;
  } catch (const SolverError& ex) {
    emit_error(err, cfg.format, "solver", ex.what());
    return 4;
  } catch (const RecoveryError& ex) {
    emit_error(err, cfg.format, "recovery", ex.what());
    return 4;
  } catch (const std::exception& ex) {
    emit_error(err, cfg.format, "internal", ex.what());
    return 4;
  }
}

}  // namespace qdetect::cli
