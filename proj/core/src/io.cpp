#include "qdetect/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace qdetect {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex entries must be [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector parse_vector(const json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("a vector must be a nonempty array of complex entries");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = parse_complex(j[i]);
  return v;
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("a matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ParseError("matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError("matrix rows must all have the same length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          parse_complex(j[r][c]);
  }
  return m;
}

json parse_document(std::istream& in, const char* what) {
  try {
    return json::parse(in);
  } catch (const json::exception& err) {
    throw ParseError(std::string(what) + ": " + err.what());
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

// Formatting. Seventeen significant digits round-trip any double, so a
// report is byte-identical whenever the computed values are.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void app_complex(std::string& out, const Complex& z) {
  out += '[';
  out += fmt(z.real());
  out += ',';
  out += fmt(z.imag());
  out += ']';
}

void app_vector(std::string& out, const Vector& v) {
  out += '[';
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    app_complex(out, v(i));
  }
  out += ']';
}

void app_matrix(std::string& out, const Matrix& m) {
  out += '[';
  for (Index r = 0; r < m.rows(); ++r) {
    if (r > 0) out += ',';
    out += '[';
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      app_complex(out, m(r, c));
    }
    out += ']';
  }
  out += ']';
}

void app_coords(std::string& out, const char* name,
                const std::vector<RealVector>& points) {
  out += "    \"";
  out += name;
  out += "\": [";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out += ',';
    out += '[';
    for (Index j = 0; j < points[i].size(); ++j) {
      if (j > 0) out += ',';
      out += fmt(points[i](j));
    }
    out += ']';
  }
  out += ']';
}

void app_condition(std::string& out, const char* name,
                   const ConditionCheck& check) {
  out += "    \"";
  out += name;
  out += "\": {\"passed\": ";
  out += check.passed ? "true" : "false";
  out += ", \"magnitude\": ";
  out += fmt(check.magnitude);
  out += "}";
}

void app_measurement(std::string& out, const Measurement& mmt) {
  out += "{\n    \"operators\": [\n";
  for (std::size_t i = 0; i < mmt.operators.size(); ++i) {
    out += "      ";
    app_matrix(out, mmt.operators[i]);
    out += i + 1 < mmt.operators.size() ? ",\n" : "\n";
  }
  out += "    ]";
  if (mmt.vectors) {
    out += ",\n    \"vectors\": [\n";
    for (std::size_t i = 0; i < mmt.vectors->size(); ++i) {
      out += "      ";
      app_vector(out, (*mmt.vectors)[i]);
      out += i + 1 < mmt.vectors->size() ? ",\n" : "\n";
    }
    out += "    ]";
  }
  out += "\n  }";
}

void print_matrix(std::ostream& out, const Matrix& m, const char* indent) {
  char buf[64];
  for (Index r = 0; r < m.rows(); ++r) {
    out << indent << "[";
    for (Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), " %9.6f%+9.6fi", m(r, c).real(),
                    m(r, c).imag());
      out << buf;
    }
    out << " ]\n";
  }
}

void print_condition(std::ostream& out, const char* name,
                     const ConditionCheck& check) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "  %-22s%s  %.3e\n", name,
                check.passed ? "pass" : "FAIL", check.magnitude);
  out << buf;
}

}  // namespace

Ensemble load_ensemble(std::istream& in, const Tolerances& tol) {
  const json doc = parse_document(in, "ensemble document");
  if (!doc.is_object())
    throw ParseError("ensemble document must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    throw ParseError("ensemble document needs an integer \"dim\"");
  const Index dim = doc["dim"].get<Index>();
  if (dim < 1) throw ParseError("\"dim\" must be at least 1");
  if (!doc.contains("states") || !doc["states"].is_array() ||
      doc["states"].empty())
    throw ParseError("ensemble document needs a nonempty \"states\" array");

  std::vector<WeightedState> states;
  states.reserve(doc["states"].size());
  for (const json& s : doc["states"]) {
    if (!s.is_object())
      throw ParseError("each state must be an object");
    if (!s.contains("prior") || !s["prior"].is_number())
      throw ParseError("each state needs a numeric \"prior\"");
    const bool has_vector = s.contains("vector");
    const bool has_matrix = s.contains("matrix");
    if (has_vector == has_matrix)
      throw ParseError(
          "each state needs exactly one of \"vector\" or \"matrix\"");

    WeightedState ws;
    ws.prior = s["prior"].get<double>();
    if (has_vector) {
      const Vector phi = parse_vector(s["vector"]);
      ws.rho = phi * phi.adjoint();
      ws.pure = phi;
    } else {
      ws.rho = parse_matrix(s["matrix"]);
    }
    states.push_back(std::move(ws));
  }
  return Ensemble::create(dim, std::move(states), tol);
}

Ensemble load_ensemble_file(const std::string& path, const Tolerances& tol) {
  auto in = open_input(path);
  return load_ensemble(in, tol);
}

void save_ensemble(std::ostream& out, const Ensemble& e) {
  std::string doc = "{\n  \"dim\": " + std::to_string(e.dim()) +
                    ",\n  \"states\": [\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    doc += "    {\"prior\": ";
    doc += fmt(e.prior(i));
    if (e.pure(i)) {
      doc += ", \"vector\": ";
      app_vector(doc, *e.pure(i));
    } else {
      doc += ", \"matrix\": ";
      app_matrix(doc, e.rho(i));
    }
    doc += i + 1 < e.size() ? "},\n" : "}\n";
  }
  doc += "  ]\n}\n";
  out << doc;
}

Measurement load_measurement(std::istream& in) {
  const json doc = parse_document(in, "measurement document");
  if (!doc.is_object() || !doc.contains("operators") ||
      !doc["operators"].is_array() || doc["operators"].empty())
    throw ParseError(
        "measurement document needs a nonempty \"operators\" array");

  Measurement mmt;
  for (const json& op : doc["operators"]) {
    Matrix m = parse_matrix(op);
    if (m.rows() != m.cols())
      throw ParseError("measurement operators must be square");
    if (!mmt.operators.empty() && m.rows() != mmt.operators.front().rows())
      throw ParseError("measurement operators must share one dimension");
    mmt.operators.push_back(std::move(m));
  }
  if (doc.contains("vectors")) {
    if (!doc["vectors"].is_array() ||
        doc["vectors"].size() != mmt.operators.size())
      throw ParseError(
          "\"vectors\" must list one vector per measurement operator");
    std::vector<Vector> vectors;
    for (const json& v : doc["vectors"]) {
      Vector phi = parse_vector(v);
      if (phi.size() != mmt.operators.front().rows())
        throw ParseError("measurement vector dimension mismatch");
      vectors.push_back(std::move(phi));
    }
    mmt.vectors = std::move(vectors);
  }
  return mmt;
}

Measurement load_measurement_file(const std::string& path) {
  auto in = open_input(path);
  return load_measurement(in);
}

void save_measurement(std::ostream& out, const Measurement& mmt) {
  std::string doc;
  app_measurement(doc, mmt);
  doc += "\n";
  out << doc;
}

Matrix load_dual_matrix_file(const std::string& path) {
  auto in = open_input(path);
  const json doc = parse_document(in, "dual matrix document");
  const json* payload = nullptr;
  if (doc.is_array()) {
    payload = &doc;
  } else if (doc.is_object() && doc.contains("X_hat")) {
    payload = &doc["X_hat"];
  } else {
    throw ParseError(
        "dual matrix document must be a matrix or contain \"X_hat\"");
  }
  Matrix x = parse_matrix(*payload);
  if (x.rows() != x.cols())
    throw ParseError("the dual matrix must be square");
  return x;
}

std::string report_to_json(const ReportBundle& b) {
  const OptimalityReport& r = b.report;
  std::string out = "{\n";
  out += "  \"p_correct\": " + fmt(r.p_correct);
  if (b.has_verdict) {
    out += ",\n  \"dual_objective\": " + fmt(r.dual_objective);
    out += ",\n  \"gap\": " + fmt(r.gap);
  }
  out += ",\n  \"conditions\": {\n";
  app_condition(out, "measurement_psd", r.measurement_psd);
  out += ",\n";
  app_condition(out, "resolution", r.resolution);
  if (b.has_verdict) {
    out += ",\n";
    app_condition(out, "dual_feasible", r.dual_feasible);
    out += ",\n";
    app_condition(out, "slackness", r.slackness);
    out += ",\n";
    app_condition(out, "lagrangian_hermitian", r.lagrangian_hermitian);
    out += ",\n";
    app_condition(out, "dual_dominance", r.dual_dominance);
    out += ",\n";
    app_condition(out, "gap", r.gap_check);
  }
  out += ",\n    \"check_tol\": " + fmt(r.tol);
  if (b.has_verdict)
    out += std::string(",\n    \"optimal\": ") +
           (r.optimal ? "true" : "false");
  out += "\n  }";
  if (b.x) {
    out += ",\n  \"X_hat\": ";
    app_matrix(out, *b.x);
  }
  out += ",\n  \"measurement\": ";
  app_measurement(out, b.measurement);
  if (b.lsm_p_correct) {
    out += ",\n  \"lsm\": {\n    \"p_correct\": " + fmt(*b.lsm_p_correct);
    if (b.lsm_vectors) {
      out += ",\n    \"vectors\": [\n";
      for (std::size_t i = 0; i < b.lsm_vectors->size(); ++i) {
        out += "      ";
        app_vector(out, (*b.lsm_vectors)[i]);
        out += i + 1 < b.lsm_vectors->size() ? ",\n" : "\n";
      }
      out += "    ]";
    }
    out += "\n  }";
  }
  if (b.plot) {
    out += ",\n  \"plot\": {\n";
    app_coords(out, "states", b.plot->states);
    out += ",\n";
    app_coords(out, "optimal", b.plot->optimal);
    out += ",\n";
    app_coords(out, "lsm", b.plot->lsm);
    out += "\n  }";
  }
  if (b.oracle_p_correct)
    out += ",\n  \"oracle\": {\"p_correct\": " + fmt(*b.oracle_p_correct) +
           "}";
  out += "\n}\n";
  return out;
}

void print_report_text(std::ostream& out, const ReportBundle& b) {
  const OptimalityReport& r = b.report;
  out << "p_correct       " << fmt(r.p_correct) << "\n";
  if (b.has_verdict) {
    out << "dual_objective  " << fmt(r.dual_objective) << "\n";
    out << "gap             " << fmt(r.gap) << "\n";
  }
  out << "conditions (tol = " << fmt(r.tol) << ")\n";
  print_condition(out, "measurement_psd", r.measurement_psd);
  print_condition(out, "resolution", r.resolution);
  if (b.has_verdict) {
    print_condition(out, "dual_feasible", r.dual_feasible);
    print_condition(out, "slackness", r.slackness);
    print_condition(out, "lagrangian_hermitian", r.lagrangian_hermitian);
    print_condition(out, "dual_dominance", r.dual_dominance);
    print_condition(out, "gap", r.gap_check);
    out << "verdict: " << (r.optimal ? "optimal" : "not optimal") << "\n";
  } else {
    out << "verdict: none (feasibility only, no dual matrix)\n";
  }
  if (b.x) {
    out << "X_hat:\n";
    print_matrix(out, *b.x, "  ");
  }
  for (std::size_t i = 0; i < b.measurement.operators.size(); ++i) {
    out << "measurement operator " << i + 1 << ":\n";
    print_matrix(out, b.measurement.operators[i], "  ");
  }
  if (b.lsm_p_correct)
    out << "lsm p_correct   " << fmt(*b.lsm_p_correct) << "\n";
  if (b.plot) {
    const auto block = [&out](const char* name,
                              const std::vector<RealVector>& points) {
      out << "plot " << name << ":";
      char buf[64];
      for (const RealVector& p : points) {
        std::snprintf(buf, sizeof(buf), " (%.6f, %.6f)", p(0), p(1));
        out << buf;
      }
      out << "\n";
    };
    block("states", b.plot->states);
    block("optimal", b.plot->optimal);
    block("lsm", b.plot->lsm);
  }
  if (b.oracle_p_correct)
    out << "oracle p_correct " << fmt(*b.oracle_p_correct) << "\n";
}

}  // namespace qdetect
