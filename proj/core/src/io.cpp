#include "cdboost/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cdboost/errors.hpp"

namespace cdboost::io {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field) {
  const std::string f = trim(field);
  try {
    std::size_t used = 0;
    const double v = std::stod(f, &used);
    if (used != f.size()) throw ValidationError("bad number '" + f + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("bad number '" + f + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

ordered_json vector_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

ordered_json rows_json(const RowSet& rows) {
  ordered_json arr = ordered_json::array();
  for (std::size_t r : rows) arr.push_back(r);
  return arr;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string instance_to_json(const BoostInstance& inst,
                             const std::map<std::string, double>& reference,
                             const std::string& provenance) {
  const Matrix& a = inst.matrix();
  std::ostringstream out;
  out << "{\"m\":" << inst.m() << ",\"n\":" << inst.n() << ",\"entries\":[";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out << (i ? ",\n  [" : "\n  [");
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out << (j ? "," : "") << format_double(a(i, j));
    }
    out << "]";
  }
  out << "]";
  if (!reference.empty()) {
    out << ",\n\"reference_objective\":{";
    bool first = true;
    for (const auto& [name, value] : reference) {
      out << (first ? "" : ",") << "\"" << name << "\":" << format_double(value);
      first = false;
    }
    out << "}";
  }
  if (!provenance.empty()) out << ",\n\"provenance\":\"" << provenance << "\"";
  out << "}\n";
  return out.str();
}

InstanceFile instance_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("instance json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw ValidationError("instance json: missing \"entries\" array");
  }
  const auto& rows = doc["entries"];
  const auto m = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index n = m > 0 && rows[0].is_array() ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Matrix a(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ValidationError("instance json: row " + std::to_string(i) + " has wrong length");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw ValidationError("instance json: non-numeric entry");
      a(i, j) = v.get<double>();
    }
  }
  if (doc.contains("m") && doc["m"].get<long>() != m) {
    throw ValidationError("instance json: \"m\" does not match the entries");
  }
  if (doc.contains("n") && doc["n"].get<long>() != n) {
    throw ValidationError("instance json: \"n\" does not match the entries");
  }
  InstanceFile file{BoostInstance(std::move(a)), {}, ""};
  if (doc.contains("reference_objective")) {
    for (const auto& [name, value] : doc["reference_objective"].items()) {
      file.reference_objective[name] = value.get<double>();
    }
  }
  if (doc.contains("provenance")) file.provenance = doc["provenance"].get<std::string>();
  return file;
}

std::string instance_to_csv(const BoostInstance& inst) {
  const Matrix& a = inst.matrix();
  std::ostringstream out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out << (j ? "," : "") << format_double(a(i, j));
    }
    out << "\n";
  }
  return out.str();
}

BoostInstance instance_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& field : split(line, ',')) row.push_back(parse_double(field));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError("instance csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("instance csv: no rows");
  Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return BoostInstance(std::move(a));
}

InstanceFile parse_instance(const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') return instance_from_json(t);
  return InstanceFile{instance_from_csv(text), {}, ""};
}

InstanceFile load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  out << "t,objective,grad_inf,j,sign,alpha\n";
  for (const auto& r : trace.records) {
    out << r.t << ',' << format_double(r.objective) << ',' << format_double(r.grad_inf) << ','
        << r.j << ',' << r.sign << ',' << format_double(r.alpha) << '\n';
  }
  return out.str();
}

std::vector<TraceRow> trace_from_csv(const std::string& text) {
  std::vector<TraceRow> rows;
  std::stringstream ss(text);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (trim(line).empty()) continue;
    if (header) {
      if (trim(line) != "t,objective,grad_inf,j,sign,alpha") {
        throw ValidationError("trace csv: unexpected header");
      }
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 6) throw ValidationError("trace csv: expected 6 fields");
    rows.push_back(TraceRow{static_cast<long>(parse_double(f[0])), parse_double(f[1]),
                            parse_double(f[2]), static_cast<long>(parse_double(f[3])),
                            static_cast<int>(parse_double(f[4])), parse_double(f[5])});
  }
  return rows;
}

Vector replay_lambda(const std::vector<TraceRow>& rows, long n) {
  Vector lambda = Vector::Zero(n);
  for (const auto& r : rows) {
    if (r.j < 0 || r.j >= n) throw ValidationError("trace csv: coordinate out of range");
    lambda[r.j] += r.alpha * r.sign;
  }
  return lambda;
}

std::string report_to_json(const StructureReport& report, const BoostInstance& inst) {
  ordered_json doc;
  doc["m"] = inst.m();
  doc["n"] = inst.n();
  doc["regime"] = to_string(report.regime);
  doc["hard_core"] = rows_json(report.hard_core);
  doc["rows_a0"] = rows_json(report.rows_zero);
  doc["rows_aplus"] = rows_json(report.rows_plus);
  doc["gamma_classical"] = report.gamma_classical;
  doc["witness_primal"] = report.witness_primal ? vector_json(*report.witness_primal) : ordered_json(nullptr);
  doc["witness_dual"] = report.witness_dual ? vector_json(*report.witness_dual) : ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

std::string certificate_to_json(const std::optional<DualCertificate>& cert, double primal_value) {
  ordered_json doc;
  doc["available"] = cert.has_value();
  doc["primal_value"] = primal_value;
  if (cert) {
    doc["psi"] = vector_json(cert->psi);
    doc["dual_value"] = cert->dual_value;
    doc["gap_bound"] = cert->gap_bound;
    doc["kernel_residual"] = cert->kernel_residual;
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw Error("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

}  // namespace cdboost::io
