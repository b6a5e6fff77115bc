#pragma once

#include <map>
#include <optional>
#include <string>

#include "cdboost/boost.hpp"
#include "cdboost/instance.hpp"
#include "cdboost/structure.hpp"

namespace cdboost::io {

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// Instance plus optional per-loss reference optima stored next to fixtures.
struct InstanceFile {
  BoostInstance instance;
  std::map<std::string, double> reference_objective;  // loss name -> f-bar
  std::string provenance;
};

/// {"m":int,"n":int,"entries":[[...],...]} row-major.
std::string instance_to_json(const BoostInstance& inst,
                             const std::map<std::string, double>& reference = {},
                             const std::string& provenance = "");
InstanceFile instance_from_json(const std::string& text);

/// One matrix row per line, comma separated.
std::string instance_to_csv(const BoostInstance& inst);
BoostInstance instance_from_csv(const std::string& text);

/// JSON if the first non-blank character is '{', CSV otherwise.
InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);

/// Header `t,objective,grad_inf,j,sign,alpha`, one row per step.
std::string trace_to_csv(const Trace& trace);

struct TraceRow {
  long t;
  double objective;
  double grad_inf;
  long j;
  int sign;
  double alpha;
};
std::vector<TraceRow> trace_from_csv(const std::string& text);

/// lambda after replaying every step of a trace CSV, in order.
Vector replay_lambda(const std::vector<TraceRow>& rows, long n);

std::string report_to_json(const StructureReport& report, const BoostInstance& inst);
std::string certificate_to_json(const std::optional<DualCertificate>& cert, double primal_value);

std::string read_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cdboost::io
