#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wqcopt/conditions.hpp"
#include "wqcopt/objective.hpp"

namespace wqcopt {

// Exact trace CSV header; readers reject anything else.
inline constexpr const char* kTraceHeader = "k,f,gap,grad_norm,inner_iters,inner_residual";

// Writes `# key=value` metadata lines, the header, then one row per record.
// Floats are serialized with 17 significant digits; the gap cell is empty
// when f_star is unknown. Metadata: objective/method/config/R from the trace,
// then extra_meta in key order.
void write_trace_csv(const std::string& path, const Trace& t,
                     const std::map<std::string, std::string>& extra_meta = {});

struct LoadedTrace {
  Trace trace;  // records carry no x (the CSV does not store iterates)
  std::map<std::string, std::string> meta;

  std::optional<double> meta_double(const std::string& key) const;
};

// Throws std::runtime_error on empty or malformed input.
LoadedTrace read_trace_csv(const std::string& path);

struct BoundRow {
  int k = 0;
  double gap = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  double max_ratio = 0.0;
  bool violated = false;  // max_ratio > 1 + 1e-9
};

// Checks recorded gaps against theoretical_bound for the trace's method.
// Needs t.R and recorded gaps; rows the bound does not cover (sesop k = 0)
// are skipped. mu is only consulted for cg-restart.
BoundReport make_bound_report(const Trace& t, double L, double alpha, std::optional<double> mu);

void write_bound_report(const std::string& path, const BoundReport& r,
                        const std::map<std::string, std::string>& meta = {});

// One-estimate report: flat key=value lines. The verdict is "holds on
// samples" or "fails with witness", never a proof claim.
void write_estimate_report(const std::string& path, const ConditionEstimate& est,
                           const std::map<std::string, std::string>& meta = {});
void write_star_report(const std::string& path, const StarConvexityReport& rep,
                       const std::map<std::string, std::string>& meta = {});

}  // namespace wqcopt
