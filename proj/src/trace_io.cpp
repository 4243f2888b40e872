#include "wqcopt/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wqcopt/solvers.hpp"
#include "wqcopt/text.hpp"

namespace wqcopt {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

void write_meta(std::ofstream& out, const std::map<std::string, std::string>& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << "=" << value << "\n";
}

}  // namespace

void write_trace_csv(const std::string& path, const Trace& t,
                     const std::map<std::string, std::string>& extra_meta) {
  std::map<std::string, std::string> meta = extra_meta;
  if (!t.objective_name.empty()) meta["objective"] = t.objective_name;
  if (!t.method.empty()) meta["method"] = t.method;
  if (!t.config_digest.empty()) meta["config"] = t.config_digest;
  if (t.R) meta["R"] = format_double(*t.R);

  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << kTraceHeader << "\n";
  for (const IterateRecord& r : t.records) {
    out << r.k << ',' << format_double(r.f) << ',';
    if (r.gap) out << format_double(*r.gap);
    out << ',' << format_double(r.grad_norm) << ',' << r.inner_iters << ','
        << format_double(r.inner_residual) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::optional<double> LoadedTrace::meta_double(const std::string& key) const {
  const auto it = meta.find(key);
  if (it == meta.end()) return std::nullopt;
  return parse_double(it->second);
}

LoadedTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace: " + path);

  LoadedTrace lt;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body = body.substr(1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) lt.meta[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line != kTraceHeader)
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": malformed trace header");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 6 columns");
    IterateRecord r;
    const auto k = parse_int(cells[0]);
    const auto f = parse_double(cells[1]);
    const auto gn = parse_double(cells[3]);
    const auto ii = parse_int(cells[4]);
    const auto ir = parse_double(cells[5]);
    if (!k || !f || !gn || !ii || !ir)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed trace row");
    r.k = static_cast<int>(*k);
    r.f = *f;
    r.grad_norm = *gn;
    r.inner_iters = static_cast<int>(*ii);
    r.inner_residual = *ir;
    if (!cells[2].empty()) {
      const auto gap = parse_double(cells[2]);
      if (!gap) throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed gap");
      r.gap = *gap;
    }
    lt.trace.records.push_back(std::move(r));
  }
  if (!header_seen) throw std::runtime_error(path + ": empty trace file");
  if (lt.trace.records.empty()) throw std::runtime_error(path + ": trace has no records");

  const auto it = lt.meta.find("objective");
  if (it != lt.meta.end()) lt.trace.objective_name = it->second;
  const auto mit = lt.meta.find("method");
  if (mit != lt.meta.end()) lt.trace.method = mit->second;
  const auto cit = lt.meta.find("config");
  if (cit != lt.meta.end()) lt.trace.config_digest = cit->second;
  lt.trace.R = lt.meta_double("R");
  return lt;
}

BoundReport make_bound_report(const Trace& t, double L, double alpha, std::optional<double> mu) {
  if (!t.R) throw std::invalid_argument("bound report: trace has no R (solution set unknown)");
  BoundReport rep;
  for (const IterateRecord& r : t.records) {
    if (!r.gap) throw std::invalid_argument("bound report: trace has no gap column (f_star unknown)");
    if (t.method == "sesop" && r.k == 0) continue;  // the bound starts at k = 1
    BoundRow row;
    row.k = r.k;
    row.gap = *r.gap;
    row.bound = theoretical_bound(t.method, r.k, L, *t.R, alpha, mu);
    row.ratio = row.bound > 0.0 ? row.gap / row.bound : 0.0;
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  rep.violated = rep.max_ratio > 1.0 + 1e-9;
  return rep;
}

void write_bound_report(const std::string& path, const BoundReport& r,
                        const std::map<std::string, std::string>& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "max_ratio=" << format_double(r.max_ratio) << "\n";
  out << "violated=" << (r.violated ? "true" : "false") << "\n";
  out << "k,gap,bound,ratio\n";
  for (const BoundRow& row : r.rows)
    out << row.k << ',' << format_double(row.gap) << ',' << format_double(row.bound) << ','
        << format_double(row.ratio) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::string join_vector(const Vector& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

void write_estimate_report(const std::string& path, const ConditionEstimate& est,
                           const std::map<std::string, std::string>& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "condition=" << condition_name(est.condition) << "\n";
  out << "raw_inf=" << format_double(est.raw_inf) << "\n";
  out << "constant=" << format_double(est.constant) << "\n";
  out << "witness=" << join_vector(est.witness) << "\n";
  out << "samples=" << est.samples << "\n";
  out << "seed=" << est.seed << "\n";
  out << "verdict=" << (est.constant > 0.0 ? "holds on samples" : "fails with witness") << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_star_report(const std::string& path, const StarConvexityReport& rep,
                       const std::map<std::string, std::string>& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "condition=star\n";
  out << "worst_violation=" << format_double(rep.worst_violation) << "\n";
  out << "witness=" << join_vector(rep.witness) << "\n";
  out << "witness_lambda=" << format_double(rep.witness_lambda) << "\n";
  out << "verdict=" << (rep.worst_violation <= 1e-9 ? "holds on samples" : "fails with witness")
      << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wqcopt
