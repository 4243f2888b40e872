// End-to-end tests of the installed command-line interface: every test shells
// out to the real binary (path injected at compile time) and inspects exit
// codes, stdout/stderr and the files written.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "wqcopt/harness.hpp"
#include "wqcopt/solvers.hpp"
#include "wqcopt/text.hpp"
#include "wqcopt/trace_io.hpp"

namespace fs = std::filesystem;
using namespace wqcopt;

namespace {

std::string tmp(const std::string& name) {
  return (fs::temp_directory_path() / ("wqcopt_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path = tmp("stdout_" + std::to_string(counter));
  const std::string err_path = tmp("stderr_" + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string("\"") + WQCOPT_CLI_PATH + "\" " + args + " > \"" + out_path +
                          "\" 2> \"" + err_path + "\"";
  const int rc = std::system(cmd.c_str());
  CliResult r;
  if (rc != -1 && WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

// Parses the combined CSV of `compare`: a `# key=value` preamble, a header
// row, then one row per iteration with possibly empty cells.
struct CompareCsv {
  std::vector<std::string> columns;
  std::vector<std::map<std::string, double>> rows;  // keyed by column, absent if cell empty
  std::map<std::string, std::string> meta;

  static CompareCsv parse(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    CompareCsv c;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        std::string body = line.substr(line.find_first_not_of("# "));
        const auto eq = body.find('=');
        if (eq != std::string::npos) c.meta[body.substr(0, eq)] = body.substr(eq + 1);
        continue;
      }
      std::vector<std::string> cells;
      std::string cell;
      std::istringstream ls(line);
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (line.back() == ',') cells.push_back("");
      if (c.columns.empty()) {
        c.columns = cells;
        continue;
      }
      std::map<std::string, double> row;
      for (std::size_t i = 0; i < cells.size() && i < c.columns.size(); ++i) {
        if (cells[i].empty()) continue;
        auto v = parse_double(cells[i]);
        REQUIRE(v.has_value());
        row[c.columns[i]] = *v;
      }
      c.rows.push_back(std::move(row));
    }
    return c;
  }
};

}  // namespace

TEST_CASE("zoo lists every objective") {
  const auto r = run_cli("zoo");
  CHECK(r.status == 0);
  for (const char* name : {"quad1d", "quad", "quad-ill", "quad-rot", "abs_one_minus_exp",
                           "sphere_quartic"}) {
    CAPTURE(name);
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("help and parse errors follow the exit-code contract") {
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("run --help").status == 0);
  CHECK(run_cli("").status == 2);            // a subcommand is required
  CHECK(run_cli("run --nope 1").status == 2);
  CHECK(run_cli("estimate --objective quad1d").status == 2);  // --condition is required
}

TEST_CASE("one gd step on the 1-d square lands on the minimum") {
  const std::string trace = tmp("one_step.csv");
  const auto r =
      run_cli("run --objective quad1d --solver gd --iters 1 --x0 1 --out \"" + trace + "\"");
  CHECK(r.status == 0);
  CHECK(r.out.find("gd on quad1d: k=1") != std::string::npos);
  CHECK(r.out.find("gap=0 ") != std::string::npos);
  const LoadedTrace lt = read_trace_csv(trace);
  REQUIRE(lt.trace.records.size() == 2);
  CHECK(*lt.trace.records.back().gap == 0.0);
  CHECK(lt.meta.at("L") == "2");  // filled in from the zoo
  CHECK(lt.meta.count("runspec") == 1);
}

TEST_CASE("identical invocations write identical bytes") {
  const std::string a = tmp("det_a.csv");
  const std::string b = tmp("det_b.csv");
  const std::string args = "run --objective quad --solver sesop --iters 20 --x0 radius:2 --seed 5";
  CHECK(run_cli(args + " --out \"" + a + "\"").status == 0);
  CHECK(run_cli(args + " --out \"" + b + "\"").status == 0);
  const std::string body = slurp(a);
  CHECK(!body.empty());
  CHECK(body == slurp(b));
}

TEST_CASE("sparse recording keeps multiples of the stride plus the last row") {
  const std::string trace = tmp("stride.csv");
  const auto r = run_cli("run --objective quad1d --solver gd --iters 10 --record-every 3 --x0 1 --out \"" +
                         trace + "\"");
  CHECK(r.status == 0);
  const LoadedTrace lt = read_trace_csv(trace);
  REQUIRE(lt.trace.records.size() == 5);
  CHECK(lt.trace.records.back().k == 10);
}

TEST_CASE("bad names and missing inputs exit 2 with an explanation") {
  const auto bad_obj = run_cli("run --objective nope --iters 1");
  CHECK(bad_obj.status == 2);
  CHECK(bad_obj.err.find("unknown objective") != std::string::npos);
  CHECK(bad_obj.err.find("quad1d") != std::string::npos);  // lists the valid names

  const auto bad_solver = run_cli("run --objective quad1d --solver newton --iters 1");
  CHECK(bad_solver.status == 2);
  CHECK(bad_solver.err.find("unknown solver") != std::string::npos);

  const auto no_obj = run_cli("run --iters 1");
  CHECK(no_obj.status == 2);
  CHECK(no_obj.err.find("missing --objective") != std::string::npos);

  const auto bad_x0 = run_cli("run --objective quad1d --iters 1 --x0 1,2");
  CHECK(bad_x0.status == 2);
  CHECK(bad_x0.err.find("x0 has 2 components") != std::string::npos);
}

TEST_CASE("a too-small smoothness constant aborts with the partial trace on disk") {
  const std::string trace = tmp("abort.csv");
  const auto r = run_cli("run --objective quad-ill --solver gd --L 0.001 --iters 50 --x0 radius:2 --out \"" +
                         trace + "\"");
  CHECK(r.status == 1);
  CHECK(r.err.find("solver abort") != std::string::npos);
  const LoadedTrace lt = read_trace_csv(trace);
  CHECK(lt.trace.records.size() == 1);  // the start record survives
  CHECK(lt.trace.records[0].k == 0);
}

TEST_CASE("estimate prints the sampled constants") {
  const auto wqc = run_cli(
      "estimate --objective abs_one_minus_exp --condition wqc --lo -10 --hi 10 --seed 7");
  CHECK(wqc.status == 0);
  CHECK(wqc.out.find("condition=wqc") != std::string::npos);
  CHECK(wqc.out.find("constant=1 ") != std::string::npos);

  const std::string report = tmp("pl_report.txt");
  const auto pl = run_cli("estimate --objective quad1d --condition pl --lo -5 --hi 5 --report \"" +
                          report + "\"");
  CHECK(pl.status == 0);
  CHECK(pl.out.find("constant=2 ") != std::string::npos);
  const std::string rep_body = slurp(report);
  CHECK(rep_body.find("condition=pl\n") != std::string::npos);
  CHECK(rep_body.find("constant=2\n") != std::string::npos);

  const auto star = run_cli(
      "estimate --objective sphere_quartic --condition star --sampler gaussian-around --samples 200 "
      "--scale 0.5 --seed 3");
  CHECK(star.status == 0);
  CHECK(star.out.find("condition=star worst_violation=") != std::string::npos);
}

TEST_CASE("estimate rejects bad names and samplers") {
  CHECK(run_cli("estimate --objective quad1d --condition convex").status == 2);
  const auto r = run_cli("estimate --objective quad1d --condition pl --sampler grid");
  CHECK(r.status == 2);
  CHECK(r.err.find("unknown sampler") != std::string::npos);
  // recorded-iterate sampling has no CLI surface
  CHECK(run_cli("estimate --objective quad1d --condition pl --sampler trajectory").status == 2);
}

TEST_CASE("compare aligns gap and bound columns across methods") {
  const std::string ga = tmp("cmp_gd.csv");
  const std::string se = tmp("cmp_sesop.csv");
  REQUIRE(run_cli("run --objective abs_one_minus_exp --solver gd --iters 60 --x0 3 --out \"" + ga +
                  "\"").status == 0);
  REQUIRE(run_cli("run --objective abs_one_minus_exp --solver sesop --iters 60 --x0 3 --out \"" +
                  se + "\"").status == 0);

  const std::string out = tmp("cmp.csv");
  const std::string svg = tmp("cmp.svg");
  const auto r = run_cli("compare \"" + ga + "\" \"" + se + "\" --out \"" + out + "\" --plot \"" +
                         svg + "\"");
  CHECK(r.status == 0);

  const CompareCsv csv = CompareCsv::parse(out);
  CHECK(csv.meta.at("objective") == "abs_one_minus_exp");
  REQUIRE(csv.columns ==
          std::vector<std::string>{"k", "gap_gd", "bound_gd", "gap_sesop", "bound_sesop"});
  REQUIRE(csv.rows.size() == 61);
  int checked = 0;
  for (const auto& row : csv.rows) {
    const auto k = row.find("k");
    REQUIRE(k != row.end());
    if (k->second < 7) continue;
    const auto gap_sesop = row.find("gap_sesop");
    const auto bound_gd = row.find("bound_gd");
    REQUIRE(gap_sesop != row.end());
    REQUIRE(bound_gd != row.end());
    CHECK(gap_sesop->second <= bound_gd->second);
    ++checked;
  }
  CHECK(checked == 54);

  const std::string svg_body = slurp(svg);
  CHECK(svg_body.find("<svg") != std::string::npos);
  CHECK(svg_body.find("stroke-dasharray") != std::string::npos);  // bounds are dashed
}

TEST_CASE("compare passes a single trace through with its bound overlay") {
  const std::string ga = tmp("solo_gd.csv");
  REQUIRE(run_cli("run --objective quad1d --solver gd --iters 5 --x0 1 --out \"" + ga + "\"")
              .status == 0);
  const std::string out = tmp("solo.csv");
  CHECK(run_cli("compare \"" + ga + "\" --out \"" + out + "\"").status == 0);
  const CompareCsv csv = CompareCsv::parse(out);
  REQUIRE(csv.columns == std::vector<std::string>{"k", "gap_gd", "bound_gd"});
  REQUIRE(csv.rows.size() == 6);
  CHECK(csv.rows[0].count("bound_gd") == 1);
}

TEST_CASE("compare disambiguates repeated methods and rejects mixed objectives") {
  const std::string a = tmp("twice_a.csv");
  const std::string b = tmp("twice_b.csv");
  REQUIRE(run_cli("run --objective quad1d --solver gd --iters 5 --x0 1 --out \"" + a + "\"")
              .status == 0);
  REQUIRE(run_cli("run --objective quad1d --solver gd --iters 5 --x0 0.5 --out \"" + b + "\"")
              .status == 0);
  const std::string out = tmp("twice.csv");
  CHECK(run_cli("compare \"" + a + "\" \"" + b + "\" --out \"" + out + "\"").status == 0);
  const CompareCsv csv = CompareCsv::parse(out);
  CHECK(csv.columns ==
        std::vector<std::string>{"k", "gap_gd", "bound_gd", "gap_gd_2", "bound_gd_2"});

  const std::string other = tmp("other_obj.csv");
  REQUIRE(run_cli("run --objective abs_one_minus_exp --solver gd --iters 5 --x0 3 --out \"" +
                  other + "\"").status == 0);
  const auto mixed = run_cli("compare \"" + a + "\" \"" + other + "\"");
  CHECK(mixed.status == 2);
  CHECK(mixed.err.find("mix") != std::string::npos);
}

TEST_CASE("a malformed trace input exits 2") {
  const std::string empty = tmp("empty.csv");
  std::ofstream(empty, std::ios::binary).close();
  const auto r = run_cli("compare \"" + empty + "\"");
  CHECK(r.status == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("restarted cg runs exactly the certified number of cycles") {
  // Reproduce the budget arithmetic in-process to pick an eps that certifies
  // exactly five cycles, then check the CLI run covers 5 * T_c iterations.
  ResolvedObjective res = resolve_objective({"quad", std::nullopt, 100.0, std::nullopt, std::nullopt});
  const Vector x0 = make_x0(res.objective, "radius:2", 3);
  const double gap0 = res.objective.value(x0) - *res.objective.f_star;
  REQUIRE(gap0 > 0.0);
  const double eps = gap0 * std::pow(0.75, 5);
  const int tc = cg_cycle_length(*res.alpha_ref, *res.objective.lipschitz_L, *res.mu_qg_ref);
  REQUIRE(tc == 14);

  const std::string trace = tmp("cg_restart.csv");
  const auto r = run_cli("run --objective quad --kappa 100 --solver cg-restart --x0 radius:2 --seed 3 --eps " +
                         format_double(eps) + " --out \"" + trace + "\"");
  CHECK(r.status == 0);
  const LoadedTrace lt = read_trace_csv(trace);
  REQUIRE(lt.trace.records.size() == static_cast<std::size_t>(5 * tc + 1));
  CHECK(lt.trace.records.back().k == 5 * tc);
  CHECK(*lt.trace.records.back().gap <= eps);
}

TEST_CASE("config files drive runs and flags override them") {
  const std::string trace = tmp("cfg_trace.csv");
  const std::string cfg = tmp("run.cfg");
  {
    std::ofstream out(cfg, std::ios::binary);
    out << "# one-step sanity run\n";
    out << "objective=quad1d\n";
    out << "solver=gd\n";
    out << "iters=1\n";
    out << "x0=1\n";
    out << "out=" << trace << "\n";
  }
  CHECK(run_cli("run --config \"" + cfg + "\"").status == 0);
  CHECK(read_trace_csv(trace).trace.records.size() == 2);

  CHECK(run_cli("run --config \"" + cfg + "\" --iters 4").status == 0);
  CHECK(read_trace_csv(trace).trace.records.size() == 5);

  const std::string bad = tmp("bad.cfg");
  std::ofstream(bad, std::ios::binary) << "objective=quad1d\nnonsense=1\n";
  const auto r = run_cli("run --config \"" + bad + "\"");
  CHECK(r.status == 2);
  CHECK(r.err.find("nonsense") != std::string::npos);
}

TEST_CASE("batch mode runs every job and reports the worst status") {
  const std::string t1 = tmp("batch_t1.csv");
  const std::string t2 = tmp("batch_t2.csv");
  const std::string j1 = tmp("job1.cfg");
  const std::string j2 = tmp("job2.cfg");
  std::ofstream(j1, std::ios::binary) << "objective=quad1d\nsolver=gd\niters=2\nx0=1\nout=" << t1
                                      << "\n";
  std::ofstream(j2, std::ios::binary) << "objective=quad\nsolver=sesop\niters=5\nx0=radius:2\nout="
                                      << t2 << "\n";
  const std::string list = tmp("jobs.txt");
  std::ofstream(list, std::ios::binary) << j1 << "\n" << j2 << "\n";

  const auto ok = run_cli("run --batch \"" + list + "\" --jobs 2");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("job " + j1 + ": ok") != std::string::npos);
  CHECK(ok.out.find("job " + j2 + ": ok") != std::string::npos);
  CHECK(read_trace_csv(t1).trace.records.size() == 3);
  CHECK(read_trace_csv(t2).trace.records.size() == 6);

  const std::string jbad = tmp("job_bad.cfg");
  std::ofstream(jbad, std::ios::binary) << "objective=nope\niters=1\n";
  const std::string list2 = tmp("jobs_bad.txt");
  std::ofstream(list2, std::ios::binary) << j1 << "\n" << jbad << "\n";
  const auto mixed = run_cli("run --batch \"" + list2 + "\"");
  CHECK(mixed.status == 2);
  CHECK(mixed.out.find("job " + j1 + ": ok") != std::string::npos);
  CHECK(mixed.out.find("error: unknown objective") != std::string::npos);

  const auto conflict = run_cli("run --batch \"" + list + "\" --iters 3");
  CHECK(conflict.status == 2);
}

TEST_CASE("run writes a bound report when the constants are known") {
  const std::string trace = tmp("rep_trace.csv");
  const std::string report = tmp("rep_bound.csv");
  const auto r = run_cli("run --objective quad1d --solver gd --iters 10 --x0 1 --out \"" + trace +
                         "\" --report \"" + report + "\"");
  CHECK(r.status == 0);
  CHECK(r.out.find("report " + report) != std::string::npos);
  const std::string body = slurp(report);
  CHECK(body.find("max_ratio=") != std::string::npos);
  CHECK(body.find("violated=false") != std::string::npos);
}
