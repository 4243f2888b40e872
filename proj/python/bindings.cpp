#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "wqcopt/conditions.hpp"
#include "wqcopt/functions.hpp"
#include "wqcopt/gradient_check.hpp"
#include "wqcopt/objective.hpp"
#include "wqcopt/solvers.hpp"

namespace py = pybind11;
using namespace wqcopt;

namespace {

SolverConfig make_config(const std::string& method, int T, double L, std::optional<double> alpha,
                         std::optional<double> mu, std::optional<int> cycles, double inner_tol,
                         int inner_max, int record_every) {
  auto m = parse_method(method);
  if (!m) throw std::invalid_argument("unknown method '" + method + "'");
  SolverConfig cfg;
  cfg.method = *m;
  cfg.T = T;
  cfg.L = L;
  cfg.alpha = alpha;
  cfg.mu = mu;
  cfg.cycles = cycles;
  cfg.inner_tol = inner_tol;
  cfg.inner_max = inner_max;
  cfg.record_every = record_every;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_wqcopt, m) {
  m.doc() = "first-order solvers and condition estimators for smooth weakly quasi-convex problems";

  py::register_exception<SolverError>(m, "SolverAbort", PyExc_RuntimeError);

  py::class_<Objective>(m, "Objective")
      .def_readonly("dim", &Objective::dim)
      .def("value", [](const Objective& o, const Vector& x) { return o.value(x); }, py::arg("x"))
      .def("gradient", [](const Objective& o, const Vector& x) { return o.gradient(x); },
           py::arg("x"))
      .def_readonly("lipschitz_L", &Objective::lipschitz_L)
      .def_readonly("f_star", &Objective::f_star)
      .def("has_projector", &Objective::has_projector)
      .def("project",
           [](const Objective& o, const Vector& x) -> Vector {
             if (!o.has_projector()) throw std::runtime_error("objective has no projector");
             return o.projector(x);
           },
           py::arg("x"));

  m.def("custom_objective",
        [](int dim, std::function<double(Vector)> value, std::function<Vector(Vector)> gradient,
           std::optional<double> lipschitz_L, std::optional<double> f_star,
           std::optional<std::function<Vector(Vector)>> projector) {
          Objective obj;
          obj.dim = dim;
          obj.value = [value](const Vector& x) { return value(x); };
          obj.gradient = [gradient](const Vector& x) { return gradient(x); };
          obj.lipschitz_L = lipschitz_L;
          obj.f_star = f_star;
          if (projector) {
            auto p = *projector;
            obj.projector = [p](const Vector& x) { return p(x); };
          }
          return obj;
        },
        py::arg("dim"), py::arg("value"), py::arg("gradient"), py::arg("lipschitz_L") = py::none(),
        py::arg("f_star") = py::none(), py::arg("projector") = py::none());

  m.def("quadratic", &quadratic, py::arg("A"), py::arg("b"));
  m.def("abs_one_minus_exp", &abs_one_minus_exp);
  m.def("sphere_quartic", &sphere_quartic, py::arg("n"));
  m.def("random_quadratic", &random_quadratic, py::arg("n"), py::arg("kappa"), py::arg("L"),
        py::arg("seed"), py::arg("shift") = 0.0);

  py::class_<ZooEntry>(m, "ZooEntry")
      .def_readonly("name", &ZooEntry::name)
      .def_readonly("objective", &ZooEntry::objective)
      .def_readonly("alpha_ref", &ZooEntry::alpha_ref)
      .def_readonly("mu_qg_ref", &ZooEntry::mu_qg_ref)
      .def_readonly("notes", &ZooEntry::notes);
  m.def("zoo", &zoo);

  py::class_<IterateRecord>(m, "IterateRecord")
      .def_readonly("k", &IterateRecord::k)
      .def_readonly("x", &IterateRecord::x)
      .def_readonly("f", &IterateRecord::f)
      .def_readonly("grad_norm", &IterateRecord::grad_norm)
      .def_readonly("gap", &IterateRecord::gap)
      .def_readonly("inner_iters", &IterateRecord::inner_iters)
      .def_readonly("inner_residual", &IterateRecord::inner_residual);

  py::class_<OrthogonalityResidual>(m, "OrthogonalityResidual")
      .def_readonly("k", &OrthogonalityResidual::k)
      .def_readonly("displacement", &OrthogonalityResidual::displacement)
      .def_readonly("weighted_grad_sum", &OrthogonalityResidual::weighted_grad_sum);

  py::class_<CgDiagnostics>(m, "CgDiagnostics")
      .def_readonly("q_norm_sq", &CgDiagnostics::q_norm_sq)
      .def_readonly("grad_sq_sum", &CgDiagnostics::grad_sq_sum);

  py::class_<Trace>(m, "Trace")
      .def_readonly("objective_name", &Trace::objective_name)
      .def_readonly("method", &Trace::method)
      .def_readonly("config_digest", &Trace::config_digest)
      .def_readonly("R", &Trace::R)
      .def_readonly("records", &Trace::records)
      .def_readonly("hat_records", &Trace::hat_records)
      .def_readonly("orthogonality", &Trace::orthogonality)
      .def_readonly("cg", &Trace::cg)
      .def_readonly("cycle_starts", &Trace::cycle_starts);

  m.def("run_solver",
        [](const Objective& obj, const Vector& x0, const std::string& method, int T, double L,
           std::optional<double> alpha, std::optional<double> mu, std::optional<int> cycles,
           double inner_tol, int inner_max, int record_every, double eps) {
          return run_solver(obj, x0,
                            make_config(method, T, L, alpha, mu, cycles, inner_tol, inner_max,
                                        record_every),
                            eps);
        },
        py::arg("objective"), py::arg("x0"), py::arg("method") = "gd", py::arg("T") = 0,
        py::arg("L") = 0.0, py::arg("alpha") = py::none(), py::arg("mu") = py::none(),
        py::arg("cycles") = py::none(), py::arg("inner_tol") = 1e-10, py::arg("inner_max") = 200,
        py::arg("record_every") = 1, py::arg("eps") = 0.0);

  m.def("theoretical_bound", &theoretical_bound, py::arg("method"), py::arg("k"), py::arg("L"),
        py::arg("R"), py::arg("alpha"), py::arg("mu") = py::none());
  m.def("cg_cycle_length", &cg_cycle_length, py::arg("alpha"), py::arg("L"), py::arg("mu"));

  py::class_<OmegaSequence>(m, "OmegaSequence")
      .def_static("generate", &OmegaSequence::generate, py::arg("count"))
      .def_readonly("values", &OmegaSequence::values)
      .def("max_identity_residual", &OmegaSequence::max_identity_residual)
      .def("lower_bound_holds", &OmegaSequence::lower_bound_holds);

  py::class_<Sampler>(m, "Sampler")
      .def_static("box", &Sampler::box, py::arg("count"), py::arg("lo"), py::arg("hi"),
                  py::arg("seed"))
      .def_static("gaussian", &Sampler::gaussian, py::arg("count"), py::arg("center"),
                  py::arg("scale"), py::arg("seed"))
      .def_static("from_points", &Sampler::from_points, py::arg("points"), py::arg("count"))
      .def("generate", &Sampler::generate, py::arg("dim"));

  py::class_<ConditionEstimate>(m, "ConditionEstimate")
      .def_property_readonly("condition",
                             [](const ConditionEstimate& e) { return condition_name(e.condition); })
      .def_readonly("raw_inf", &ConditionEstimate::raw_inf)
      .def_readonly("constant", &ConditionEstimate::constant)
      .def_readonly("witness", &ConditionEstimate::witness)
      .def_readonly("samples", &ConditionEstimate::samples)
      .def_readonly("seed", &ConditionEstimate::seed);

  m.def("estimate_wqc_alpha", &estimate_wqc_alpha, py::arg("objective"), py::arg("x_star"),
        py::arg("sampler"));
  m.def("estimate_qg_mu", &estimate_qg_mu, py::arg("objective"), py::arg("sampler"));
  m.def("estimate_pl_mu", &estimate_pl_mu, py::arg("objective"), py::arg("sampler"));
  m.def("estimate_weak_pl_mu", &estimate_weak_pl_mu, py::arg("objective"), py::arg("x_star"),
        py::arg("sampler"));

  py::class_<StarConvexityReport>(m, "StarConvexityReport")
      .def_readonly("worst_violation", &StarConvexityReport::worst_violation)
      .def_readonly("witness", &StarConvexityReport::witness)
      .def_readonly("witness_lambda", &StarConvexityReport::witness_lambda);
  m.def("check_star_convexity", &check_star_convexity, py::arg("objective"), py::arg("x_star"),
        py::arg("sampler"), py::arg("lambdas") = std::vector<double>{});

  py::class_<Lemma1Report>(m, "Lemma1Report")
      .def_readonly("wqc", &Lemma1Report::wqc)
      .def_readonly("star", &Lemma1Report::star)
      .def_readonly("wqc_holds", &Lemma1Report::wqc_holds)
      .def_readonly("star_holds", &Lemma1Report::star_holds)
      .def("agree", &Lemma1Report::agree);
  m.def("lemma1_crosscheck", &lemma1_crosscheck, py::arg("objective"), py::arg("x_star"),
        py::arg("sampler"));

  py::class_<SmoothnessEstimate>(m, "SmoothnessEstimate")
      .def_readonly("raw_sup", &SmoothnessEstimate::raw_sup)
      .def_readonly("witness", &SmoothnessEstimate::witness)
      .def_readonly("samples", &SmoothnessEstimate::samples)
      .def_readonly("seed", &SmoothnessEstimate::seed);
  m.def("estimate_smoothness_L", &estimate_smoothness_L, py::arg("objective"), py::arg("sampler"),
        py::arg("delta") = 1e-4);

  py::class_<GradientCheckResult>(m, "GradientCheckResult")
      .def_readonly("ok", &GradientCheckResult::ok)
      .def_readonly("error", &GradientCheckResult::error);
  m.def("check_gradient", &check_gradient, py::arg("objective"), py::arg("x"),
        py::arg("h") = 1e-6, py::arg("rtol") = 1e-6);
  m.def("finite_difference_gradient", &finite_difference_gradient, py::arg("objective"),
        py::arg("x"), py::arg("h") = 1e-6);
}
