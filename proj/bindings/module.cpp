#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oudrift/bounds.hpp"
#include "oudrift/estimate.hpp"
#include "oudrift/experiments.hpp"
#include "oudrift/model.hpp"
#include "oudrift/norms.hpp"
#include "oudrift/simulate.hpp"

namespace py = pybind11;
using namespace oudrift;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse drift estimation for high-dimensional Ornstein-Uhlenbeck models";

  py::register_exception<DomainError>(m, "DomainError", PyExc_RuntimeError);

  // ---- model ----------------------------------------------------------
  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init([](const Matrix& a0) { return make_model(a0); }), py::arg("a0"))
      .def_readonly("a0", &ModelSpec::a0)
      .def_readonly("d", &ModelSpec::d)
      .def_readonly("s0", &ModelSpec::s0)
      .def_readonly("seed", &ModelSpec::seed)
      .def_readonly("margin", &ModelSpec::margin);

  py::class_<HCertificate>(m, "HCertificate")
      .def_readonly("eigenvalues", &HCertificate::eigenvalues)
      .def_readonly("r0", &HCertificate::r0)
      .def_readonly("p0", &HCertificate::p0)
      .def_readonly("diagonalizable", &HCertificate::diagonalizable)
      .def_readonly("condition_estimate", &HCertificate::condition_estimate)
      .def_readonly("solver_converged", &HCertificate::solver_converged)
      .def("holds", &HCertificate::holds);

  py::class_<ErgodicConstants>(m, "ErgodicConstants")
      .def(py::init<>())
      .def_readwrite("c_inf", &ErgodicConstants::c_inf)
      .def_readwrite("k_big", &ErgodicConstants::k_big)
      .def_readwrite("k_small", &ErgodicConstants::k_small)
      .def_readwrite("m_small", &ErgodicConstants::m_small)
      .def_readwrite("m_big", &ErgodicConstants::m_big)
      .def_readwrite("r0", &ErgodicConstants::r0)
      .def_readwrite("p0", &ErgodicConstants::p0);

  m.def("check_assumption_h", &check_assumption_h, py::arg("a"),
        py::arg("cond_ceiling") = 1e12);
  m.def("solve_lyapunov", &solve_lyapunov, py::arg("a"));
  m.def("ergodic_constants", &ergodic_constants, py::arg("a"));
  m.def("generate_sparse_stable", &generate_sparse_stable, py::arg("d"),
        py::arg("s"), py::arg("margin"), py::arg("seed"));

  // ---- simulate -------------------------------------------------------
  py::enum_<Scheme>(m, "Scheme")
      .value("Exact", Scheme::Exact)
      .value("Euler", Scheme::Euler);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("t_horizon", &SimConfig::t_horizon)
      .def_readwrite("n_steps", &SimConfig::n_steps)
      .def_readwrite("scheme", &SimConfig::scheme)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("retain_brownian", &SimConfig::retain_brownian)
      .def("dt", &SimConfig::dt);

  py::class_<Path>(m, "Path")
      .def_readonly("states", &Path::states)
      .def_readonly("dt", &Path::dt)
      .def_readonly("brownian_increments", &Path::brownian_increments)
      .def("dim", &Path::dim)
      .def("steps", &Path::steps);

  py::class_<SufficientStats>(m, "SufficientStats")
      .def(py::init([](const Matrix& c_hat, const Matrix& s_hat, double t) {
             SufficientStats stats;
             stats.c_hat = c_hat;
             stats.s_hat = s_hat;
             stats.t_horizon = t;
             return stats;
           }),
           py::arg("c_hat"), py::arg("s_hat"), py::arg("t_horizon"))
      .def_readonly("c_hat", &SufficientStats::c_hat)
      .def_readonly("s_hat", &SufficientStats::s_hat)
      .def_readonly("eps_hat", &SufficientStats::eps_hat)
      .def_readonly("t_horizon", &SufficientStats::t_horizon)
      .def("dim", &SufficientStats::dim);

  m.def("transition_kernel", &transition_kernel, py::arg("a"), py::arg("delta"));
  m.def("simulate_path", &simulate_path, py::arg("model"), py::arg("cfg"));
  m.def("sufficient_stats", &sufficient_stats, py::arg("path"));

  // ---- estimate -------------------------------------------------------
  py::enum_<Method>(m, "Method")
      .value("Mle", Method::Mle)
      .value("Lasso", Method::Lasso)
      .value("Dantzig", Method::Dantzig);

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("Converged", SolveStatus::Converged)
      .value("IterLimit", SolveStatus::IterLimit)
      .value("PivotLimit", SolveStatus::PivotLimit);

  py::class_<LassoConfig>(m, "LassoConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &LassoConfig::lambda)
      .def_readwrite("max_iter", &LassoConfig::max_iter)
      .def_readwrite("tol", &LassoConfig::tol)
      .def_readwrite("acceleration", &LassoConfig::acceleration);

  py::class_<DantzigConfig>(m, "DantzigConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &DantzigConfig::lambda)
      .def_readwrite("lp_tol", &DantzigConfig::lp_tol)
      .def_readwrite("max_pivots_per_row", &DantzigConfig::max_pivots_per_row);

  py::class_<EstimateResult>(m, "EstimateResult")
      .def_readonly("a_hat", &EstimateResult::a_hat)
      .def_readonly("method", &EstimateResult::method)
      .def_readonly("lambda_", &EstimateResult::lambda)
      .def_readonly("iterations", &EstimateResult::iterations)
      .def_readonly("objective", &EstimateResult::objective)
      .def_readonly("kkt_residual", &EstimateResult::kkt_residual)
      .def_readonly("dantzig_feasibility", &EstimateResult::dantzig_feasibility)
      .def_readonly("l1_norm", &EstimateResult::l1_norm)
      .def_readonly("status", &EstimateResult::status)
      .def("l0_count_at", &EstimateResult::l0_count_at, py::arg("tau"));

  m.def("mle", &mle, py::arg("stats"), py::arg("cond_ceiling") = 1e12);
  m.def("soft_threshold", &soft_threshold, py::arg("x"), py::arg("tau"));
  m.def("lasso_objective", &lasso_objective, py::arg("a"), py::arg("stats"),
        py::arg("lambda_"));
  m.def("lasso_gradient", &lasso_gradient, py::arg("a"), py::arg("stats"));
  m.def("lasso_kkt_residual", &lasso_kkt_residual, py::arg("a"),
        py::arg("stats"), py::arg("lambda_"));
  m.def(
      "lasso",
      [](const SufficientStats& stats, double lambda, int max_iter, double tol,
         bool acceleration) {
        LassoConfig cfg;
        cfg.lambda = lambda;
        cfg.max_iter = max_iter;
        cfg.tol = tol;
        cfg.acceleration = acceleration;
        return lasso(stats, cfg);
      },
      py::arg("stats"), py::arg("lambda_"), py::arg("max_iter") = 20000,
      py::arg("tol") = 1e-8, py::arg("acceleration") = true);
  m.def(
      "dantzig",
      [](const SufficientStats& stats, double lambda, double lp_tol,
         int max_pivots_per_row) {
        DantzigConfig cfg;
        cfg.lambda = lambda;
        cfg.lp_tol = lp_tol;
        cfg.max_pivots_per_row = max_pivots_per_row;
        return dantzig(stats, cfg);
      },
      py::arg("stats"), py::arg("lambda_"), py::arg("lp_tol") = 1e-9,
      py::arg("max_pivots_per_row") = 0);
  m.def("dantzig_feasibility", &dantzig_feasibility, py::arg("a"),
        py::arg("stats"));
  m.def("lambda_rule", &lambda_rule, py::arg("d"), py::arg("t_horizon"),
        py::arg("eps0"), py::arg("constants"));
  m.def("lambda_rule_plugin", &lambda_rule_plugin, py::arg("d"),
        py::arg("t_horizon"), py::arg("eps0"), py::arg("stats"));

  // ---- bounds ---------------------------------------------------------
  py::class_<ConeSpec>(m, "ConeSpec")
      .def(py::init<int, double>(), py::arg("s"), py::arg("c0"))
      .def_readwrite("s", &ConeSpec::s)
      .def_readwrite("c0", &ConeSpec::c0);

  py::class_<ReTimeThreshold>(m, "ReTimeThreshold")
      .def_readonly("t_min", &ReTimeThreshold::t_min)
      .def_readonly("prefactor", &ReTimeThreshold::prefactor)
      .def_readonly("bracket", &ReTimeThreshold::bracket)
      .def_readonly("bracket_negative", &ReTimeThreshold::bracket_negative);

  py::class_<OracleBounds>(m, "OracleBounds")
      .def_readonly("lasso_oracle_const", &OracleBounds::lasso_oracle_const)
      .def_readonly("dantzig_oracle_const", &OracleBounds::dantzig_oracle_const)
      .def_readonly("l2_pred", &OracleBounds::l2_pred)
      .def_readonly("frob", &OracleBounds::frob)
      .def_readonly("l1", &OracleBounds::l1)
      .def_readonly("sparsity", &OracleBounds::sparsity);

  m.def("in_cone", &in_cone, py::arg("v"), py::arg("cone"));
  m.def("top_s_coordinates", &top_s_coordinates, py::arg("v"), py::arg("s"));
  m.def("tail_exponent", &tail_exponent, py::arg("x"), py::arg("constants"));
  m.def("re_time_threshold", &re_time_threshold, py::arg("eps0"), py::arg("s"),
        py::arg("c0"), py::arg("constants"), py::arg("d"));
  m.def("martingale_time_threshold", &martingale_time_threshold,
        py::arg("eps0"), py::arg("s"), py::arg("d"), py::arg("constants"));
  m.def("oracle_bounds", &oracle_bounds, py::arg("s0"), py::arg("lambda_"),
        py::arg("gamma"), py::arg("constants"));
  m.def("restricted_eigenvalue_empirical", &restricted_eigenvalue_empirical,
        py::arg("c_hat"), py::arg("cone"), py::arg("n_samples"),
        py::arg("seed"));

  // ---- experiments ----------------------------------------------------
  py::class_<SupportMetrics>(m, "SupportMetrics")
      .def_readonly("precision", &SupportMetrics::precision)
      .def_readonly("recall", &SupportMetrics::recall)
      .def_readonly("f1", &SupportMetrics::f1);

  m.def("support_metrics", &support_metrics, py::arg("a_hat"), py::arg("a0"),
        py::arg("tau"));

  // ---- norms ----------------------------------------------------------
  m.def("norm_l1", &norm_l1, py::arg("a"));
  m.def("norm_linf", &norm_linf, py::arg("a"));
  m.def("norm_fro", &norm_fro, py::arg("a"));
  m.def("norm_l0", &norm_l0, py::arg("a"));
  m.def("support_count", &support_count, py::arg("a"), py::arg("tau"));

  m.attr("__version__") = "0.1.0";
}
