#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "lpbar/barriers.hpp"
#include "lpbar/problem.hpp"

namespace lpbar {

/// Geometric schedule p_k = p0 * growth^k, k = 0 .. stages-1.
struct PathSchedule {
    double p0 = 2.0;
    double growth = 4.0;
    int stages = 10;
};

struct NewtonConfig {
    double grad_tol = 1e-10;
    int max_iters = 200;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    double boundary_fraction = 0.99;
};

enum class NewtonStatus { converged, max_iters, stalled };

struct NewtonResult {
    Eigen::VectorXd point;
    BarrierEval eval;
    int iters = 0;
    NewtonStatus status = NewtonStatus::converged;
    bool gradient_fallback = false; // some step fell back to -gradient
};

using ObjectiveFn = std::function<BarrierEval(const Eigen::VectorXd&)>;
using DomainFn = std::function<bool(const Eigen::VectorXd&)>;
using IterateCallback = std::function<void(const Eigen::VectorXd&)>;

/// Damped Newton minimization of a convex objective over an open convex
/// domain.  Steps are capped at boundary_fraction of the largest feasible
/// step (found by bisection on the membership predicate) and shortened by
/// Armijo backtracking.  Throws InfeasibleStart if the start point is
/// outside the domain.
NewtonResult newton_minimize(const ObjectiveFn& objective, Eigen::VectorXd start,
                             const DomainFn& domain, const NewtonConfig& cfg,
                             const IterateCallback& on_iterate = {});

struct StageRecord {
    double p = 0.0;
    Eigen::VectorXd point;        // lambda (dual) or x (primal)
    double objective = 0.0;       // phi_p or psi_p at the stage optimum
    double limit_objective = 0.0; // h_1(lambda) on the dual side, f(x) primal
    int newton_iters = 0;
    double grad_norm = 0.0;
    NewtonStatus status = NewtonStatus::converged;
};

struct SolveReport {
    std::vector<StageRecord> stages;
    double g_estimate = 0.0; // objective of the last stage
    bool fully_converged = false;
};

/// Minimize phi_{p_k} over ri D for the geometric schedule, warm-starting
/// each stage at the previous optimum.
SolveReport solve_dual_path(const ProblemInstance& prob, const PathSchedule& sched,
                            const NewtonConfig& cfg, const Eigen::VectorXd& start);

/// Maximize psi_{p_k} over the strictly feasible set, warm-started.
SolveReport solve_primal_path(const ProblemInstance& prob, const PathSchedule& sched,
                              const NewtonConfig& cfg, const Eigen::VectorXd& start);

/// Single-stage dual minimization: g_p(y) = inf_lambda phi_p(lambda; y).
double g_p_value(const ProblemInstance& prob, BarrierParameter par,
                 const NewtonConfig& cfg, const Eigen::VectorXd& start);

/// Interior dual start: lambda = t * ones with t doubled from 1 until
/// A'(t 1) > c + margin (margin = 1 + |c|_inf) for the orthant classes, or
/// until Q_lambda is positive definite for qp.  Throws InfeasibleStart if
/// doubling fails 60 times.
Eigen::VectorXd default_dual_start(const ProblemInstance& prob);

} // namespace lpbar
