#pragma once

#include <Eigen/Dense>
#include <optional>

#include "lpbar/problem.hpp"

namespace lpbar {

enum class OracleMethod { vertex_enumeration, grid_search, closed_form_1d };

/// Ground-truth optimum computed independently of the barrier machinery.
struct GroundTruth {
    double g_value = 0.0; // +inf unbounded, -inf infeasible
    std::optional<Eigen::VectorXd> maximizer;
    OracleMethod method = OracleMethod::vertex_enumeration;
};

/// Exact LP optimum by enumerating all basic points of {Ax <= y, x >= 0}
/// (works on conic-orthant data too).  Detects unboundedness through the
/// vertices of the normalized recession cone.  Throws TooLarge when
/// n + m > 12.
GroundTruth lp_vertex_optimum(const ProblemInstance& prob);

/// Best feasible node of a dense grid over box (intersected with X).
/// Throws OptimumOnBoundary when the argmax touches a user-supplied box
/// face; n <= 2.
GroundTruth grid_search_optimum(const ProblemInstance& prob,
                                const Eigen::VectorXd& box_lo,
                                const Eigen::VectorXd& box_hi, int nodes_per_axis);

/// Grid maximum of f(x) - lambda'w(x) over X (= -g*(lambda) for lambda >= 0).
double gstar_numeric(const ProblemInstance& prob, const Eigen::VectorXd& lambda,
                     const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                     int nodes_per_axis);

struct DualityCheck {
    bool ok = false;
    double margin = 0.0; // dual_limit_objective(lambda) - f(x)
};

/// Weak duality: f(x) <= h_1(lambda) + 1e-9 for feasible x, interior lambda.
DualityCheck check_weak_duality(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& lambda);

/// Rejection-sample strictly feasible primal points uniformly from the box.
/// May return fewer than count when max_draws runs out; callers skip the
/// property with a warning in that case.
std::vector<Eigen::VectorXd> sample_feasible_primal(const ProblemInstance& prob,
                                                    const Eigen::VectorXd& box_lo,
                                                    const Eigen::VectorXd& box_hi,
                                                    int count, unsigned seed,
                                                    long max_draws = 1000000);

/// Rejection-sample interior dual points uniformly from (0, lambda_hi]^m.
std::vector<Eigen::VectorXd> sample_interior_dual(const ProblemInstance& prob,
                                                  double lambda_hi, int count,
                                                  unsigned seed,
                                                  long max_draws = 1000000);

} // namespace lpbar
