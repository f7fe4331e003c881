#include "lpbar/solve.hpp"

#include <cmath>
#include <limits>

namespace lpbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest t in (0, t_cap] with x + t*d inside the domain, by bisection.
// The domain is convex, so membership along the segment is an interval.
double max_feasible_step(const DomainFn& domain, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& d, double t_cap) {
    if (domain(x + t_cap * d)) return t_cap;
    double lo = 0.0, hi = t_cap;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (domain(x + mid * d))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

Eigen::VectorXd newton_direction(const BarrierEval& eval, bool& fallback) {
    const Eigen::Index dim = eval.gradient.size();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(eval.hessian);
    bool ok = ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
    if (ok) {
        Eigen::VectorXd d = ldlt.solve(-eval.gradient);
        if (d.allFinite() && eval.gradient.dot(d) < 0.0) return d;
        ok = false;
    }
    // Regularize once, then give up and take a gradient step.
    const double reg = 1e-12 * eval.hessian.trace() / static_cast<double>(dim);
    Eigen::MatrixXd H = eval.hessian;
    H.diagonal().array() += std::max(reg, 1e-300);
    Eigen::LDLT<Eigen::MatrixXd> ldlt2(H);
    if (ldlt2.info() == Eigen::Success && ldlt2.vectorD().minCoeff() > 0.0) {
        Eigen::VectorXd d = ldlt2.solve(-eval.gradient);
        if (d.allFinite() && eval.gradient.dot(d) < 0.0) return d;
    }
    fallback = true;
    return -eval.gradient;
}

} // namespace

NewtonResult newton_minimize(const ObjectiveFn& objective, Eigen::VectorXd start,
                             const DomainFn& domain, const NewtonConfig& cfg,
                             const IterateCallback& on_iterate) {
    if (!domain(start)) throw InfeasibleStart("newton_minimize: start point not in domain");

    NewtonResult res;
    res.point = std::move(start);
    res.eval = objective(res.point);
    if (on_iterate) on_iterate(res.point);

    for (res.iters = 0; res.iters < cfg.max_iters; ++res.iters) {
        if (res.eval.gradient.norm() <= cfg.grad_tol) {
            res.status = NewtonStatus::converged;
            return res;
        }
        bool fallback = false;
        const Eigen::VectorXd d = newton_direction(res.eval, fallback);
        res.gradient_fallback = res.gradient_fallback || fallback;

        // Fraction-to-boundary cap; a full Newton step clear of the boundary
        // is left untouched.
        const double t_max =
            max_feasible_step(domain, res.point, d, 1.0 / cfg.boundary_fraction);
        const double alpha0 = std::min(1.0, cfg.boundary_fraction * t_max);
        double alpha = alpha0;
        const double slope = res.eval.gradient.dot(d);

        // Sufficient decrease up to roundoff in the objective value; near the
        // optimum the decrement drops below one ulp of the value.
        const double value_eps = 4e-16 * (1.0 + std::abs(res.eval.value));
        bool accepted = false;
        for (int bt = 0; bt < 80 && alpha > 0.0; ++bt) {
            const Eigen::VectorXd trial = res.point + alpha * d;
            const BarrierEval trial_eval = objective(trial);
            if (trial_eval.in_domain &&
                trial_eval.value <=
                    res.eval.value + cfg.armijo_c * alpha * slope + value_eps) {
                res.point = trial;
                res.eval = trial_eval;
                accepted = true;
                break;
            }
            alpha *= cfg.backtrack_factor;
        }
        if (!accepted) {
            res.status = NewtonStatus::stalled;
            return res;
        }
        if (on_iterate) on_iterate(res.point);
        // Steps at the spacing of the iterate itself cannot reduce the
        // gradient further; stop instead of cycling to max_iters.
        if (alpha * d.cwiseAbs().maxCoeff() <=
            8e-16 * (1.0 + res.point.cwiseAbs().maxCoeff())) {
            ++res.iters;
            res.status = res.eval.gradient.norm() <= cfg.grad_tol
                             ? NewtonStatus::converged
                             : NewtonStatus::stalled;
            return res;
        }
    }
    res.status = res.eval.gradient.norm() <= cfg.grad_tol ? NewtonStatus::converged
                                                          : NewtonStatus::max_iters;
    return res;
}

namespace {

SolveReport run_path(const ProblemInstance& prob, const PathSchedule& sched,
                     const NewtonConfig& cfg, const Eigen::VectorXd& start,
                     bool dual_side) {
    if (sched.stages < 1 || sched.p0 < 1.0 || sched.growth <= 1.0)
        throw InvariantViolation("path schedule requires p0 >= 1, growth > 1, stages >= 1");

    const DomainFn domain = dual_side
        ? DomainFn([&](const Eigen::VectorXd& l) { return in_dual_domain(prob, l); })
        : DomainFn([&](const Eigen::VectorXd& x) {
              return is_strictly_feasible_primal(prob, x);
          });

    SolveReport report;
    report.fully_converged = true;
    Eigen::VectorXd point = start;

    for (int k = 0; k < sched.stages; ++k) {
        const double p = sched.p0 * std::pow(sched.growth, k);
        const BarrierParameter par(p);
        const ObjectiveFn objective = dual_side
            ? ObjectiveFn([&](const Eigen::VectorXd& l) { return dual_lbf(prob, l, par); })
            : ObjectiveFn([&](const Eigen::VectorXd& x) {
                  BarrierEval e = primal_lbf(prob, x, par);
                  e.value = -e.value; // maximize psi_p
                  if (e.in_domain) {
                      e.gradient = -e.gradient;
                      e.hessian = -e.hessian;
                  }
                  return e;
              });

        NewtonResult nr = newton_minimize(objective, point, domain, cfg);
        point = nr.point;

        StageRecord rec;
        rec.p = p;
        rec.point = nr.point;
        rec.objective = dual_side ? nr.eval.value : -nr.eval.value;
        rec.limit_objective = dual_side ? dual_limit_objective(prob, nr.point)
                                        : prob.objective(nr.point);
        rec.newton_iters = nr.iters;
        rec.grad_norm = nr.eval.gradient.norm();
        rec.status = nr.status;
        if (nr.status != NewtonStatus::converged) report.fully_converged = false;
        report.stages.push_back(std::move(rec));
    }
    report.g_estimate = report.stages.back().objective;
    return report;
}

} // namespace

SolveReport solve_dual_path(const ProblemInstance& prob, const PathSchedule& sched,
                            const NewtonConfig& cfg, const Eigen::VectorXd& start) {
    return run_path(prob, sched, cfg, start, /*dual_side=*/true);
}

SolveReport solve_primal_path(const ProblemInstance& prob, const PathSchedule& sched,
                              const NewtonConfig& cfg, const Eigen::VectorXd& start) {
    return run_path(prob, sched, cfg, start, /*dual_side=*/false);
}

double g_p_value(const ProblemInstance& prob, BarrierParameter par,
                 const NewtonConfig& cfg, const Eigen::VectorXd& start) {
    const NewtonResult nr = newton_minimize(
        [&](const Eigen::VectorXd& l) { return dual_lbf(prob, l, par); }, start,
        [&](const Eigen::VectorXd& l) { return in_dual_domain(prob, l); }, cfg);
    return nr.eval.value;
}

Eigen::VectorXd default_dual_start(const ProblemInstance& prob) {
    const int m = prob.num_constraints();
    Eigen::VectorXd lambda = Eigen::VectorXd::Ones(m);
    if (prob.kind() == ProblemClass::qp) {
        for (int it = 0; it < 60; ++it) {
            if (in_dual_domain(prob, lambda)) return lambda;
            lambda *= 2.0;
        }
        throw InfeasibleStart("default_dual_start: Q_lambda not positive definite "
                              "for lambda = t*ones up to t = 2^60");
    }
    const Eigen::MatrixXd& A = prob.kind() == ProblemClass::lp
        ? prob.as<LpProblem>().A
        : prob.kind() == ProblemClass::conic ? prob.as<ConicOrthantProblem>().A
                                             : prob.as<LogMonomialProblem>().A;
    const Eigen::VectorXd& c = prob.kind() == ProblemClass::lp
        ? prob.as<LpProblem>().c
        : prob.kind() == ProblemClass::conic ? prob.as<ConicOrthantProblem>().c
                                             : prob.as<LogMonomialProblem>().c;
    const double margin = 1.0 + c.cwiseAbs().maxCoeff();
    for (int it = 0; it < 60; ++it) {
        if (((A.transpose() * lambda).array() > (c.array() + margin)).all())
            return lambda;
        lambda *= 2.0;
    }
    throw InfeasibleStart("default_dual_start: A'(t*ones) does not clear c + margin "
                          "up to t = 2^60");
}

} // namespace lpbar
