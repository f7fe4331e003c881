#include <doctest.h>

#include <cmath>

#include "lpbar/solve.hpp"
#include "test_util.hpp"

using namespace lpbar;
using namespace test_util;

TEST_SUITE("solve") {

TEST_CASE("exact newton solves a quadratic bowl in one step") {
    auto bowl = [](const Eigen::VectorXd& l) {
        BarrierEval e;
        e.in_domain = true;
        const Eigen::VectorXd d = l - Eigen::VectorXd::Ones(l.size());
        e.value = d.squaredNorm();
        e.gradient = 2.0 * d;
        e.hessian = 2.0 * Eigen::MatrixXd::Identity(l.size(), l.size());
        return e;
    };
    auto everywhere = [](const Eigen::VectorXd&) { return true; };
    const NewtonResult r = newton_minimize(bowl, Eigen::VectorXd::Constant(1, 3.0),
                                           everywhere, NewtonConfig{});
    CHECK(r.status == NewtonStatus::converged);
    CHECK(r.iters == 1);
    CHECK(std::abs(r.point(0) - 1.0) <= 1e-14);
}

TEST_CASE("newton minimizer of phi_1 matches the bisection oracle") {
    const ProblemInstance lp = lp_1d();
    // d phi_1 / d lambda = 2 - 1/(lambda-1) - 1/lambda
    const double root = bisect_root(
        [](double l) { return 2.0 - 1.0 / (l - 1.0) - 1.0 / l; }, 1.0 + 1e-12, 10.0);
    const BarrierParameter p1(1.0);
    const NewtonResult r = newton_minimize(
        [&](const Eigen::VectorXd& l) { return dual_lbf(lp, l, p1); },
        Eigen::VectorXd::Constant(1, 3.0),
        [&](const Eigen::VectorXd& l) { return in_dual_domain(lp, l); },
        NewtonConfig{});
    CHECK(r.status == NewtonStatus::converged);
    CHECK(std::abs(r.point(0) - root) <= 1e-10);
    CHECK(std::abs(root - (1.0 + 1.0 / std::sqrt(2.0))) <= 1e-12);
}

TEST_CASE("indefinite hessian falls back to gradient steps") {
    // convex value/gradient with a deliberately indefinite Hessian: the
    // factorization is rejected and the flagged gradient fallback still
    // reaches the minimizer
    auto broken = [](const Eigen::VectorXd& l) {
        BarrierEval e;
        e.in_domain = true;
        e.value = (l(0) - 1.0) * (l(0) - 1.0);
        e.gradient = Eigen::VectorXd::Constant(1, 2.0 * (l(0) - 1.0));
        e.hessian = Eigen::MatrixXd::Constant(1, 1, -1.0);
        return e;
    };
    auto everywhere = [](const Eigen::VectorXd&) { return true; };
    NewtonConfig cfg;
    cfg.grad_tol = 1e-8;
    const NewtonResult r =
        newton_minimize(broken, Eigen::VectorXd::Constant(1, 3.0), everywhere, cfg);
    CHECK(r.gradient_fallback);
    CHECK(r.status == NewtonStatus::converged);
    CHECK(std::abs(r.point(0) - 1.0) <= 1e-7);
}

TEST_CASE("iteration cap returns the best iterate with a flag") {
    const ProblemInstance lp = lp_2x2_small();
    NewtonConfig cfg;
    cfg.max_iters = 2;
    const BarrierParameter par(8.0);
    const NewtonResult r = newton_minimize(
        [&](const Eigen::VectorXd& l) { return dual_lbf(lp, l, par); },
        default_dual_start(lp),
        [&](const Eigen::VectorXd& l) { return in_dual_domain(lp, l); }, cfg);
    CHECK(r.status == NewtonStatus::max_iters);
    CHECK(r.iters == 2);
    CHECK(in_dual_domain(lp, r.point));
    CHECK(r.eval.value <=
          dual_lbf(lp, default_dual_start(lp), par).value); // made progress
}

TEST_CASE("infeasible start throws") {
    const ProblemInstance lp = lp_1d();
    CHECK_THROWS_AS(
        newton_minimize(
            [&](const Eigen::VectorXd& l) { return dual_lbf(lp, l, BarrierParameter(1.0)); },
            Eigen::VectorXd::Constant(1, 0.5),
            [&](const Eigen::VectorXd& l) { return in_dual_domain(lp, l); },
            NewtonConfig{}),
        InfeasibleStart);
}

TEST_CASE("dual path converges to the oracle optimum") {
    const PathSchedule sched;
    const NewtonConfig cfg;

    SolveReport r = solve_dual_path(lp_1d(), sched, cfg, default_dual_start(lp_1d()));
    CHECK(r.fully_converged);
    CHECK(std::abs(r.g_estimate - 2.0) <= 1e-3);
    REQUIRE(r.stages.size() == 10);
    for (std::size_t k = 1; k < r.stages.size(); ++k)
        CHECK(r.stages[k].p == doctest::Approx(4.0 * r.stages[k - 1].p));
    for (const StageRecord& st : r.stages)
        if (st.status == NewtonStatus::converged) CHECK(st.grad_norm <= cfg.grad_tol);

    SolveReport rq = solve_dual_path(qp_1d(), sched, cfg, default_dual_start(qp_1d()));
    CHECK(std::abs(rq.g_estimate - (-1.0)) <= 1e-3);

    SolveReport rl =
        solve_dual_path(logmono_1d(), sched, cfg, default_dual_start(logmono_1d()));
    CHECK(std::abs(rl.g_estimate - 0.0) <= 2e-3);
}

TEST_CASE("primal path climbs to the vertex") {
    const PathSchedule sched;
    const NewtonConfig cfg;
    const ProblemInstance lp = lp_1d();
    SolveReport r =
        solve_primal_path(lp, sched, cfg, Eigen::VectorXd::Constant(1, 0.5));
    CHECK(r.fully_converged);
    for (std::size_t k = 1; k < r.stages.size(); ++k)
        CHECK(r.stages[k].point(0) > r.stages[k - 1].point(0));
    CHECK(r.stages.back().limit_objective >= 2.0 - 1e-3); // f at the last iterate

    // barrier gap sanity at the final iterate
    const double pf = r.stages.back().p;
    const double gap = barrier_gap(lp, r.stages.back().point, BarrierParameter(pf));
    CHECK(gap >= 0.0);
    CHECK(gap <= 2.0 * std::log(10.0 * pf) / pf);
}

TEST_CASE("primal and dual stage values sandwich through the limit objective") {
    const PathSchedule sched;
    const NewtonConfig cfg;
    const ProblemInstance lp = lp_1d();
    SolveReport dual = solve_dual_path(lp, sched, cfg, default_dual_start(lp));
    SolveReport primal =
        solve_primal_path(lp, sched, cfg, Eigen::VectorXd::Constant(1, 0.5));
    REQUIRE(dual.stages.size() == primal.stages.size());
    for (std::size_t k = 0; k < dual.stages.size(); ++k) {
        const double f = primal.stages[k].limit_objective;
        const double h1 = dual.stages[k].limit_objective;
        CHECK(f <= h1 + 1e-12);
    }
}

TEST_CASE("every iterate stays in the domain") {
    const ProblemInstance lp = lp_2x2_small();
    const BarrierParameter par(32.0);
    int seen = 0;
    newton_minimize(
        [&](const Eigen::VectorXd& l) { return dual_lbf(lp, l, par); },
        default_dual_start(lp),
        [&](const Eigen::VectorXd& l) { return in_dual_domain(lp, l); },
        NewtonConfig{}, [&](const Eigen::VectorXd& l) {
            ++seen;
            CHECK(in_dual_domain(lp, l));
        });
    CHECK(seen >= 2);
}

TEST_CASE("warm-started stages stay cheap") {
    const PathSchedule sched;
    const NewtonConfig cfg;
    const std::vector<ProblemInstance> probs = {lp_1d(), lp_2x2_small(), qp_1d(),
                                                logmono_1d()};
    for (const ProblemInstance& prob : probs) {
        SolveReport r = solve_dual_path(prob, sched, cfg, default_dual_start(prob));
        for (std::size_t k = 1; k < r.stages.size(); ++k)
            CHECK(r.stages[k].newton_iters <= cfg.max_iters);
    }
}

TEST_CASE("lp convergence rate against the stage-1 fitted bound") {
    // the fitted-bound protocol is sound when the stage-1 relaxation is the
    // loosest in ratio terms; small right-hand sides give that shape
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    Eigen::VectorXd c(1), y(1);
    c << 1.0;
    y << 0.1;
    const ProblemInstance lp{LpProblem{A, c, y}};
    const PathSchedule sched;
    SolveReport r = solve_dual_path(lp, sched, NewtonConfig{}, default_dual_start(lp));
    REQUIRE(r.fully_converged);
    const double g = 0.1;
    const double err1 = std::abs(r.stages[0].objective - g);
    const double C = err1 * r.stages[0].p / (1.0 + std::log(r.stages[0].p));
    for (std::size_t k = 1; k < r.stages.size(); ++k) {
        const double err = std::abs(r.stages[k].objective - g);
        CHECK(err <= C * (1.0 + std::log(r.stages[k].p)) / r.stages[k].p);
    }

    SolveReport r2 =
        solve_dual_path(lp_2x2_small(), sched, NewtonConfig{},
                        default_dual_start(lp_2x2_small()));
    const double g2 = 0.6;
    const double C2 = std::abs(r2.stages[0].objective - g2) * r2.stages[0].p /
                      (1.0 + std::log(r2.stages[0].p));
    for (std::size_t k = 1; k < r2.stages.size(); ++k)
        CHECK(std::abs(r2.stages[k].objective - g2) <=
              C2 * (1.0 + std::log(r2.stages[k].p)) / r2.stages[k].p);
}

TEST_CASE("g_p_value single stage") {
    const ProblemInstance lp = lp_1d();
    const double root = bisect_root(
        [](double l) { return 2.0 - 1.0 / (l - 1.0) - 1.0 / l; }, 1.0 + 1e-12, 10.0);
    const double oracle = 2.0 * root - std::log(root - 1.0) - std::log(root);
    const double got =
        g_p_value(lp, BarrierParameter(1.0), NewtonConfig{}, default_dual_start(lp));
    CHECK(std::abs(got - oracle) <= 1e-9);

    // b = 0 log-monomial matches lp bit for bit on the same schedule
    const auto& d = lp.as<LpProblem>();
    const ProblemInstance lm{
        LogMonomialProblem{d.A, d.c, Eigen::VectorXd::Zero(1), d.y}};
    for (double p : {1.0, 7.0, 300.0}) {
        const double a =
            g_p_value(lp, BarrierParameter(p), NewtonConfig{}, default_dual_start(lp));
        const double b =
            g_p_value(lm, BarrierParameter(p), NewtonConfig{}, default_dual_start(lm));
        CHECK(std::abs(a - b) <= 1e-12);
    }
}

TEST_CASE("reports are deterministic") {
    const PathSchedule sched;
    const NewtonConfig cfg;
    const ProblemInstance lp = lp_2x2_small();
    SolveReport a = solve_dual_path(lp, sched, cfg, default_dual_start(lp));
    SolveReport b = solve_dual_path(lp, sched, cfg, default_dual_start(lp));
    REQUIRE(a.stages.size() == b.stages.size());
    for (std::size_t k = 0; k < a.stages.size(); ++k) {
        CHECK(a.stages[k].objective == b.stages[k].objective);
        CHECK((a.stages[k].point - b.stages[k].point).norm() == 0.0);
        CHECK(a.stages[k].newton_iters == b.stages[k].newton_iters);
    }
}

TEST_CASE("default dual start") {
    for (const ProblemInstance& prob :
         {lp_1d(), lp_2x2_small(), qp_1d(), qp_2d(), logmono_1d()})
        CHECK(in_dual_domain(prob, default_dual_start(prob)));

    // Q_lambda can never become positive definite here
    QpProblem qp;
    qp.Q = {-Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Zero(1, 1)};
    qp.c = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
    qp.y = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_AS(default_dual_start(ProblemInstance(ProblemData{qp})),
                    InfeasibleStart);
}

TEST_CASE("schedule validation") {
    const ProblemInstance lp = lp_1d();
    PathSchedule bad;
    bad.growth = 1.0;
    CHECK_THROWS_AS(solve_dual_path(lp, bad, NewtonConfig{}, default_dual_start(lp)),
                    InvariantViolation);
}

} // TEST_SUITE
