#include <doctest.h>

#include <cmath>

#include "lpbar/barriers.hpp"
#include "test_util.hpp"

using namespace lpbar;
using namespace test_util;

namespace {

const std::vector<ProblemInstance>& all_class_instances() {
    static const std::vector<ProblemInstance> v = {lp_2x2_wide(),
                                                   conic_of(lp_2x2_wide()), qp_2d(),
                                                   logmono_2d()};
    return v;
}

} // namespace

TEST_SUITE("barriers") {

TEST_CASE("universal barrier closed form") {
    Eigen::VectorXd x(3);
    x << 1.0, 1.0, 1.0;
    BarrierEval e = universal_barrier_orthant(x);
    REQUIRE(e.in_domain);
    CHECK(e.value == 0.0);
    CHECK((e.gradient - Eigen::VectorXd::Constant(3, -1.0)).norm() == 0.0);
    CHECK((e.hessian - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);

    Eigen::VectorXd xe(1);
    xe << std::exp(1.0);
    CHECK(universal_barrier_orthant(xe).value == doctest::Approx(-1.0).epsilon(1e-15));

    Eigen::VectorXd neg(2);
    neg << 1.0, -0.5;
    CHECK_FALSE(universal_barrier_orthant(neg).in_domain);
    CHECK(universal_barrier_orthant(neg).value ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("universal barrier cone scaling") {
    Eigen::VectorXd x(2);
    x << 1.0, 2.0;
    const double lhs = universal_barrier_orthant(3.0 * x).value;
    const double rhs = universal_barrier_orthant(x).value - 2.0 * std::log(3.0);
    CHECK(rel_err(lhs, rhs) <= 1e-12);

    // random scalings stay within 1e-12 relative
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.1, 4.0);
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd z(3);
        z << u(rng), u(rng), u(rng);
        const double s = u(rng);
        CHECK(rel_err(universal_barrier_orthant(s * z).value,
                      universal_barrier_orthant(z).value - 3.0 * std::log(s)) <=
              1e-12);
    }
}

TEST_CASE("primal lbf values on the lp 1d instance") {
    const ProblemInstance lp = lp_1d();
    Eigen::VectorXd x(1);
    x << 1.0;
    CHECK(primal_lbf(lp, x, BarrierParameter(1.0)).value ==
          doctest::Approx(1.0).epsilon(1e-15)); // unit slacks

    // psi_p -> f(x) pointwise as p grows
    Eigen::VectorXd x2(1);
    x2 << 1.5;
    const double f = 1.5;
    double prev = std::abs(primal_lbf(lp, x2, BarrierParameter(10.0)).value - f);
    for (double p : {1e3, 1e6}) {
        const double gap = std::abs(primal_lbf(lp, x2, BarrierParameter(p)).value - f);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev <= 1e-5);

    CHECK_FALSE(primal_lbf(lp, Eigen::VectorXd::Constant(1, 2.5),
                           BarrierParameter(2.0))
                    .in_domain);
}

TEST_CASE("sup psi_p increases toward g via golden-section oracle") {
    const ProblemInstance lp = lp_1d();
    auto sup_psi = [&](double p) {
        return golden_section_max(
            [&](double t) {
                Eigen::VectorXd x(1);
                x << t;
                const BarrierEval e = primal_lbf(lp, x, BarrierParameter(p));
                return e.in_domain ? e.value : -1e300;
            },
            1e-9, 2.0 - 1e-9);
    };
    const double gap1 = 2.0 - sup_psi(1.0);
    const double gap10 = 2.0 - sup_psi(10.0);
    const double gap100 = 2.0 - sup_psi(100.0);
    CHECK(gap1 > gap10);
    CHECK(gap10 > gap100);
    CHECK(gap100 > 0.0);
}

TEST_CASE("dual lbf closed form on the lp 1d instance") {
    const ProblemInstance lp = lp_1d();
    Eigen::VectorXd lam(1);
    lam << 2.0;
    const BarrierEval e = dual_lbf(lp, lam, BarrierParameter(1.0));
    REQUIRE(e.in_domain);
    CHECK(e.value == doctest::Approx(4.0 - std::log(2.0)).epsilon(1e-15));

    lam << 1.0; // boundary A'lambda = c
    CHECK_FALSE(dual_lbf(lp, lam, BarrierParameter(1.0)).in_domain);
    CHECK(dual_lbf(lp, lam, BarrierParameter(1.0)).value ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("logmonomial with b = 0 reduces exactly to lp") {
    const ProblemInstance lp = lp_2x2_wide();
    const auto& d = lp.as<LpProblem>();
    const ProblemInstance lm{
        LogMonomialProblem{d.A, d.c, Eigen::VectorXd::Zero(2), d.y}};
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int t = 0; t < 25; ++t) {
        Eigen::VectorXd lam(2);
        lam << u(rng), u(rng);
        if (!in_dual_domain(lp, lam)) continue;
        const double p = 1.0 + 20.0 * u(rng);
        const BarrierEval a = dual_lbf(lp, lam, BarrierParameter(p));
        const BarrierEval b = dual_lbf(lm, lam, BarrierParameter(p));
        CHECK(std::abs(a.value - b.value) <= 1e-12);
        CHECK((a.gradient - b.gradient).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(std::abs(dual_limit_objective(lp, lam) -
                       dual_limit_objective(lm, lam)) <= 1e-12);
    }
}

TEST_CASE("conic class agrees with lp exactly") {
    const ProblemInstance lp = lp_2x2_wide();
    const ProblemInstance co = conic_of(lp);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int t = 0; t < 25; ++t) {
        Eigen::VectorXd lam(2);
        lam << u(rng), u(rng);
        if (!in_dual_domain(lp, lam)) continue;
        const double p = 1.0 + 20.0 * u(rng);
        const BarrierEval a = dual_lbf(lp, lam, BarrierParameter(p));
        const BarrierEval b = dual_lbf(co, lam, BarrierParameter(p));
        CHECK(std::abs(a.value - b.value) <= 1e-12);
        CHECK((a.hessian - b.hessian).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("dual limit objective closed forms") {
    Eigen::VectorXd lam(1);
    lam << 1.0;
    CHECK(dual_limit_objective(lp_1d(), lam) == 2.0); // lambda'y

    // qp 1d: h1(1) = -2 + 1 = -1 equals the primal optimum (hand KKT)
    CHECK(dual_limit_objective(qp_1d(), lam) == doctest::Approx(-1.0).epsilon(1e-14));

    // outside the closure of D
    Eigen::VectorXd neg(1);
    neg << -0.5;
    CHECK(dual_limit_objective(lp_1d(), neg) ==
          std::numeric_limits<double>::infinity());
    Eigen::VectorXd low(1);
    low << 0.5; // A'lambda < c for lp_1d
    CHECK(dual_limit_objective(lp_1d(), low) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("dual lbf converges to the limit objective (sequence oracle)") {
    // log-monomial with y = e: h1(lambda) = lambda e - ln(lambda e)
    const ProblemInstance lm = logmono_1d_e();
    Eigen::VectorXd lam(1);
    lam << 1.0 / std::exp(1.0);
    const double h1 = dual_limit_objective(lm, lam);
    CHECK(h1 == doctest::Approx(1.0).epsilon(1e-14)); // minimum value = g
    double prev = std::abs(dual_lbf(lm, lam, BarrierParameter(1e2)).value - h1);
    for (double p : {1e4, 1e6}) {
        const double err = std::abs(dual_lbf(lm, lam, BarrierParameter(p)).value - h1);
        CHECK(err * 10.0 < prev); // shrinks at least like ln p / p
        prev = err;
    }
}

TEST_CASE("pointwise limit bound with C fitted at p=10") {
    // test points with sum of slack/multiplier logs above m+n, where the
    // p=10 ratio dominates the later ones
    const ProblemInstance lp = lp_2x2_wide();
    Eigen::VectorXd lam(2);
    lam << 3.0, 3.0;
    REQUIRE(in_dual_domain(lp, lam));
    const double h1 = dual_limit_objective(lp, lam);
    auto err = [&](double p) {
        return std::abs(dual_lbf(lp, lam, BarrierParameter(p)).value - h1);
    };
    const double C = err(10.0) * 10.0 / (1.0 + std::log(10.0));
    for (double p : {1e2, 1e3, 1e4})
        CHECK(err(p) <= C * (1.0 + std::log(p)) / p);

    const ProblemInstance qp = qp_2d();
    Eigen::VectorXd lq(2);
    lq << 6.0, 6.0;
    REQUIRE(in_dual_domain(qp, lq));
    const double h1q = dual_limit_objective(qp, lq);
    auto errq = [&](double p) {
        return std::abs(dual_lbf(qp, lq, BarrierParameter(p)).value - h1q);
    };
    const double Cq = errq(10.0) * 10.0 / (1.0 + std::log(10.0));
    for (double p : {1e2, 1e3, 1e4})
        CHECK(errq(p) <= Cq * (1.0 + std::log(p)) / p);
}

TEST_CASE("gradients and hessians match finite differences") {
    for (const ProblemInstance& prob : all_class_instances()) {
        const BarrierParameter par(7.0);
        auto value = [&](const Eigen::VectorXd& l) {
            return dual_lbf(prob, l, par).value;
        };
        auto grad = [&](const Eigen::VectorXd& l) {
            return Eigen::VectorXd(dual_lbf(prob, l, par).gradient);
        };
        for (const Eigen::VectorXd& lam : fd_safe_dual_points(prob, 20, 101)) {
            const BarrierEval e = dual_lbf(prob, lam, par);
            REQUIRE(e.in_domain);
            CHECK(max_rel_err(fd_gradient(value, lam), e.gradient) <= 1e-6);
            CHECK(max_rel_err(fd_hessian(grad, lam), e.hessian) <= 1e-4);
        }

        auto pvalue = [&](const Eigen::VectorXd& x) {
            return primal_lbf(prob, x, par).value;
        };
        auto pgrad = [&](const Eigen::VectorXd& x) {
            return Eigen::VectorXd(primal_lbf(prob, x, par).gradient);
        };
        for (const Eigen::VectorXd& x : fd_safe_primal_points(prob, 20, 202)) {
            const BarrierEval e = primal_lbf(prob, x, par);
            REQUIRE(e.in_domain);
            CHECK(max_rel_err(fd_gradient(pvalue, x), e.gradient) <= 1e-6);
            CHECK(max_rel_err(fd_hessian(pgrad, x), e.hessian) <= 1e-4);
        }
    }
}

TEST_CASE("dual hessians are convex and symmetric") {
    for (const ProblemInstance& prob : all_class_instances()) {
        for (double p : {1.0, 5.0, 40.0}) {
            for (const Eigen::VectorXd& lam : fd_safe_dual_points(prob, 8, 777)) {
                const BarrierEval e = dual_lbf(prob, lam, BarrierParameter(p));
                REQUIRE(e.in_domain);
                const double scale = std::max(1.0, e.hessian.cwiseAbs().maxCoeff());
                CHECK((e.hessian - e.hessian.transpose()).cwiseAbs().maxCoeff() <=
                      1e-12 * scale);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian);
                CHECK(es.eigenvalues().minCoeff() >=
                      -1e-8 * e.hessian.trace() / prob.num_constraints());
            }
        }
    }
}

TEST_CASE("dual lbf blows up along every boundary face") {
    auto strictly_increasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] > v[i - 1])) return false;
        return true;
    };
    const BarrierParameter par(3.0);

    std::vector<double> seq;
    for (int t = 1; t <= 12; ++t) { // lambda_j -> 0
        Eigen::VectorXd lam(1);
        lam << std::pow(10.0, -t);
        seq.push_back(dual_lbf(lp_neg_1d(), lam, par).value);
    }
    CHECK(strictly_increasing(seq));

    seq.clear();
    for (int t = 1; t <= 12; ++t) { // A_k'lambda -> c_k
        Eigen::VectorXd lam(1);
        lam << 1.0 + std::pow(10.0, -t);
        seq.push_back(dual_lbf(lp_1d(), lam, par).value);
    }
    CHECK(strictly_increasing(seq));

    QpProblem qp; // Q_lambda -> singular with lambda interior
    qp.Q = {-Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1),
            Eigen::MatrixXd::Zero(1, 1)};
    qp.c = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1),
            Eigen::VectorXd::Ones(1)};
    qp.y = Eigen::VectorXd::Ones(2);
    const ProblemInstance qpp{ProblemData{qp}};
    seq.clear();
    for (int t = 1; t <= 12; ++t) {
        Eigen::VectorXd lam(2);
        lam << 1.0 + std::pow(10.0, -t), 1.0;
        seq.push_back(dual_lbf(qpp, lam, par).value);
    }
    CHECK(strictly_increasing(seq));
}

TEST_CASE("weak duality against the limit objective") {
    for (const ProblemInstance& prob : all_class_instances()) {
        const auto xs = fd_safe_primal_points(prob, 10, 31);
        const auto ls = fd_safe_dual_points(prob, 10, 32);
        for (const auto& x : xs)
            for (const auto& l : ls)
                CHECK(prob.objective(x) <= dual_limit_objective(prob, l) + 1e-9);
    }
}

TEST_CASE("barrier gap") {
    const ProblemInstance lp = lp_1d();
    Eigen::VectorXd x(1);
    x << 1.0;
    CHECK(barrier_gap(lp, x, BarrierParameter(5.0)) == 0.0); // unit slacks

    x << 1.5;
    const double g1 = barrier_gap(lp, x, BarrierParameter(1.0));
    const double g10 = barrier_gap(lp, x, BarrierParameter(10.0));
    const double g100 = barrier_gap(lp, x, BarrierParameter(100.0));
    CHECK(g1 == doctest::Approx(10.0 * g10).epsilon(1e-12));
    CHECK(g10 == doctest::Approx(10.0 * g100).epsilon(1e-12));

    x << 1.9; // near the boundary
    CHECK(barrier_gap(lp, x, BarrierParameter(10.0)) ==
          doctest::Approx(0.1 * (-std::log(1.9) - std::log(0.1))).epsilon(1e-14));
    CHECK(barrier_gap(lp, x, BarrierParameter(10.0)) > 0.0);

    x << 2.5;
    CHECK_THROWS_AS(barrier_gap(lp, x, BarrierParameter(2.0)), DomainError);

    // f - psi_p identity on every class
    for (const ProblemInstance& prob : all_class_instances()) {
        for (const Eigen::VectorXd& xs : fd_safe_primal_points(prob, 5, 99)) {
            const double gap = barrier_gap(prob, xs, BarrierParameter(7.0));
            const double psi = primal_lbf(prob, xs, BarrierParameter(7.0)).value;
            CHECK(rel_err(prob.objective(xs) - psi, gap) <= 1e-12);
        }
    }
}

TEST_CASE("barrier parameter validation") {
    CHECK_THROWS_AS(BarrierParameter(0.5), InvariantViolation);
    CHECK_THROWS_AS(BarrierParameter(std::numeric_limits<double>::infinity()),
                    InvariantViolation);
    CHECK_NOTHROW(BarrierParameter(1.0));
}

} // TEST_SUITE
