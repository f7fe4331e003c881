#include "lpbar/oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lpbar/barriers.hpp"

namespace lpbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;

const Eigen::MatrixXd& linear_A(const ProblemInstance& prob) {
    if (prob.kind() == ProblemClass::lp) return prob.as<LpProblem>().A;
    return prob.as<ConicOrthantProblem>().A;
}

const Eigen::VectorXd& linear_c(const ProblemInstance& prob) {
    if (prob.kind() == ProblemClass::lp) return prob.as<LpProblem>().c;
    return prob.as<ConicOrthantProblem>().c;
}

// All basic points of {Gx <= h}: solve every nonsingular n-of-rows system
// and keep the feasible solutions.
std::vector<Eigen::VectorXd> enumerate_basic_points(const Eigen::MatrixXd& G,
                                                    const Eigen::VectorXd& h) {
    const int rows = static_cast<int>(G.rows());
    const int n = static_cast<int>(G.cols());
    std::vector<Eigen::VectorXd> points;
    std::vector<int> pick(n);
    for (int i = 0; i < n; ++i) pick[i] = i;
    while (true) {
        Eigen::MatrixXd B(n, n);
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            B.row(i) = G.row(pick[i]);
            rhs(i) = h(pick[i]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        if (lu.isInvertible()) {
            const Eigen::VectorXd x = lu.solve(rhs);
            if (((G * x - h).array() <= kFeasTol).all()) points.push_back(x);
        }
        // next n-combination of {0..rows-1}
        int i = n - 1;
        while (i >= 0 && pick[i] == rows - n + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return points;
}

} // namespace

GroundTruth lp_vertex_optimum(const ProblemInstance& prob) {
    if (prob.kind() != ProblemClass::lp && prob.kind() != ProblemClass::conic)
        throw InvariantViolation("lp_vertex_optimum expects lp or conic data");
    const int m = prob.num_constraints();
    const int n = prob.num_variables();
    if (n + m > 12)
        throw TooLarge("lp_vertex_optimum: n + m = " + std::to_string(n + m) +
                       " exceeds the enumeration cap 12");
    const Eigen::MatrixXd& A = linear_A(prob);
    const Eigen::VectorXd& c = linear_c(prob);
    const Eigen::VectorXd& y = prob.rhs();

    Eigen::MatrixXd G(m + n, n);
    G.topRows(m) = A;
    G.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd h(m + n);
    h.head(m) = y;
    h.tail(n).setZero();

    GroundTruth best;
    best.method = OracleMethod::vertex_enumeration;
    best.g_value = -kInf; // infeasible until a vertex shows up
    for (const Eigen::VectorXd& x : enumerate_basic_points(G, h)) {
        const double v = c.dot(x);
        if (v > best.g_value) {
            best.g_value = v;
            best.maximizer = x;
        }
    }
    if (best.g_value == -kInf) return best;

    // Improving feasible ray => unbounded.  Rays are the nonzero vertices
    // of the normalized recession cone {Ad <= 0, d >= 0, sum d <= 1}.
    Eigen::MatrixXd Gr(m + n + 1, n);
    Gr.topRows(m) = A;
    Gr.middleRows(m, n) = -Eigen::MatrixXd::Identity(n, n);
    Gr.bottomRows(1) = Eigen::MatrixXd::Ones(1, n);
    Eigen::VectorXd hr = Eigen::VectorXd::Zero(m + n + 1);
    hr(m + n) = 1.0;
    for (const Eigen::VectorXd& d : enumerate_basic_points(Gr, hr)) {
        if (c.dot(d) > kFeasTol) {
            best.g_value = kInf;
            best.maximizer.reset();
            return best;
        }
    }
    return best;
}

GroundTruth grid_search_optimum(const ProblemInstance& prob,
                                const Eigen::VectorXd& box_lo,
                                const Eigen::VectorXd& box_hi, int nodes_per_axis) {
    const int n = prob.num_variables();
    if (n > 2) throw TooLarge("grid_search_optimum supports n <= 2");
    if (box_lo.size() != n || box_hi.size() != n)
        throw DimensionMismatch("grid_search_optimum: box dimension mismatch");
    if (nodes_per_axis < 2) throw InvariantViolation("nodes_per_axis must be >= 2");

    // Clip the box to X; clipped faces are genuine feasible-set boundary,
    // not a too-small search box.
    Eigen::VectorXd lo = box_lo;
    std::vector<bool> clipped(n, false);
    if (prob.kind() != ProblemClass::qp) {
        for (int a = 0; a < n; ++a)
            if (lo(a) < 0.0) {
                lo(a) = 0.0;
                clipped[a] = true;
            }
    }
    const Eigen::VectorXd& y = prob.rhs();

    GroundTruth best;
    best.method = OracleMethod::grid_search;
    best.g_value = -kInf;
    std::vector<int> best_idx;
    const long total = n == 1 ? nodes_per_axis
                              : static_cast<long>(nodes_per_axis) * nodes_per_axis;
    Eigen::VectorXd x(n);
    std::vector<int> idx(n);
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % nodes_per_axis);
            rem /= nodes_per_axis;
            x(a) = lo(a) + (box_hi(a) - lo(a)) * idx[a] / (nodes_per_axis - 1.0);
        }
        if (((prob.constraint_values(x) - y).array() > 0.0).any()) continue;
        const double v = prob.objective(x);
        if (v > best.g_value) {
            best.g_value = v;
            best.maximizer = x;
            best_idx = idx;
        }
    }
    if (best.maximizer) {
        for (int a = 0; a < n; ++a) {
            const bool at_lo = best_idx[a] == 0 && !clipped[a];
            const bool at_hi = best_idx[a] == nodes_per_axis - 1;
            if (at_lo || at_hi)
                throw OptimumOnBoundary(
                    "grid_search_optimum: optimum on the box boundary along axis " +
                    std::to_string(a) + "; enlarge the box");
        }
    }
    return best;
}

double gstar_numeric(const ProblemInstance& prob, const Eigen::VectorXd& lambda,
                     const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                     int nodes_per_axis) {
    const int n = prob.num_variables();
    if (n > 2) throw TooLarge("gstar_numeric supports n <= 2");
    if (lambda.minCoeff() < 0.0) return kInf; // -g*(lambda) = +inf off the cone

    Eigen::VectorXd lo = box_lo;
    std::vector<bool> clipped(n, false);
    if (prob.kind() != ProblemClass::qp) {
        for (int a = 0; a < n; ++a)
            if (lo(a) < 0.0) {
                lo(a) = 0.0;
                clipped[a] = true;
            }
    }

    double best = -kInf;
    std::vector<int> best_idx;
    const long total = n == 1 ? nodes_per_axis
                              : static_cast<long>(nodes_per_axis) * nodes_per_axis;
    Eigen::VectorXd x(n);
    std::vector<int> idx(n);
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % nodes_per_axis);
            rem /= nodes_per_axis;
            x(a) = lo(a) + (box_hi(a) - lo(a)) * idx[a] / (nodes_per_axis - 1.0);
        }
        const double v = prob.objective(x) - lambda.dot(prob.constraint_values(x));
        if (v > best) {
            best = v;
            best_idx = idx;
        }
    }
    for (int a = 0; a < n && !best_idx.empty(); ++a) {
        const bool at_lo = best_idx[a] == 0 && !clipped[a];
        const bool at_hi = best_idx[a] == nodes_per_axis - 1;
        if (at_lo || at_hi)
            throw OptimumOnBoundary(
                "gstar_numeric: maximum on the box boundary along axis " +
                std::to_string(a) + "; enlarge the box");
    }
    return best;
}

DualityCheck check_weak_duality(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& lambda) {
    DualityCheck out;
    out.margin = dual_limit_objective(prob, lambda) - prob.objective(x);
    out.ok = out.margin >= -1e-9;
    return out;
}

std::vector<Eigen::VectorXd> sample_feasible_primal(const ProblemInstance& prob,
                                                    const Eigen::VectorXd& box_lo,
                                                    const Eigen::VectorXd& box_hi,
                                                    int count, unsigned seed,
                                                    long max_draws) {
    const int n = prob.num_variables();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    Eigen::VectorXd x(n);
    for (long draw = 0; draw < max_draws && static_cast<int>(out.size()) < count;
         ++draw) {
        for (int a = 0; a < n; ++a)
            x(a) = box_lo(a) + (box_hi(a) - box_lo(a)) * unit(rng);
        if (prob.kind() != ProblemClass::qp && x.minCoeff() <= 0.0) continue;
        if (((prob.constraint_values(x) - prob.rhs()).array() > 0.0).any()) continue;
        out.push_back(x);
    }
    return out;
}

std::vector<Eigen::VectorXd> sample_interior_dual(const ProblemInstance& prob,
                                                  double lambda_hi, int count,
                                                  unsigned seed, long max_draws) {
    const int m = prob.num_constraints();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    Eigen::VectorXd lam(m);
    for (long draw = 0; draw < max_draws && static_cast<int>(out.size()) < count;
         ++draw) {
        for (int j = 0; j < m; ++j) lam(j) = lambda_hi * std::max(unit(rng), 1e-12);
        if (in_dual_domain(prob, lam)) out.push_back(lam);
    }
    return out;
}

} // namespace lpbar
