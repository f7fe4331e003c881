#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lpbar/errors.hpp"

namespace lpbar {

// The four supported program classes.  All are maximization problems
//   sup_x { f(x) : w(x) <= y, x in X }
// with X = R^n_+ for lp / conic / logmonomial and X = R^n for qp.
enum class ProblemClass { lp, conic, qp, logmonomial };

/// maximize c'x  s.t.  Ax <= y, x >= 0
struct LpProblem {
    Eigen::MatrixXd A;
    Eigen::VectorXd c;
    Eigen::VectorXd y;
};

/// Same data as LpProblem, but the dual barrier is evaluated through the
/// universal barrier of the orthant instead of the direct log formulas.
struct ConicOrthantProblem {
    Eigen::MatrixXd A;
    Eigen::VectorXd c;
    Eigen::VectorXd y;
};

/// maximize -x'Q0 x - 2 c0'x  s.t.  x'Qj x + 2 cj'x <= y_j,  j = 1..m
struct QpProblem {
    std::vector<Eigen::MatrixXd> Q; // Q_0 .. Q_m
    std::vector<Eigen::VectorXd> c; // c_0 .. c_m
    Eigen::VectorXd y;
};

/// maximize c'x + sum_k b_k ln x_k  s.t.  Ax <= y, x > 0  (b >= 0)
struct LogMonomialProblem {
    Eigen::MatrixXd A;
    Eigen::VectorXd c;
    Eigen::VectorXd b;
    Eigen::VectorXd y;
};

using ProblemData =
    std::variant<LpProblem, ConicOrthantProblem, QpProblem, LogMonomialProblem>;

/// Validated instance of one of the four program classes.  Immutable after
/// construction; all dimension and data invariants are checked up front.
class ProblemInstance {
public:
    explicit ProblemInstance(ProblemData data);

    ProblemClass kind() const { return kind_; }
    int num_constraints() const { return m_; } // m
    int num_variables() const { return n_; }   // n
    const Eigen::VectorXd& rhs() const;        // y

    const ProblemData& data() const { return data_; }
    template <class T> const T& as() const { return std::get<T>(data_); }

    /// Objective f(x); -inf where undefined (x_k <= 0 with b_k > 0).
    double objective(const Eigen::VectorXd& x) const;

    /// Constraint values w(x) (length m).
    Eigen::VectorXd constraint_values(const Eigen::VectorXd& x) const;

private:
    ProblemData data_;
    ProblemClass kind_;
    int m_ = 0;
    int n_ = 0;
};

/// Parse the canonical JSON problem format.  Throws MalformedInput,
/// DimensionMismatch or InvariantViolation naming the offending field.
ProblemInstance parse_problem(std::string_view text);

/// Inverse of parse_problem; numbers round-trip bit-exactly.
std::string serialize_problem(const ProblemInstance& prob);

/// True iff w(x) < y componentwise and x lies in the interior of X.
bool is_strictly_feasible_primal(const ProblemInstance& prob,
                                 const Eigen::VectorXd& x);

/// Membership in the relative interior of the class-specific dual domain:
/// lambda > 0 and A'lambda > c (lp/conic/logmonomial), or lambda > 0 and
/// Q_lambda positive definite (qp).
bool in_dual_domain(const ProblemInstance& prob, const Eigen::VectorXd& lambda);

/// Q_lambda = Q_0 + sum_j lambda_j Q_j for a qp instance.
Eigen::MatrixXd qp_q_lambda(const QpProblem& qp, const Eigen::VectorXd& lambda);

/// c_lambda = c_0 + sum_j lambda_j c_j for a qp instance.
Eigen::VectorXd qp_c_lambda(const QpProblem& qp, const Eigen::VectorXd& lambda);

/// Positive definiteness via pivoted symmetric factorization, pivot floor
/// 1e-12 relative to the largest pivot.
bool is_positive_definite(const Eigen::MatrixXd& M);

} // namespace lpbar
