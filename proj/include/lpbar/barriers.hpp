#pragma once

#include <Eigen/Dense>

#include "lpbar/problem.hpp"

namespace lpbar {

/// Value, gradient and Hessian of a barrier function at a point.  When
/// in_domain is false the value is +inf (minimization side) or -inf
/// (maximization side) and gradient/hessian are left empty.
struct BarrierEval {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
    bool in_domain = false;
};

/// Barrier parameter p >= 1.  The closed forms are analytic in p, so real
/// (non-integer) values are accepted.
class BarrierParameter {
public:
    explicit BarrierParameter(double p);
    double value() const { return p_; }

private:
    double p_;
};

/// Universal barrier of the nonnegative orthant:
///   Delta(x) = ln integral_{R^n_+} e^{-x'y} dy = -sum_i ln x_i
/// with gradient -1/x_i and Hessian diag(1/x_i^2).  Out of domain (+inf)
/// unless x > 0.
BarrierEval universal_barrier_orthant(const Eigen::VectorXd& x);

/// Primal log-barrier
///   psi_p(x) = f(x) + (1/p) (-Delta(x) + sum_j ln (y - w(x))_j),
/// where Delta is the orthant barrier for lp/conic/logmonomial and 0 for qp
/// (X = R^n carries no cone term).  Maximization convention: -inf outside
/// the strictly feasible set.
BarrierEval primal_lbf(const ProblemInstance& prob, const Eigen::VectorXd& x,
                       BarrierParameter par);

/// Dual log-barrier phi_p(lambda; y), the closed form of
///   lambda'y + ln || e^{f - lambda'w} ||_{L^p(X)} - sum_j ln(p lambda_j)/p
/// per problem class, including all constant terms.  Minimization
/// convention: +inf outside the relative interior of the dual domain.
BarrierEval dual_lbf(const ProblemInstance& prob, const Eigen::VectorXd& lambda,
                     BarrierParameter par);

/// Pointwise limit h_1(lambda; y) = lim_{p->inf} phi_p(lambda; y):
///   lp/conic:     lambda'y
///   qp:           lambda'y + c_lambda' Q_lambda^{-1} c_lambda
///   logmonomial:  lambda'y - sum_k b_k ln[(A_k'lambda - c_k) e / b_k]
/// Finite on the dual domain, +inf outside its closure.
double dual_limit_objective(const ProblemInstance& prob,
                            const Eigen::VectorXd& lambda);

/// f(x) - psi_p(x) = (1/p)(Delta(x) - sum_j ln (y - w(x))_j).
/// Throws DomainError unless x is strictly feasible.
double barrier_gap(const ProblemInstance& prob, const Eigen::VectorXd& x,
                   BarrierParameter par);

} // namespace lpbar
