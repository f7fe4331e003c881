#include "lpbar/barriers.hpp"

#include <cmath>
#include <limits>

namespace lpbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogPi = std::log(M_PI);

BarrierEval out_of_domain(double sign) {
    BarrierEval e;
    e.value = sign * kInf;
    e.in_domain = false;
    return e;
}

// phi_p for lp data; also the base of the logmonomial formula (its b = 0
// part) so that the two classes agree bit-for-bit when b vanishes.
BarrierEval dual_lbf_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& c,
                            const Eigen::VectorXd& y, const Eigen::VectorXd& lambda,
                            double p) {
    const Eigen::VectorXd w = A.transpose() * lambda - c;
    if (lambda.minCoeff() <= 0.0 || w.minCoeff() <= 0.0) return out_of_domain(+1.0);
    const auto m = static_cast<double>(A.rows());
    const auto n = static_cast<double>(A.cols());

    BarrierEval e;
    e.in_domain = true;
    e.value = lambda.dot(y) - w.array().log().sum() / p -
              lambda.array().log().sum() / p - (m + n) / p * std::log(p);
    const Eigen::VectorXd winv = w.cwiseInverse();
    const Eigen::VectorXd linv = lambda.cwiseInverse();
    e.gradient = y - (A * winv) / p - linv / p;
    e.hessian = (A * winv.array().square().matrix().asDiagonal() * A.transpose()) / p;
    e.hessian += (linv.array().square() / p).matrix().asDiagonal();
    return e;
}

BarrierEval dual_lbf_conic(const ConicOrthantProblem& d, const Eigen::VectorXd& lambda,
                           double p) {
    if (lambda.minCoeff() <= 0.0) return out_of_domain(+1.0);
    const Eigen::VectorXd w = d.A.transpose() * lambda - d.c;
    const BarrierEval psi = universal_barrier_orthant(w);
    if (!psi.in_domain) return out_of_domain(+1.0);
    const auto m = static_cast<double>(d.A.rows());
    const auto n = static_cast<double>(d.A.cols());

    BarrierEval e;
    e.in_domain = true;
    e.value = lambda.dot(d.y) + psi.value / p - lambda.array().log().sum() / p -
              (m + n) / p * std::log(p);
    const Eigen::VectorXd linv = lambda.cwiseInverse();
    e.gradient = d.y + (d.A * psi.gradient) / p - linv / p;
    e.hessian = (d.A * psi.hessian * d.A.transpose()) / p;
    e.hessian += (linv.array().square() / p).matrix().asDiagonal();
    return e;
}

BarrierEval dual_lbf_qp(const QpProblem& qp, const Eigen::VectorXd& lambda, double p) {
    if (lambda.minCoeff() <= 0.0) return out_of_domain(+1.0);
    const Eigen::MatrixXd Ql = qp_q_lambda(qp, lambda);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Ql);
    const Eigen::VectorXd dvec = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success ||
        dvec.minCoeff() <= 1e-12 * std::max(1.0, dvec.maxCoeff()))
        return out_of_domain(+1.0);

    const auto m = static_cast<Eigen::Index>(qp.Q.size()) - 1;
    const auto n = static_cast<double>(qp.Q[0].rows());
    const Eigen::VectorXd cl = qp_c_lambda(qp, lambda);
    const Eigen::VectorXd u = ldlt.solve(cl);
    const double logdet = dvec.array().log().sum();

    BarrierEval e;
    e.in_domain = true;
    e.value = lambda.dot(qp.y) + cl.dot(u) - logdet / (2.0 * p) -
              lambda.array().log().sum() / p +
              n * (kLogPi - std::log(p)) / (2.0 * p) -
              static_cast<double>(m) * std::log(p) / p;

    // d/dl_j [c'Q^{-1}c] = 2 c_j'u - u'Q_j u,  d/dl_j ln det Q = tr(Q^{-1}Q_j)
    e.gradient.resize(m);
    std::vector<Eigen::MatrixXd> S(m); // S_j = Q_lambda^{-1} Q_j
    std::vector<Eigen::VectorXd> v(m); // v_j = c_j - Q_j u
    for (Eigen::Index j = 0; j < m; ++j) {
        S[j] = ldlt.solve(qp.Q[j + 1]);
        v[j] = qp.c[j + 1] - qp.Q[j + 1] * u;
        e.gradient(j) = qp.y(j) + 2.0 * qp.c[j + 1].dot(u) - u.dot(qp.Q[j + 1] * u) -
                        S[j].trace() / (2.0 * p) - 1.0 / (p * lambda(j));
    }

    e.hessian.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::VectorXd Qinv_vi = ldlt.solve(v[i]);
        for (Eigen::Index j = 0; j <= i; ++j) {
            double h = 2.0 * v[j].dot(Qinv_vi) +
                       (S[i].array() * S[j].transpose().array()).sum() / (2.0 * p);
            if (i == j) h += 1.0 / (p * lambda(i) * lambda(i));
            e.hessian(i, j) = h;
            e.hessian(j, i) = h;
        }
    }
    return e;
}

BarrierEval dual_lbf_logmonomial(const LogMonomialProblem& lm,
                                 const Eigen::VectorXd& lambda, double p) {
    BarrierEval e = dual_lbf_linear(lm.A, lm.c, lm.y, lambda, p);
    if (!e.in_domain) return e;
    const Eigen::VectorXd w = lm.A.transpose() * lambda - lm.c;
    for (Eigen::Index k = 0; k < lm.b.size(); ++k) {
        const double bk = lm.b(k);
        if (bk == 0.0) continue; // Gamma(1) = 1 and b ln(.) = 0
        e.value += std::lgamma(1.0 + p * bk) / p - bk * std::log(p * w(k));
        e.gradient -= (bk / w(k)) * lm.A.col(k);
        e.hessian += (bk / (w(k) * w(k))) * (lm.A.col(k) * lm.A.col(k).transpose());
    }
    return e;
}

BarrierEval primal_lbf_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& x, double p) {
    // Common orthant part: (1/p)(sum ln x_i + sum ln s_j), objective added
    // by the caller.
    BarrierEval e;
    const Eigen::VectorXd s = y - A * x;
    if (x.minCoeff() <= 0.0 || s.minCoeff() <= 0.0) return out_of_domain(-1.0);
    e.in_domain = true;
    e.value = (x.array().log().sum() + s.array().log().sum()) / p;
    const Eigen::VectorXd xinv = x.cwiseInverse();
    const Eigen::VectorXd sinv = s.cwiseInverse();
    e.gradient = (xinv - A.transpose() * sinv) / p;
    e.hessian =
        -(A.transpose() * sinv.array().square().matrix().asDiagonal() * A) / p;
    e.hessian -= (xinv.array().square() / p).matrix().asDiagonal();
    return e;
}

BarrierEval primal_lbf_qp(const QpProblem& qp, const Eigen::VectorXd& x, double p) {
    const auto m = static_cast<Eigen::Index>(qp.Q.size()) - 1;
    Eigen::VectorXd s(m);
    std::vector<Eigen::VectorXd> grad_w(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        s(j) = qp.y(j) - x.dot(qp.Q[j + 1] * x) - 2.0 * qp.c[j + 1].dot(x);
        grad_w[j] = 2.0 * (qp.Q[j + 1] * x + qp.c[j + 1]);
    }
    if (s.minCoeff() <= 0.0) return out_of_domain(-1.0);

    BarrierEval e;
    e.in_domain = true;
    e.value = -x.dot(qp.Q[0] * x) - 2.0 * qp.c[0].dot(x) + s.array().log().sum() / p;
    e.gradient = -2.0 * (qp.Q[0] * x + qp.c[0]);
    e.hessian = -2.0 * qp.Q[0];
    for (Eigen::Index j = 0; j < m; ++j) {
        e.gradient -= grad_w[j] / (p * s(j));
        e.hessian -= (2.0 / (p * s(j))) * qp.Q[j + 1];
        e.hessian -= (grad_w[j] * grad_w[j].transpose()) / (p * s(j) * s(j));
    }
    return e;
}

} // namespace

BarrierParameter::BarrierParameter(double p) : p_(p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw InvariantViolation("barrier parameter p must be finite and >= 1");
}

BarrierEval universal_barrier_orthant(const Eigen::VectorXd& x) {
    if (x.size() == 0 || x.minCoeff() <= 0.0) return out_of_domain(+1.0);
    BarrierEval e;
    e.in_domain = true;
    e.value = -x.array().log().sum();
    e.gradient = -x.cwiseInverse();
    e.hessian = x.cwiseInverse().array().square().matrix().asDiagonal();
    return e;
}

BarrierEval primal_lbf(const ProblemInstance& prob, const Eigen::VectorXd& x,
                       BarrierParameter par) {
    const double p = par.value();
    switch (prob.kind()) {
    case ProblemClass::lp: {
        const auto& d = prob.as<LpProblem>();
        BarrierEval e = primal_lbf_linear(d.A, d.y, x, p);
        if (!e.in_domain) return e;
        e.value += d.c.dot(x);
        e.gradient += d.c;
        return e;
    }
    case ProblemClass::conic: {
        const auto& d = prob.as<ConicOrthantProblem>();
        BarrierEval e = primal_lbf_linear(d.A, d.y, x, p);
        if (!e.in_domain) return e;
        e.value += d.c.dot(x);
        e.gradient += d.c;
        return e;
    }
    case ProblemClass::qp:
        return primal_lbf_qp(prob.as<QpProblem>(), x, p);
    default: {
        const auto& d = prob.as<LogMonomialProblem>();
        BarrierEval e = primal_lbf_linear(d.A, d.y, x, p);
        if (!e.in_domain) return e;
        e.value += d.c.dot(x);
        e.gradient += d.c;
        for (Eigen::Index k = 0; k < d.b.size(); ++k) {
            const double bk = d.b(k);
            if (bk == 0.0) continue;
            e.value += bk * std::log(x(k));
            e.gradient(k) += bk / x(k);
            e.hessian(k, k) -= bk / (x(k) * x(k));
        }
        return e;
    }
    }
}

BarrierEval dual_lbf(const ProblemInstance& prob, const Eigen::VectorXd& lambda,
                     BarrierParameter par) {
    const double p = par.value();
    switch (prob.kind()) {
    case ProblemClass::lp: {
        const auto& d = prob.as<LpProblem>();
        return dual_lbf_linear(d.A, d.c, d.y, lambda, p);
    }
    case ProblemClass::conic:
        return dual_lbf_conic(prob.as<ConicOrthantProblem>(), lambda, p);
    case ProblemClass::qp:
        return dual_lbf_qp(prob.as<QpProblem>(), lambda, p);
    default:
        return dual_lbf_logmonomial(prob.as<LogMonomialProblem>(), lambda, p);
    }
}

double dual_limit_objective(const ProblemInstance& prob,
                            const Eigen::VectorXd& lambda) {
    if (lambda.size() != prob.num_constraints() || !lambda.allFinite() ||
        lambda.minCoeff() < 0.0)
        return kInf;
    switch (prob.kind()) {
    case ProblemClass::lp: {
        const auto& d = prob.as<LpProblem>();
        if (((d.A.transpose() * lambda - d.c).array() < 0.0).any()) return kInf;
        return lambda.dot(d.y);
    }
    case ProblemClass::conic: {
        const auto& d = prob.as<ConicOrthantProblem>();
        if (((d.A.transpose() * lambda - d.c).array() < 0.0).any()) return kInf;
        return lambda.dot(d.y);
    }
    case ProblemClass::qp: {
        const auto& qp = prob.as<QpProblem>();
        const Eigen::MatrixXd Ql = qp_q_lambda(qp, lambda);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Ql);
        const Eigen::VectorXd dvec = ldlt.vectorD();
        if (ldlt.info() != Eigen::Success ||
            dvec.minCoeff() <= 1e-12 * std::max(1.0, dvec.maxCoeff()))
            return kInf;
        const Eigen::VectorXd cl = qp_c_lambda(qp, lambda);
        return lambda.dot(qp.y) + cl.dot(ldlt.solve(cl));
    }
    default: {
        const auto& lm = prob.as<LogMonomialProblem>();
        const Eigen::VectorXd w = lm.A.transpose() * lambda - lm.c;
        if ((w.array() < 0.0).any()) return kInf;
        double value = lambda.dot(lm.y);
        for (Eigen::Index k = 0; k < lm.b.size(); ++k) {
            const double bk = lm.b(k);
            if (bk == 0.0) continue;
            if (w(k) <= 0.0) return kInf;
            value -= bk * (std::log(w(k)) + 1.0 - std::log(bk));
        }
        return value;
    }
    }
}

double barrier_gap(const ProblemInstance& prob, const Eigen::VectorXd& x,
                   BarrierParameter par) {
    if (!is_strictly_feasible_primal(prob, x))
        throw DomainError("barrier_gap: point is not strictly feasible");
    const Eigen::VectorXd slack = prob.rhs() - prob.constraint_values(x);
    double delta = 0.0; // universal barrier term; zero for X = R^n (qp)
    if (prob.kind() != ProblemClass::qp) delta = -x.array().log().sum();
    return (delta - slack.array().log().sum()) / par.value();
}

} // namespace lpbar
