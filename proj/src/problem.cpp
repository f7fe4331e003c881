#include "lpbar/problem.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace lpbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using nlohmann::json;

Eigen::VectorXd get_vector(const json& j, const std::string& field) {
    if (!j.contains(field)) throw MalformedInput("missing field \"" + field + "\"");
    const json& v = j.at(field);
    if (!v.is_array())
        throw MalformedInput("field \"" + field + "\" must be an array");
    if (v.empty())
        throw InvariantViolation("field \"" + field +
                                 "\": empty problems are not supported");
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw MalformedInput("field \"" + field + "\" must contain numbers");
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
}

Eigen::MatrixXd get_matrix(const json& j, const std::string& field) {
    if (!j.contains(field)) throw MalformedInput("missing field \"" + field + "\"");
    const json& rows = j.at(field);
    if (!rows.is_array())
        throw MalformedInput("field \"" + field + "\" must be an array of rows");
    if (rows.empty())
        throw InvariantViolation("field \"" + field +
                                 "\": empty problems are not supported");
    if (!rows[0].is_array())
        throw MalformedInput("field \"" + field + "\" rows must be arrays");
    const std::size_t ncols = rows[0].size();
    if (ncols == 0)
        throw InvariantViolation("field \"" + field +
                                 "\": empty problems are not supported");
    Eigen::MatrixXd out(rows.size(), ncols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const json& row = rows[r];
        if (!row.is_array())
            throw MalformedInput("field \"" + field + "\" rows must be arrays");
        if (row.size() != ncols)
            throw DimensionMismatch("field \"" + field + "\" has ragged rows");
        for (std::size_t cidx = 0; cidx < ncols; ++cidx) {
            if (!row[cidx].is_number())
                throw MalformedInput("field \"" + field + "\" must contain numbers");
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cidx)) =
                row[cidx].get<double>();
        }
    }
    return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

void check_linear_dims(const Eigen::MatrixXd& A, const Eigen::VectorXd& c,
                       const Eigen::VectorXd& y) {
    if (A.rows() == 0 || A.cols() == 0)
        throw InvariantViolation("field \"A\": empty problems are not supported");
    if (c.size() != A.cols())
        throw DimensionMismatch("field \"c\": expected length " +
                                std::to_string(A.cols()) + ", got " +
                                std::to_string(c.size()));
    if (y.size() != A.rows())
        throw DimensionMismatch("field \"y\": expected length " +
                                std::to_string(A.rows()) + ", got " +
                                std::to_string(y.size()));
}

void check_qp(const QpProblem& qp) {
    if (qp.Q.size() < 2)
        throw InvariantViolation("field \"Q\": need Q_0 and at least one constraint matrix");
    const auto n = qp.Q[0].rows();
    if (n == 0) throw InvariantViolation("field \"Q\": empty problems are not supported");
    if (qp.c.size() != qp.Q.size())
        throw DimensionMismatch("field \"c\": expected " + std::to_string(qp.Q.size()) +
                                " vectors, got " + std::to_string(qp.c.size()));
    const auto m = static_cast<Eigen::Index>(qp.Q.size()) - 1;
    if (qp.y.size() != m)
        throw DimensionMismatch("field \"y\": expected length " + std::to_string(m) +
                                ", got " + std::to_string(qp.y.size()));
    for (std::size_t j = 0; j < qp.Q.size(); ++j) {
        const Eigen::MatrixXd& Qj = qp.Q[j];
        const std::string name = "Q[" + std::to_string(j) + "]";
        if (Qj.rows() != n || Qj.cols() != n)
            throw DimensionMismatch("field \"" + name + "\": expected " +
                                    std::to_string(n) + "x" + std::to_string(n));
        const double scale = std::max(1.0, Qj.cwiseAbs().maxCoeff());
        if ((Qj - Qj.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw InvariantViolation("field \"" + name + "\": matrix is not symmetric");
        if (qp.c[j].size() != n)
            throw DimensionMismatch("field \"c[" + std::to_string(j) +
                                    "]\": expected length " + std::to_string(n));
        if (j >= 1) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Qj);
            const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
            if (es.eigenvalues().minCoeff() < -1e-10 * norm)
                throw InvariantViolation("field \"" + name +
                                         "\": constraint matrix is not positive semidefinite");
        }
    }
}

} // namespace

ProblemInstance::ProblemInstance(ProblemData data) : data_(std::move(data)) {
    if (const auto* lp = std::get_if<LpProblem>(&data_)) {
        kind_ = ProblemClass::lp;
        check_linear_dims(lp->A, lp->c, lp->y);
        m_ = static_cast<int>(lp->A.rows());
        n_ = static_cast<int>(lp->A.cols());
    } else if (const auto* co = std::get_if<ConicOrthantProblem>(&data_)) {
        kind_ = ProblemClass::conic;
        check_linear_dims(co->A, co->c, co->y);
        m_ = static_cast<int>(co->A.rows());
        n_ = static_cast<int>(co->A.cols());
    } else if (const auto* qp = std::get_if<QpProblem>(&data_)) {
        kind_ = ProblemClass::qp;
        check_qp(*qp);
        m_ = static_cast<int>(qp->Q.size()) - 1;
        n_ = static_cast<int>(qp->Q[0].rows());
    } else {
        const auto& lm = std::get<LogMonomialProblem>(data_);
        kind_ = ProblemClass::logmonomial;
        check_linear_dims(lm.A, lm.c, lm.y);
        if (lm.b.size() != lm.A.cols())
            throw DimensionMismatch("field \"b\": expected length " +
                                    std::to_string(lm.A.cols()) + ", got " +
                                    std::to_string(lm.b.size()));
        if (lm.b.minCoeff() < 0.0)
            throw InvariantViolation("field \"b\": entries must be nonnegative");
        m_ = static_cast<int>(lm.A.rows());
        n_ = static_cast<int>(lm.A.cols());
    }
}

const Eigen::VectorXd& ProblemInstance::rhs() const {
    switch (kind_) {
    case ProblemClass::lp: return as<LpProblem>().y;
    case ProblemClass::conic: return as<ConicOrthantProblem>().y;
    case ProblemClass::qp: return as<QpProblem>().y;
    default: return as<LogMonomialProblem>().y;
    }
}

double ProblemInstance::objective(const Eigen::VectorXd& x) const {
    switch (kind_) {
    case ProblemClass::lp: return as<LpProblem>().c.dot(x);
    case ProblemClass::conic: return as<ConicOrthantProblem>().c.dot(x);
    case ProblemClass::qp: {
        const auto& qp = as<QpProblem>();
        return -x.dot(qp.Q[0] * x) - 2.0 * qp.c[0].dot(x);
    }
    default: {
        const auto& lm = as<LogMonomialProblem>();
        double value = lm.c.dot(x);
        for (Eigen::Index k = 0; k < lm.b.size(); ++k) {
            if (lm.b(k) == 0.0) continue;
            if (x(k) <= 0.0) return -kInf;
            value += lm.b(k) * std::log(x(k));
        }
        return value;
    }
    }
}

Eigen::VectorXd ProblemInstance::constraint_values(const Eigen::VectorXd& x) const {
    switch (kind_) {
    case ProblemClass::lp: return as<LpProblem>().A * x;
    case ProblemClass::conic: return as<ConicOrthantProblem>().A * x;
    case ProblemClass::qp: {
        const auto& qp = as<QpProblem>();
        Eigen::VectorXd w(m_);
        for (int j = 0; j < m_; ++j)
            w(j) = x.dot(qp.Q[j + 1] * x) + 2.0 * qp.c[j + 1].dot(x);
        return w;
    }
    default: return as<LogMonomialProblem>().A * x;
    }
}

ProblemInstance parse_problem(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw MalformedInput("problem file must be a JSON object");
    if (!j.contains("type") || !j.at("type").is_string())
        throw MalformedInput("missing field \"type\"");
    const std::string type = j.at("type").get<std::string>();

    if (type == "lp" || type == "conic") {
        Eigen::MatrixXd A = get_matrix(j, "A");
        Eigen::VectorXd c = get_vector(j, "c");
        Eigen::VectorXd y = get_vector(j, "y");
        if (type == "lp")
            return ProblemInstance(LpProblem{std::move(A), std::move(c), std::move(y)});
        return ProblemInstance(
            ConicOrthantProblem{std::move(A), std::move(c), std::move(y)});
    }
    if (type == "qp") {
        if (!j.contains("Q") || !j.at("Q").is_array() || j.at("Q").empty())
            throw MalformedInput("field \"Q\" must be a non-empty array of matrices");
        if (!j.contains("c") || !j.at("c").is_array())
            throw MalformedInput("field \"c\" must be an array of vectors");
        QpProblem qp;
        const json& qlist = j.at("Q");
        for (std::size_t idx = 0; idx < qlist.size(); ++idx) {
            json wrapper = {{"Q", qlist[idx]}};
            qp.Q.push_back(get_matrix(wrapper, "Q"));
        }
        const json& clist = j.at("c");
        for (std::size_t idx = 0; idx < clist.size(); ++idx) {
            json wrapper = {{"c", clist[idx]}};
            qp.c.push_back(get_vector(wrapper, "c"));
        }
        qp.y = get_vector(j, "y");
        return ProblemInstance(std::move(qp));
    }
    if (type == "logmonomial") {
        Eigen::MatrixXd A = get_matrix(j, "A");
        Eigen::VectorXd c = get_vector(j, "c");
        Eigen::VectorXd b = get_vector(j, "b");
        Eigen::VectorXd y = get_vector(j, "y");
        return ProblemInstance(LogMonomialProblem{std::move(A), std::move(c),
                                                  std::move(b), std::move(y)});
    }
    throw MalformedInput("field \"type\": unknown problem type \"" + type + "\"");
}

std::string serialize_problem(const ProblemInstance& prob) {
    json j;
    switch (prob.kind()) {
    case ProblemClass::lp: {
        const auto& lp = prob.as<LpProblem>();
        j = {{"type", "lp"}, {"A", matrix_to_json(lp.A)}, {"c", vector_to_json(lp.c)},
             {"y", vector_to_json(lp.y)}};
        break;
    }
    case ProblemClass::conic: {
        const auto& co = prob.as<ConicOrthantProblem>();
        j = {{"type", "conic"}, {"A", matrix_to_json(co.A)},
             {"c", vector_to_json(co.c)}, {"y", vector_to_json(co.y)}};
        break;
    }
    case ProblemClass::qp: {
        const auto& qp = prob.as<QpProblem>();
        json qlist = json::array();
        for (const auto& Qj : qp.Q) qlist.push_back(matrix_to_json(Qj));
        json clist = json::array();
        for (const auto& cj : qp.c) clist.push_back(vector_to_json(cj));
        j = {{"type", "qp"}, {"Q", qlist}, {"c", clist}, {"y", vector_to_json(qp.y)}};
        break;
    }
    default: {
        const auto& lm = prob.as<LogMonomialProblem>();
        j = {{"type", "logmonomial"}, {"A", matrix_to_json(lm.A)},
             {"c", vector_to_json(lm.c)}, {"b", vector_to_json(lm.b)},
             {"y", vector_to_json(lm.y)}};
        break;
    }
    }
    return j.dump();
}

bool is_strictly_feasible_primal(const ProblemInstance& prob,
                                 const Eigen::VectorXd& x) {
    if (x.size() != prob.num_variables()) return false;
    if (prob.kind() != ProblemClass::qp && x.minCoeff() <= 0.0) return false;
    const Eigen::VectorXd slack = prob.rhs() - prob.constraint_values(x);
    return slack.minCoeff() > 0.0;
}

bool is_positive_definite(const Eigen::MatrixXd& M) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    if (ldlt.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = ldlt.vectorD();
    return d.minCoeff() > 1e-12 * std::max(1.0, d.maxCoeff());
}

Eigen::MatrixXd qp_q_lambda(const QpProblem& qp, const Eigen::VectorXd& lambda) {
    Eigen::MatrixXd Ql = qp.Q[0];
    for (Eigen::Index j = 0; j < lambda.size(); ++j) Ql += lambda(j) * qp.Q[j + 1];
    return Ql;
}

Eigen::VectorXd qp_c_lambda(const QpProblem& qp, const Eigen::VectorXd& lambda) {
    Eigen::VectorXd cl = qp.c[0];
    for (Eigen::Index j = 0; j < lambda.size(); ++j) cl += lambda(j) * qp.c[j + 1];
    return cl;
}

bool in_dual_domain(const ProblemInstance& prob, const Eigen::VectorXd& lambda) {
    if (lambda.size() != prob.num_constraints()) return false;
    if (!lambda.allFinite() || lambda.minCoeff() <= 0.0) return false;
    switch (prob.kind()) {
    case ProblemClass::lp: {
        const auto& d = prob.as<LpProblem>();
        return ((d.A.transpose() * lambda - d.c).array() > 0.0).all();
    }
    case ProblemClass::conic: {
        const auto& d = prob.as<ConicOrthantProblem>();
        return ((d.A.transpose() * lambda - d.c).array() > 0.0).all();
    }
    case ProblemClass::qp:
        return is_positive_definite(qp_q_lambda(prob.as<QpProblem>(), lambda));
    default: {
        const auto& d = prob.as<LogMonomialProblem>();
        return ((d.A.transpose() * lambda - d.c).array() > 0.0).all();
    }
    }
}

} // namespace lpbar
