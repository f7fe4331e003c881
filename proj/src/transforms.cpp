#include "lpbar/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "lpbar/barriers.hpp"
#include "lpbar/num_format.hpp"

namespace lpbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lse(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// 15-point Gauss-Legendre rule on [-1, 1], nodes found by Newton iteration
// on P_15.
struct GaussRule {
    std::array<double, 15> node{};
    std::array<double, 15> weight{};
};

const GaussRule& gauss15() {
    static const GaussRule rule = [] {
        GaussRule r;
        const int n = 15;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            r.node[i] = x;
            r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

struct PanelEst {
    double log_integral = -kInf;
    double max_sample = -kInf;
};

// Adaptive log-domain panel integration of e^{g(t)} on an interval.  A
// panel is accepted when one more bisection level agrees to panel_tol on
// the log value, or when its best-possible contribution lies below
// prune_floor.
class AdaptiveIntegrator {
public:
    AdaptiveIntegrator(std::function<double(double)> g, const QuadratureConfig& cfg,
                       double prune_floor)
        : g_(std::move(g)), cfg_(cfg), prune_floor_(prune_floor) {}

    double integrate(double a, double b) const {
        if (!(b > a)) return -kInf;
        return refine(a, b, panel(a, b), 0);
    }

private:
    PanelEst panel(double a, double b) const {
        const GaussRule& gr = gauss15();
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        PanelEst est;
        for (int i = 0; i < 15; ++i) {
            const double gv = g_(mid + half * gr.node[i]);
            est.max_sample = std::max(est.max_sample, gv);
            if (gv > -kInf) est.log_integral = lse(est.log_integral, gv + std::log(gr.weight[i]));
        }
        if (est.log_integral > -kInf) est.log_integral += std::log(half);
        return est;
    }

    double refine(double a, double b, const PanelEst& whole, int depth) const {
        const double mid = 0.5 * (a + b);
        const PanelEst left = panel(a, mid);
        const PanelEst right = panel(mid, b);
        const double combined = lse(left.log_integral, right.log_integral);
        if (combined == -kInf && whole.log_integral == -kInf) return combined;
        if (combined > -kInf && whole.log_integral > -kInf &&
            std::abs(combined - whole.log_integral) <=
                cfg_.panel_tol * std::max(1.0, std::abs(combined)))
            return combined;
        const double contribution_cap =
            std::log(b - a) +
            std::max({whole.max_sample, left.max_sample, right.max_sample});
        if (contribution_cap <= prune_floor_) return combined;
        if (depth >= cfg_.max_depth)
            throw DepthExceeded("adaptive quadrature: max depth " +
                                std::to_string(cfg_.max_depth) + " exceeded");
        return lse(refine(a, mid, left, depth + 1), refine(mid, b, right, depth + 1));
    }

    std::function<double(double)> g_;
    const QuadratureConfig& cfg_;
    double prune_floor_;
};

// log of integral of e^{g} over [lo, hi] where either end may be infinite;
// infinite ends are moved outward by doubling until g at the end drops
// truncation_drop nats below the running max.  Intervals starting at 0 are
// mapped through x = e^t, which turns x^a endpoint behavior into a smooth
// exponential tail.
double integrate_ray(const std::function<double(double)>& g, double lo, double hi,
                     const QuadratureConfig& cfg) {
    if (lo == 0.0 && hi > 0.0) {
        auto gt = [&g](double t) {
            const double v = g(std::exp(t));
            return v == -kInf ? -kInf : v + t;
        };
        return integrate_ray(gt, -kInf, std::isfinite(hi) ? std::log(hi) : kInf,
                             cfg);
    }
    double a = lo, b = hi;
    const bool open_hi = !std::isfinite(hi);
    const bool open_lo = !std::isfinite(lo);
    double anchor = 0.0;
    if (open_lo || open_hi) {
        anchor = open_lo ? (open_hi ? 0.0 : hi) : lo;
        if (open_hi) b = anchor + 1.0;
        if (open_lo) a = anchor - 1.0;
    }
    double running_max = -kInf;
    for (int iter = 0;; ++iter) {
        for (int i = 0; i <= 64; ++i)
            running_max = std::max(running_max, g(a + (b - a) * i / 64.0));
        bool changed = false;
        // compare differences, not shifted levels: g - max is exact even
        // when the magnitudes dwarf the drop
        if (open_hi && g(b) - running_max > -cfg.truncation_drop) {
            b = anchor + (b - anchor) * 2.0;
            changed = true;
        }
        if (open_lo && g(a) - running_max > -cfg.truncation_drop) {
            a = anchor - (anchor - a) * 2.0;
            changed = true;
        }
        if (!changed) break;
        if (iter >= 200)
            throw NonDecayingTail("integrand does not decay along an unbounded axis");
    }
    if (running_max == -kInf) return -kInf;
    const double floor = running_max - (2.0 * cfg.truncation_drop + 40.0);
    return AdaptiveIntegrator(g, cfg, floor).integrate(a, b);
}

struct ScanBox {
    Eigen::VectorXd lo, hi;
    double max_sample = -kInf;
};

// Truncation box for an orthant / full-space domain: expand per-axis until
// every movable face sits truncation_drop nats below the running max.
ScanBox truncate_domain(const std::function<double(const Eigen::VectorXd&)>& g,
                        const IntegrationDomain& dom, double drop) {
    const int d = dom.dim;
    ScanBox box;
    if (dom.kind == IntegrationDomain::Kind::box) {
        box.lo = dom.lo;
        box.hi = dom.hi;
    } else {
        box.lo = dom.kind == IntegrationDomain::Kind::orthant
                     ? Eigen::VectorXd::Zero(d)
                     : Eigen::VectorXd::Constant(d, -1.0);
        box.hi = Eigen::VectorXd::Constant(d, 1.0);
    }
    const int per_axis = d == 1 ? 65 : 33;
    Eigen::VectorXd x(d);
    for (int iter = 0;; ++iter) {
        Eigen::VectorXd face_lo_max = Eigen::VectorXd::Constant(d, -kInf);
        Eigen::VectorXd face_hi_max = Eigen::VectorXd::Constant(d, -kInf);
        const int total = d == 1 ? per_axis : per_axis * per_axis;
        for (int flat = 0; flat < total; ++flat) {
            int rem = flat;
            bool at_lo[2] = {false, false}, at_hi[2] = {false, false};
            for (int a = d - 1; a >= 0; --a) {
                const int idx = rem % per_axis;
                rem /= per_axis;
                x(a) = box.lo(a) + (box.hi(a) - box.lo(a)) * idx / (per_axis - 1.0);
                at_lo[a] = idx == 0;
                at_hi[a] = idx == per_axis - 1;
            }
            const double gv = g(x);
            box.max_sample = std::max(box.max_sample, gv);
            for (int a = 0; a < d; ++a) {
                if (at_lo[a]) face_lo_max(a) = std::max(face_lo_max(a), gv);
                if (at_hi[a]) face_hi_max(a) = std::max(face_hi_max(a), gv);
            }
        }
        if (dom.kind == IntegrationDomain::Kind::box) break;
        bool changed = false;
        for (int a = 0; a < d; ++a) {
            if (face_hi_max(a) - box.max_sample > -drop) {
                box.hi(a) *= 2.0;
                changed = true;
            }
            if (dom.kind == IntegrationDomain::Kind::real_space &&
                face_lo_max(a) - box.max_sample > -drop) {
                box.lo(a) *= 2.0;
                changed = true;
            }
        }
        if (!changed) break;
        if (iter >= 200)
            throw NonDecayingTail("integrand does not decay along an unbounded axis");
    }
    return box;
}

// a t^2 + b t + c <= 0 constraints intersected with [lo, hi]; a >= 0.
struct Interval {
    double lo = -kInf, hi = kInf;
    bool empty = false;
};

void apply_quadratic(Interval& iv, double a, double b, double c) {
    if (iv.empty) return;
    if (a == 0.0) {
        if (b > 0.0)
            iv.hi = std::min(iv.hi, -c / b);
        else if (b < 0.0)
            iv.lo = std::max(iv.lo, -c / b);
        else if (c > 0.0)
            iv.empty = true;
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) {
            iv.empty = true;
            return;
        }
        const double s = std::sqrt(disc);
        iv.lo = std::max(iv.lo, (-b - s) / (2.0 * a));
        iv.hi = std::min(iv.hi, (-b + s) / (2.0 * a));
    }
    if (iv.lo > iv.hi) iv.empty = true;
}

// Feasible interval of the last variable of Omega(y) with the other
// coordinates fixed (none for n = 1, x0 for n = 2).
Interval feasible_interval(const ProblemInstance& prob, const Eigen::VectorXd& y,
                           double x0, bool have_x0) {
    Interval iv;
    if (prob.kind() != ProblemClass::qp) iv.lo = 0.0; // X = R^n_+
    const int m = prob.num_constraints();
    if (prob.kind() == ProblemClass::qp) {
        const auto& qp = prob.as<QpProblem>();
        for (int j = 0; j < m; ++j) {
            const Eigen::MatrixXd& Q = qp.Q[j + 1];
            const Eigen::VectorXd& cj = qp.c[j + 1];
            if (!have_x0)
                apply_quadratic(iv, Q(0, 0), 2.0 * cj(0), -y(j));
            else
                apply_quadratic(iv, Q(1, 1), 2.0 * (Q(0, 1) * x0 + cj(1)),
                                Q(0, 0) * x0 * x0 + 2.0 * cj(0) * x0 - y(j));
        }
        return iv;
    }
    const Eigen::MatrixXd& A = prob.kind() == ProblemClass::lp
        ? prob.as<LpProblem>().A
        : prob.kind() == ProblemClass::conic ? prob.as<ConicOrthantProblem>().A
                                             : prob.as<LogMonomialProblem>().A;
    for (int j = 0; j < m; ++j) {
        if (!have_x0)
            apply_quadratic(iv, 0.0, A(j, 0), -y(j));
        else
            apply_quadratic(iv, 0.0, A(j, 1), A(j, 0) * x0 - y(j));
    }
    return iv;
}

// Constraints that involve only the outer variable are applied to the outer
// range directly; leaving them to the inner-interval emptiness test would
// put a step discontinuity under the outer quadrature.
Interval outer_interval(const ProblemInstance& prob, const Eigen::VectorXd& y) {
    Interval iv;
    if (prob.kind() != ProblemClass::qp) iv.lo = 0.0;
    const int m = prob.num_constraints();
    if (prob.kind() == ProblemClass::qp) {
        const auto& qp = prob.as<QpProblem>();
        for (int j = 0; j < m; ++j) {
            const Eigen::MatrixXd& Q = qp.Q[j + 1];
            const Eigen::VectorXd& cj = qp.c[j + 1];
            if (Q(1, 1) == 0.0 && Q(0, 1) == 0.0 && cj(1) == 0.0)
                apply_quadratic(iv, Q(0, 0), 2.0 * cj(0), -y(j));
        }
        return iv;
    }
    const Eigen::MatrixXd& A = prob.kind() == ProblemClass::lp
        ? prob.as<LpProblem>().A
        : prob.kind() == ProblemClass::conic ? prob.as<ConicOrthantProblem>().A
                                             : prob.as<LogMonomialProblem>().A;
    for (int j = 0; j < m; ++j)
        if (A(j, 1) == 0.0) apply_quadratic(iv, 0.0, A(j, 0), -y(j));
    return iv;
}

double log_tilde_g_at(const ProblemInstance& prob, double p, const Eigen::VectorXd& y,
                      const QuadratureConfig& cfg) {
    const int n = prob.num_variables();
    if (n == 1) {
        const Interval iv = feasible_interval(prob, y, 0.0, false);
        if (iv.empty || iv.lo >= iv.hi) return -kInf;
        auto pf = [&](double t) {
            Eigen::VectorXd x(1);
            x << t;
            const double f = prob.objective(x);
            return f == -kInf ? -kInf : p * f;
        };
        return integrate_ray(pf, iv.lo, iv.hi, cfg);
    }
    // n == 2: exact inner interval in x1, adaptive outer integral in x0.
    const Interval oiv = outer_interval(prob, y);
    if (oiv.empty || oiv.lo >= oiv.hi) return -kInf;
    auto outer = [&](double x0) {
        Interval iv = feasible_interval(prob, y, x0, true);
        if (prob.kind() != ProblemClass::qp && x0 <= 0.0) return -kInf;
        if (iv.empty || iv.lo >= iv.hi) return -kInf;
        auto pf = [&](double t) {
            Eigen::VectorXd x(2);
            x << x0, t;
            const double f = prob.objective(x);
            return f == -kInf ? -kInf : p * f;
        };
        return integrate_ray(pf, iv.lo, iv.hi, cfg);
    };
    return integrate_ray(outer, oiv.lo, oiv.hi, cfg);
}

Eigen::Index grid_size(const std::vector<int>& shape) {
    Eigen::Index total = 1;
    for (int s : shape) total *= s;
    return total;
}

} // namespace

Eigen::VectorXd GridFunction::node(Eigen::Index flat) const {
    const int d = dim();
    Eigen::VectorXd x(d);
    Eigen::Index rem = flat;
    for (int a = d - 1; a >= 0; --a) {
        x(a) = origin(a) + spacing(a) * static_cast<double>(rem % shape[a]);
        rem /= shape[a];
    }
    return x;
}

GridFunction GridFunction::from_spec(const GridSpec& spec) {
    const auto d = static_cast<int>(spec.nodes.size());
    if (d < 1 || d > 2) throw InvariantViolation("grid dimension must be 1 or 2");
    if (spec.lo.size() != d || spec.hi.size() != d)
        throw DimensionMismatch("grid bounds do not match the node counts");
    GridFunction gf;
    gf.origin = spec.lo;
    gf.spacing.resize(d);
    gf.shape = spec.nodes;
    for (int a = 0; a < d; ++a) {
        if (spec.nodes[a] < 2) throw InvariantViolation("grid needs >= 2 nodes per axis");
        if (!(spec.hi(a) > spec.lo(a)))
            throw InvariantViolation("grid needs hi > lo per axis");
        gf.spacing(a) = (spec.hi(a) - spec.lo(a)) / (spec.nodes[a] - 1.0);
    }
    gf.log_values = Eigen::VectorXd::Zero(grid_size(gf.shape));
    return gf;
}

IntegrationDomain IntegrationDomain::orthant(int d) {
    IntegrationDomain dom;
    dom.kind = Kind::orthant;
    dom.dim = d;
    return dom;
}

IntegrationDomain IntegrationDomain::real_space(int d) {
    IntegrationDomain dom;
    dom.kind = Kind::real_space;
    dom.dim = d;
    return dom;
}

IntegrationDomain IntegrationDomain::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    IntegrationDomain dom;
    dom.kind = Kind::box;
    dom.dim = static_cast<int>(lo.size());
    dom.lo = std::move(lo);
    dom.hi = std::move(hi);
    if (dom.hi.size() != dom.dim || ((dom.hi - dom.lo).array() <= 0.0).any())
        throw InvariantViolation("integration box needs hi > lo per axis");
    return dom;
}

double log_lp_norm(const LogDensity& log_integrand, const IntegrationDomain& domain,
                   double p, const QuadratureConfig& cfg) {
    if (!(p >= 1.0)) throw InvariantViolation("log_lp_norm requires p >= 1");
    if (domain.dim < 1 || domain.dim > 2)
        throw InvariantViolation("log_lp_norm supports dimensions 1 and 2");
    std::function<double(const Eigen::VectorXd&)> pg =
        [&log_integrand, p](const Eigen::VectorXd& x) {
            const double v = log_integrand(x);
            return v == -kInf ? -kInf : p * v;
        };
    IntegrationDomain work = domain;
    if (domain.kind == IntegrationDomain::Kind::orthant) {
        // integrate in x = e^t coordinates; removes the x^a endpoint
        // behavior of the monomial class
        auto base = pg;
        pg = [base](const Eigen::VectorXd& t) {
            const double v = base(t.array().exp().matrix());
            return v == -kInf ? -kInf : v + t.sum();
        };
        work = IntegrationDomain::real_space(domain.dim);
    }
    const ScanBox box = truncate_domain(pg, work, cfg.truncation_drop);
    if (box.max_sample == -kInf) return -kInf;
    const double floor = box.max_sample - (2.0 * cfg.truncation_drop + 40.0);

    if (domain.dim == 1) {
        auto g1 = [&](double t) {
            Eigen::VectorXd x(1);
            x << t;
            return pg(x);
        };
        return AdaptiveIntegrator(g1, cfg, floor).integrate(box.lo(0), box.hi(0)) / p;
    }
    auto outer = [&](double x0) {
        auto inner = [&](double x1) {
            Eigen::VectorXd x(2);
            x << x0, x1;
            return pg(x);
        };
        return AdaptiveIntegrator(inner, cfg, -kInf).integrate(box.lo(1), box.hi(1));
    };
    const double outer_floor = floor + std::log(box.hi(1) - box.lo(1));
    return AdaptiveIntegrator(outer, cfg, outer_floor).integrate(box.lo(0), box.hi(0)) / p;
}

double numeric_dual_lbf(const ProblemInstance& prob, const Eigen::VectorXd& lambda,
                        double p, const QuadratureConfig& cfg) {
    const int n = prob.num_variables();
    if (n > 2) throw TooLarge("numeric_dual_lbf supports n <= 2");
    if (!in_dual_domain(prob, lambda))
        throw DomainError("numeric_dual_lbf: lambda outside the dual domain interior");

    LogDensity h;
    IntegrationDomain dom = IntegrationDomain::orthant(n);
    switch (prob.kind()) {
    case ProblemClass::lp: {
        const Eigen::VectorXd r = prob.as<LpProblem>().c -
                                  prob.as<LpProblem>().A.transpose() * lambda;
        h = [r](const Eigen::VectorXd& x) { return r.dot(x); };
        break;
    }
    case ProblemClass::conic: {
        const Eigen::VectorXd r = prob.as<ConicOrthantProblem>().c -
                                  prob.as<ConicOrthantProblem>().A.transpose() * lambda;
        h = [r](const Eigen::VectorXd& x) { return r.dot(x); };
        break;
    }
    case ProblemClass::qp: {
        const auto& qp = prob.as<QpProblem>();
        const Eigen::MatrixXd Ql = qp_q_lambda(qp, lambda);
        const Eigen::VectorXd cl = qp_c_lambda(qp, lambda);
        h = [Ql, cl](const Eigen::VectorXd& x) {
            return -x.dot(Ql * x) - 2.0 * cl.dot(x);
        };
        dom = IntegrationDomain::real_space(n);
        break;
    }
    default: {
        const auto& lm = prob.as<LogMonomialProblem>();
        const Eigen::VectorXd r = lm.c - lm.A.transpose() * lambda;
        const Eigen::VectorXd b = lm.b;
        h = [r, b](const Eigen::VectorXd& x) {
            double v = r.dot(x);
            for (Eigen::Index k = 0; k < b.size(); ++k) {
                if (b(k) == 0.0) continue;
                if (x(k) <= 0.0) return -kInf;
                v += b(k) * std::log(x(k));
            }
            return v;
        };
        break;
    }
    }
    const double norm = log_lp_norm(h, dom, p, cfg);
    return lambda.dot(prob.rhs()) + norm -
           (p * lambda.array()).log().sum() / p;
}

GridFunction sample_tilde_g_p(const ProblemInstance& prob, double p,
                              const GridSpec& y_grid, const QuadratureConfig& cfg) {
    if (prob.num_variables() > 2 || prob.num_constraints() > 2)
        throw TooLarge("sample_tilde_g_p supports n <= 2 and m <= 2");
    GridFunction gf = GridFunction::from_spec(y_grid);
    if (gf.dim() != prob.num_constraints())
        throw DimensionMismatch("y grid dimension must equal the constraint count");
    for (Eigen::Index i = 0; i < gf.size(); ++i)
        gf.log_values(i) = log_tilde_g_at(prob, p, gf.node(i), cfg);
    return gf;
}

double log_laplace_of_grid(const GridFunction& gf, const Eigen::VectorXd& z,
                           double truncation_drop) {
    const int d = gf.dim();
    if (z.size() != d)
        throw DimensionMismatch("log_laplace_of_grid: z dimension mismatch");
    double global_max = -kInf, decay_face_max = -kInf, acc = -kInf;
    const double log_cell = gf.spacing.array().log().sum();
    for (Eigen::Index i = 0; i < gf.size(); ++i) {
        if (gf.log_values(i) == -kInf) continue;
        const Eigen::VectorXd y = gf.node(i);
        const double t = -z.dot(y) + gf.log_values(i);
        global_max = std::max(global_max, t);
        // trapezoid weights halve at every face; the truncation check only
        // applies to the face e^{-z'y} decays toward
        double log_w = log_cell;
        Eigen::Index rem = i;
        bool on_decay_face = false;
        for (int a = d - 1; a >= 0; --a) {
            const Eigen::Index idx = rem % gf.shape[a];
            rem /= gf.shape[a];
            if (idx == 0 || idx == gf.shape[a] - 1) log_w += std::log(0.5);
            if (z(a) >= 0.0 && idx == gf.shape[a] - 1) on_decay_face = true;
            if (z(a) <= 0.0 && idx == 0) on_decay_face = true;
        }
        if (on_decay_face) decay_face_max = std::max(decay_face_max, t);
        acc = lse(acc, t + log_w);
    }
    if (decay_face_max - global_max > -truncation_drop)
        throw GridTooSmall("log_laplace_of_grid: integrand max within " +
                           format_double(truncation_drop) +
                           " nats of the grid boundary");
    return acc;
}

GridFunction fenchel_concave(const GridFunction& gf, const GridSpec& lambda_grid) {
    GridFunction out = GridFunction::from_spec(lambda_grid);
    if (out.dim() != gf.dim())
        throw DimensionMismatch("fenchel_concave: grid dimension mismatch");
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const Eigen::VectorXd lambda = out.node(i);
        double best = kInf;
        for (Eigen::Index j = 0; j < gf.size(); ++j) {
            if (gf.log_values(j) == -kInf) continue;
            best = std::min(best, lambda.dot(gf.node(j)) + gf.log_values(j));
        }
        out.log_values(i) = best;
    }
    return out;
}

double cramer_transform(const GridFunction& gf, const GridSpec& z_grid,
                        const Eigen::VectorXd& y_eval, double truncation_drop) {
    const GridFunction zg = GridFunction::from_spec(z_grid);
    if (zg.dim() != gf.dim() || y_eval.size() != gf.dim())
        throw DimensionMismatch("cramer_transform: dimension mismatch");
    double best = kInf;
    for (Eigen::Index i = 0; i < zg.size(); ++i) {
        const Eigen::VectorXd z = zg.node(i);
        const double lap = log_laplace_of_grid(gf, z, truncation_drop);
        if (lap == -kInf) continue;
        best = std::min(best, z.dot(y_eval) + lap);
    }
    return best;
}

CramerCheck verify_cramer_identity(const ProblemInstance& prob, double p,
                                   const GridSpec& y_grid, const GridSpec& z_grid,
                                   const QuadratureConfig& cfg,
                                   const NewtonConfig& ncfg) {
    if (prob.num_constraints() != 1)
        throw TooLarge("verify_cramer_identity requires m = 1");
    if (prob.num_variables() > 2)
        throw TooLarge("verify_cramer_identity requires n <= 2");
    CramerCheck check;
    check.lhs =
        p * g_p_value(prob, BarrierParameter(p), ncfg, default_dual_start(prob));
    const GridFunction gf = sample_tilde_g_p(prob, p, y_grid, cfg);
    check.rhs = cramer_transform(gf, z_grid, prob.rhs(), cfg.truncation_drop);
    check.residual = std::abs(check.lhs - check.rhs) / (1.0 + std::abs(check.lhs));
    return check;
}

std::string grid_to_csv(const GridFunction& gf) {
    std::string out = "# origin=";
    const int d = gf.dim();
    for (int a = 0; a < d; ++a)
        out += (a ? " " : "") + format_double(gf.origin(a));
    out += ", spacing=";
    for (int a = 0; a < d; ++a)
        out += (a ? " " : "") + format_double(gf.spacing(a));
    out += ", shape=";
    for (int a = 0; a < d; ++a)
        out += (a ? " " : "") + std::to_string(gf.shape[a]);
    out += "\n";
    for (Eigen::Index i = 0; i < gf.size(); ++i)
        out += format_double(gf.log_values(i)) + "\n";
    return out;
}

GridFunction grid_from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header) || header.rfind("# origin=", 0) != 0)
        throw MalformedInput("grid CSV: missing \"# origin=...\" header");
    auto parse_field = [&](const std::string& key) {
        const std::string tag = key + "=";
        const auto pos = header.find(tag);
        if (pos == std::string::npos)
            throw MalformedInput("grid CSV: header missing \"" + key + "\"");
        auto end = header.find(',', pos);
        if (end == std::string::npos) end = header.size();
        return header.substr(pos + tag.size(), end - pos - tag.size());
    };
    auto parse_doubles = [](const std::string& s) {
        std::vector<double> vals;
        std::istringstream ss(s);
        std::string tok;
        while (ss >> tok) vals.push_back(std::strtod(tok.c_str(), nullptr));
        return vals;
    };
    const auto origin = parse_doubles(parse_field("origin"));
    const auto spacing = parse_doubles(parse_field("spacing"));
    const auto shape_d = parse_doubles(parse_field("shape"));
    const auto d = origin.size();
    if (d < 1 || d > 2 || spacing.size() != d || shape_d.size() != d)
        throw MalformedInput("grid CSV: inconsistent header dimensions");

    GridFunction gf;
    gf.origin = Eigen::Map<const Eigen::VectorXd>(origin.data(), d);
    gf.spacing = Eigen::Map<const Eigen::VectorXd>(spacing.data(), d);
    for (double s : shape_d) gf.shape.push_back(static_cast<int>(s));
    gf.log_values.resize(grid_size(gf.shape));
    std::string line;
    for (Eigen::Index i = 0; i < gf.log_values.size(); ++i) {
        if (!std::getline(in, line))
            throw MalformedInput("grid CSV: fewer values than shape requires");
        gf.log_values(i) = std::strtod(line.c_str(), nullptr);
    }
    return gf;
}

} // namespace lpbar
