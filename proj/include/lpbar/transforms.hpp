#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lpbar/problem.hpp"
#include "lpbar/solve.hpp"

namespace lpbar {

struct QuadratureConfig {
    double truncation_drop = 40.0; // nats below the max where domains are cut
    double panel_tol = 1e-10;      // relative tolerance on the log value
    int max_depth = 30;
};

/// Uniform rectangular grid descriptor: nodes[i] points per axis spanning
/// [lo_i, hi_i] inclusive.
struct GridSpec {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    std::vector<int> nodes;
};

/// Uniformly sampled scalar function on a rectangular grid, stored in the
/// log domain (-inf marks points where the underlying function is 0).
/// Row-major layout; d in {1, 2}.
struct GridFunction {
    Eigen::VectorXd origin;
    Eigen::VectorXd spacing;
    std::vector<int> shape;
    Eigen::VectorXd log_values;

    int dim() const { return static_cast<int>(shape.size()); }
    Eigen::Index size() const { return log_values.size(); }
    Eigen::VectorXd node(Eigen::Index flat) const;

    static GridFunction from_spec(const GridSpec& spec);
};

struct IntegrationDomain {
    enum class Kind { orthant, real_space, box };
    Kind kind = Kind::orthant;
    int dim = 1;
    Eigen::VectorXd lo, hi; // box bounds (box kind only)

    static IntegrationDomain orthant(int d);
    static IntegrationDomain real_space(int d);
    static IntegrationDomain box(Eigen::VectorXd lo, Eigen::VectorXd hi);
};

using LogDensity = std::function<double(const Eigen::VectorXd&)>;

/// ln || e^{g} ||_{L^p} = (1/p) ln integral e^{p g(x)} dx over the domain,
/// by adaptive Gauss panels accumulated with log-sum-exp.  Unbounded
/// domains are truncated where p*g drops truncation_drop nats below the
/// running max along each axis; failure to find such a cut raises
/// NonDecayingTail.
double log_lp_norm(const LogDensity& log_integrand, const IntegrationDomain& domain,
                   double p, const QuadratureConfig& cfg);

/// phi_p(lambda; y) evaluated by quadrature instead of the closed form:
/// the independent oracle against dual_lbf.  Requires lambda in ri D and
/// n <= 2.
double numeric_dual_lbf(const ProblemInstance& prob, const Eigen::VectorXd& lambda,
                        double p, const QuadratureConfig& cfg);

/// Sample ln tilde_g_p(y) = ln integral_{Omega(y)} e^{p f(x)} dx on a grid
/// of right-hand sides y; -inf where Omega(y) is empty.
GridFunction sample_tilde_g_p(const ProblemInstance& prob, double p,
                              const GridSpec& y_grid, const QuadratureConfig& cfg);

/// ln integral e^{-z'y + gf(y)} dy by trapezoid weights in the log domain.
/// Raises GridTooSmall when the integrand comes within truncation_drop nats
/// of its max on a face that e^{-z'y} decays toward (the grid is then too
/// small to hold the transform's mass).
double log_laplace_of_grid(const GridFunction& gf, const Eigen::VectorXd& z,
                           double truncation_drop = 40.0);

/// Concave-convention discrete Fenchel transform: output node lambda holds
/// min over input nodes y of (lambda'y + gf(y)), skipping -inf nodes; +inf
/// where every node is skipped.
GridFunction fenchel_concave(const GridFunction& gf, const GridSpec& lambda_grid);

/// Discrete Cramer transform (Fenchel of the log-Laplace transform of
/// e^{gf}) evaluated at y_eval over the given z grid.
double cramer_transform(const GridFunction& gf, const GridSpec& z_grid,
                        const Eigen::VectorXd& y_eval, double truncation_drop = 40.0);

struct CramerCheck {
    double lhs = 0.0; // p * g_p(y) through the barrier path
    double rhs = 0.0; // discrete Cramer value through the transform path
    double residual = 0.0;
};

/// Two-path check of the Cramer identity on an m = 1 instance.
CramerCheck verify_cramer_identity(const ProblemInstance& prob, double p,
                                   const GridSpec& y_grid, const GridSpec& z_grid,
                                   const QuadratureConfig& cfg,
                                   const NewtonConfig& ncfg = {});

/// CSV serialization: header line "# origin=..., spacing=..., shape=..."
/// then one log-value per line at 17 significant digits.
std::string grid_to_csv(const GridFunction& gf);
GridFunction grid_from_csv(std::string_view text);

} // namespace lpbar
