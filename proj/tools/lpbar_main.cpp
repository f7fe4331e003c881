// Command-line front end: solve barrier paths, run convergence studies
// against the oracles, and verify the transform identities.  CSV goes to
// stdout, diagnostics to stderr.  Exit codes: 0 success, 1 usage/input
// error, 2 partial convergence, 3 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpbar/barriers.hpp"
#include "lpbar/num_format.hpp"
#include "lpbar/oracles.hpp"
#include "lpbar/problem.hpp"
#include "lpbar/solve.hpp"
#include "lpbar/transforms.hpp"

namespace {

using namespace lpbar;

constexpr unsigned kSeed = 20240915; // fixed so tables are byte-stable

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput("cannot open problem file \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw MalformedInput("empty entry in list \"" + text + "\"");
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size())
            throw MalformedInput("bad number \"" + tok + "\" in list");
    }
    return out;
}

std::string newton_config_text(const NewtonConfig& ncfg) {
    return "grad_tol=" + format_double(ncfg.grad_tol) +
           " max_iters=" + std::to_string(ncfg.max_iters) +
           " armijo_c=" + format_double(ncfg.armijo_c) +
           " backtrack_factor=" + format_double(ncfg.backtrack_factor) +
           " boundary_fraction=" + format_double(ncfg.boundary_fraction);
}

struct SolveArgs {
    std::string problem_file;
    std::string side;
    PathSchedule sched;
    std::string start_text;
};

int cmd_solve(const SolveArgs& args, const NewtonConfig& ncfg) {
    const ProblemInstance prob = parse_problem(read_file(args.problem_file));
    const bool dual = args.side == "dual";

    Eigen::VectorXd start;
    if (!args.start_text.empty()) {
        const std::vector<double> v = parse_csv_doubles(args.start_text);
        const int want = dual ? prob.num_constraints() : prob.num_variables();
        if (static_cast<int>(v.size()) != want)
            throw DimensionMismatch("--start: expected " + std::to_string(want) +
                                    " components");
        start = Eigen::Map<const Eigen::VectorXd>(v.data(), want);
    } else if (dual) {
        start = default_dual_start(prob);
    } else {
        throw MalformedInput("primal start required (--start)");
    }

    const SolveReport report = dual ? solve_dual_path(prob, args.sched, ncfg, start)
                                    : solve_primal_path(prob, args.sched, ncfg, start);

    std::cout << "# config: cmd=solve problem=" << args.problem_file
              << " side=" << args.side << " p0=" << format_double(args.sched.p0)
              << " growth=" << format_double(args.sched.growth)
              << " stages=" << args.sched.stages << " " << newton_config_text(ncfg)
              << "\n";
    std::cout << "stage,p,objective,h1,grad_norm,iters";
    const char* coord = dual ? "lambda" : "x";
    for (int i = 0; i < static_cast<int>(start.size()); ++i)
        std::cout << "," << coord << i;
    std::cout << "\n";
    for (std::size_t k = 0; k < report.stages.size(); ++k) {
        const StageRecord& st = report.stages[k];
        std::cout << (k + 1) << "," << format_double(st.p) << ","
                  << format_double(st.objective) << ","
                  << format_double(st.limit_objective) << ","
                  << format_double(st.grad_norm) << "," << st.newton_iters;
        for (int i = 0; i < static_cast<int>(st.point.size()); ++i)
            std::cout << "," << format_double(st.point(i));
        std::cout << "\n";
    }
    return report.fully_converged ? 0 : 2;
}

struct StudyArgs {
    std::string problem_file;
    PathSchedule sched;
    std::vector<double> box{-5.0, 5.0};
    int nodes = 0; // 0 = pick by dimension
};

GroundTruth study_oracle(const ProblemInstance& prob, const StudyArgs& args) {
    const int n = prob.num_variables();
    const bool linear =
        prob.kind() == ProblemClass::lp || prob.kind() == ProblemClass::conic;
    if (linear && n + prob.num_constraints() <= 12) return lp_vertex_optimum(prob);
    if (n > 2)
        throw TooLarge("no oracle applies: need lp/conic with n+m <= 12 or n <= 2");
    const int nodes = args.nodes > 0 ? args.nodes : (n == 1 ? 10001 : 2001);
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, args.box[0]);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, args.box[1]);
    return grid_search_optimum(prob, lo, hi, nodes);
}

int cmd_study(const StudyArgs& args, const NewtonConfig& ncfg) {
    const ProblemInstance prob = parse_problem(read_file(args.problem_file));
    const GroundTruth oracle = study_oracle(prob, args);
    const SolveReport report =
        solve_dual_path(prob, args.sched, ncfg, default_dual_start(prob));

    std::cout << "# config: cmd=study problem=" << args.problem_file
              << " p0=" << format_double(args.sched.p0)
              << " growth=" << format_double(args.sched.growth)
              << " stages=" << args.sched.stages << " oracle="
              << (oracle.method == OracleMethod::vertex_enumeration ? "vertex"
                                                                    : "grid")
              << " box=" << format_double(args.box[0]) << ":"
              << format_double(args.box[1]) << " " << newton_config_text(ncfg)
              << "\n";
    std::cout << "p,g_p,h1_at_opt,oracle_g,abs_error,fitted_bound\n";
    double fit_c = 0.0;
    for (std::size_t k = 0; k < report.stages.size(); ++k) {
        const StageRecord& st = report.stages[k];
        const double abs_error = std::abs(st.objective - oracle.g_value);
        if (k == 0) fit_c = abs_error * st.p / (1.0 + std::log(st.p));
        const double bound = fit_c * (1.0 + std::log(st.p)) / st.p;
        std::cout << format_double(st.p) << "," << format_double(st.objective) << ","
                  << format_double(st.limit_objective) << ","
                  << format_double(oracle.g_value) << "," << format_double(abs_error)
                  << "," << format_double(bound) << "\n";
    }
    return report.fully_converged ? 0 : 2;
}

struct VerifyArgs {
    std::string problem_file;
    std::string check;
    double p = 4.0;
    std::vector<double> ygrid{0.0, 30.0, 2001.0};
    std::vector<double> zgrid; // empty = automatic
    double drop = 0.0;         // 0 = per-check default
    std::vector<double> box{-5.0, 5.0};
    int pairs = 10;
};

struct VerifyReport {
    bool all_pass = true;
    void row(const std::string& check, const std::string& detail, double lhs,
             double rhs, double residual, double tol) {
        const bool pass = residual <= tol;
        all_pass = all_pass && pass;
        std::cout << check << "," << detail << "," << format_double(lhs) << ","
                  << format_double(rhs) << "," << format_double(residual) << ","
                  << format_double(tol) << "," << (pass ? "PASS" : "FAIL") << "\n";
        std::cerr << (pass ? "PASS " : "FAIL ") << check << " " << detail
                  << " residual=" << format_double(residual) << " (tol "
                  << format_double(tol) << ")\n";
    }
};

void verify_closedform(const ProblemInstance& prob, const VerifyArgs& args,
                       VerifyReport& rep) {
    QuadratureConfig qcfg;
    if (args.drop > 0.0) qcfg.truncation_drop = args.drop;
    const std::vector<Eigen::VectorXd> lams =
        sample_interior_dual(prob, 3.0, args.pairs, kSeed);
    if (static_cast<int>(lams.size()) < args.pairs)
        throw TooLarge("could not sample enough interior dual points");
    std::mt19937 rng(kSeed + 1);
    std::uniform_real_distribution<double> pdraw(1.0, 50.0);
    for (int t = 0; t < args.pairs; ++t) {
        const double p = pdraw(rng);
        const double closed = dual_lbf(prob, lams[t], BarrierParameter(p)).value;
        const double numeric = numeric_dual_lbf(prob, lams[t], p, qcfg);
        const double rel =
            std::abs(closed - numeric) / std::max(1.0, std::abs(closed));
        rep.row("closedform", "pair" + std::to_string(t) + "_p=" + format_double(p),
                closed, numeric, rel, 1e-6);
    }
}

void verify_lemma1(const VerifyArgs& args, VerifyReport& rep) {
    QuadratureConfig qcfg;
    if (args.drop > 0.0) qcfg.truncation_drop = args.drop;
    for (int t = 0; t <= 10; ++t) {
        const double p = std::pow(2.0, t);
        const double value =
            log_lp_norm([](const Eigen::VectorXd& x) { return -x(0); },
                        IntegrationDomain::orthant(1), p, qcfg);
        const double expect = -std::log(p) / p;
        rep.row("lemma1", "p=" + format_double(p), value, expect,
                std::abs(value - expect), 1e-8);
    }
}

void verify_cramer(const ProblemInstance& prob, const VerifyArgs& args,
                   const NewtonConfig& ncfg, VerifyReport& rep) {
    QuadratureConfig qcfg;
    qcfg.truncation_drop = args.drop > 0.0 ? args.drop : 25.0;
    GridSpec yg;
    yg.lo = Eigen::VectorXd::Constant(1, args.ygrid[0]);
    yg.hi = Eigen::VectorXd::Constant(1, args.ygrid[1]);
    yg.nodes = {static_cast<int>(args.ygrid[2])};

    const GridFunction gf = sample_tilde_g_p(prob, args.p, yg, qcfg);

    // smallest z whose Laplace integrand decays inside the grid, plus a 2%
    // margin; top end scales with p
    double z_lo = 0.0;
    for (double z = 0.05; z < 64.0; z *= 1.05) {
        try {
            log_laplace_of_grid(gf, Eigen::VectorXd::Constant(1, z),
                                qcfg.truncation_drop);
            z_lo = z * 1.02;
            break;
        } catch (const GridTooSmall&) {
        }
    }
    if (z_lo == 0.0) throw GridTooSmall("no admissible z for the Laplace grid");

    GridSpec zg;
    if (!args.zgrid.empty()) {
        zg.lo = Eigen::VectorXd::Constant(1, args.zgrid[0]);
        zg.hi = Eigen::VectorXd::Constant(1, args.zgrid[1]);
        zg.nodes = {static_cast<int>(args.zgrid[2])};
    } else {
        zg.lo = Eigen::VectorXd::Constant(1, z_lo);
        zg.hi = Eigen::VectorXd::Constant(1, std::max(3.0 * args.p, z_lo * 8.0));
        zg.nodes = {1601};
    }

    const CramerCheck chk = verify_cramer_identity(prob, args.p, yg, zg, qcfg, ncfg);
    rep.row("cramer", "p=" + format_double(args.p), chk.lhs, chk.rhs, chk.residual,
            1e-2);

    // Intermediate Laplace closed form from the tilde-g samples.
    const double z_lap = std::max(1.0, z_lo);
    const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, z_lap);
    const double lap = log_laplace_of_grid(gf, z, qcfg.truncation_drop);
    const Eigen::VectorXd lam = z / args.p;
    const double closed =
        args.p * (dual_lbf(prob, lam, BarrierParameter(args.p)).value -
                  lam.dot(prob.rhs()));
    rep.row("cramer_laplace",
            "z=" + format_double(z_lap) + "_p=" + format_double(args.p), lap,
            closed, std::abs(lap - closed), 1e-4);
}

void verify_duality(const ProblemInstance& prob, const VerifyArgs& args,
                    VerifyReport& rep) {
    const int n = prob.num_variables();
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, args.box[0]);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, args.box[1]);
    const auto xs = sample_feasible_primal(prob, lo, hi, 100, kSeed);
    const auto ls = sample_interior_dual(prob, 3.0, 100, kSeed + 1);
    if (xs.size() < 100 || ls.size() < 100) {
        std::cerr << "WARN duality: sampled " << xs.size() << " feasible / "
                  << ls.size() << " interior points within the draw budget; "
                  << "property skipped\n";
        return;
    }
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const DualityCheck chk = check_weak_duality(prob, xs[i], ls[i]);
        min_margin = std::min(min_margin, chk.margin);
    }
    rep.row("duality", "pairs=100_min_margin", min_margin, 0.0,
            std::max(0.0, -min_margin), 1e-9);
}

int cmd_verify(const VerifyArgs& args, const NewtonConfig& ncfg) {
    std::cout << "# config: cmd=verify problem=" << args.problem_file
              << " check=" << args.check << " p=" << format_double(args.p)
              << " ygrid=" << format_double(args.ygrid[0]) << ":"
              << format_double(args.ygrid[1]) << ":"
              << static_cast<int>(args.ygrid[2]) << " drop="
              << format_double(args.drop > 0.0
                                   ? args.drop
                                   : (args.check == "cramer" ? 25.0 : 40.0))
              << " seed=" << kSeed << " " << newton_config_text(ncfg) << "\n";
    std::cout << "check,detail,lhs,rhs,residual,tolerance,status\n";
    VerifyReport rep;
    if (args.check == "lemma1") {
        verify_lemma1(args, rep);
        return rep.all_pass ? 0 : 3;
    }
    const ProblemInstance prob = parse_problem(read_file(args.problem_file));
    if (args.check == "closedform")
        verify_closedform(prob, args, rep);
    else if (args.check == "cramer")
        verify_cramer(prob, args, ncfg, rep);
    else
        verify_duality(prob, args, rep);
    return rep.all_pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"L^p-norm log-barrier solver and transform verifier"};
    app.require_subcommand(1);

    NewtonConfig ncfg;
    auto add_newton_flags = [&](CLI::App* sub) {
        sub->add_option("--grad-tol", ncfg.grad_tol);
        sub->add_option("--max-iters", ncfg.max_iters);
        sub->add_option("--armijo-c", ncfg.armijo_c);
        sub->add_option("--backtrack-factor", ncfg.backtrack_factor);
        sub->add_option("--boundary-fraction", ncfg.boundary_fraction);
    };

    SolveArgs sargs;
    CLI::App* solve = app.add_subcommand("solve", "follow a barrier path");
    solve->add_option("--problem", sargs.problem_file)->required();
    solve->add_option("--side", sargs.side)
        ->required()
        ->check(CLI::IsMember({"primal", "dual"}));
    solve->add_option("--p0", sargs.sched.p0);
    solve->add_option("--growth", sargs.sched.growth);
    solve->add_option("--stages", sargs.sched.stages);
    solve->add_option("--start", sargs.start_text);
    add_newton_flags(solve);

    StudyArgs stargs;
    CLI::App* study = app.add_subcommand("study", "per-stage error table vs oracle");
    study->add_option("--problem", stargs.problem_file)->required();
    study->add_option("--p0", stargs.sched.p0);
    study->add_option("--growth", stargs.sched.growth);
    study->add_option("--stages", stargs.sched.stages);
    study->add_option("--box", stargs.box)->expected(2);
    study->add_option("--nodes", stargs.nodes);
    add_newton_flags(study);

    VerifyArgs vargs;
    CLI::App* verify = app.add_subcommand("verify", "transform and duality checks");
    verify->add_option("--problem", vargs.problem_file);
    verify->add_option("--check", vargs.check)
        ->required()
        ->check(CLI::IsMember({"cramer", "closedform", "lemma1", "duality"}));
    verify->add_option("--p", vargs.p);
    verify->add_option("--ygrid", vargs.ygrid)->expected(3);
    verify->add_option("--zgrid", vargs.zgrid)->expected(3);
    verify->add_option("--drop", vargs.drop);
    verify->add_option("--box", vargs.box)->expected(2);
    add_newton_flags(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (solve->parsed()) return cmd_solve(sargs, ncfg);
        if (study->parsed()) return cmd_study(stargs, ncfg);
        if (verify->parsed()) {
            if (vargs.check != "lemma1" && vargs.problem_file.empty()) {
                std::cerr << "error: --problem required for check \"" << vargs.check
                          << "\"\n";
                return 1;
            }
            return cmd_verify(vargs, ncfg);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
