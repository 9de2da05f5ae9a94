#include "gmink/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace gmink {

namespace {

std::string fmt6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Logger {
    std::ostream& err;
    LogLevel level;
    void info(const std::string& m) const
    {
        if (level != LogLevel::quiet) err << "[gmink] " << m << "\n";
    }
    void trace(const std::string& m) const
    {
        if (level == LogLevel::trace) err << "[gmink] " << m << "\n";
    }
};

std::filesystem::path ensure_out_dir(const std::string& out)
{
    std::filesystem::path dir(out);
    std::filesystem::create_directories(dir);
    return dir;
}

void print_solve_lines(std::ostream& out, const std::string& name, const SolveReport& rep)
{
    out << name << " converged " << (rep.converged ? 1 : 0) << "\n";
    out << name << " gamma_n " << fmt6(rep.gamma_n) << "\n";
    out << name << " residual_sup " << fmt6(rep.residual_sup) << "\n";
    out << name << " gamma_crossed_half " << (rep.gamma_crossed_half ? 1 : 0) << "\n";
    out << name << " mass_threshold_ok " << (rep.mass_threshold_ok ? 1 : 0) << "\n";
    out << name << " apriori_passed " << (rep.apriori.passed ? 1 : 0) << "\n";
    if (!rep.failure_reason.empty())
        out << name << " failure_reason " << rep.failure_reason << "\n";
}

void write_solve_artifacts(const std::string& out_dir, const std::string& name,
                           const SolveReport& rep, const Logger& log)
{
    if (out_dir.empty()) return;
    const auto dir = ensure_out_dir(out_dir);
    if (rep.converged) {
        const auto body = (dir / (name + ".body")).string();
        write_body(body, rep.solution);
        log.info("wrote " + body);
    }
    write_text_atomic((dir / (name + ".report")).string(), format_solve_report(rep));
    write_text_atomic((dir / (name + ".trace.csv")).string(),
                      format_trace_csv(rep.homotopy_trace));
    log.info("wrote " + (dir / (name + ".report")).string() + " and trace csv");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const Logger log{err, log_level()};

    CLI::App app{"Gaussian volumes, L_p Gaussian surface area measures, and the two-branch "
                 "Minkowski solver on S^1 and S^2"};
    app.name("gmink");
    app.require_subcommand(1);

    int n = 2;
    double p = 1.0, C = 0.5, dt = 0.1;
    std::string grid_text, density_text, branch_text = "small", out_dir, body_path, suite;
    std::uint64_t seed = 1;
    std::int64_t mc_samples = 200000;
    int trials = 20, rate_points = 20;

    auto* cmd_threshold =
        app.add_subcommand("threshold", "Print the isotropic and L1 mass thresholds");
    cmd_threshold->add_option("--n", n, "ambient dimension (2 or 3)")->required();
    cmd_threshold->add_option("--p", p, "L_p parameter, 1 <= p < n")->required();

    auto* cmd_isotropic =
        app.add_subcommand("isotropic", "Analyze constant solutions of the isotropic equation");
    cmd_isotropic->add_option("--n", n, "ambient dimension (2 or 3)")->required();
    cmd_isotropic->add_option("--p", p, "L_p parameter, 1 <= p < n")->required();
    cmd_isotropic->add_option("--C", C, "right-hand constant")->required();
    cmd_isotropic->add_option("--out", out_dir, "directory for isotropic.report");

    auto* cmd_volume = app.add_subcommand("volume", "Gaussian volume of a body file");
    cmd_volume->add_option("body", body_path, "body file")->required();
    cmd_volume->add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
    cmd_volume->add_option("--seed", seed, "Monte Carlo seed");
    cmd_volume->add_option("--out", out_dir, "directory for volume.report");

    auto* cmd_measure =
        app.add_subcommand("measure", "L_p Gaussian surface area measure of a body file");
    cmd_measure->add_option("body", body_path, "body file")->required();
    cmd_measure->add_option("--out", out_dir, "directory for measure.density");

    auto* cmd_solve = app.add_subcommand("solve", "Solve the Minkowski problem for a density");
    cmd_solve->add_option("--n", n, "ambient dimension (2 or 3)")->required();
    cmd_solve->add_option("--p", p, "L_p parameter, 1 <= p < n")->required();
    cmd_solve->add_option("--density", density_text, "family:params or @file")->required();
    cmd_solve->add_option("--branch", branch_text, "small, large, or both");
    cmd_solve->add_option("--grid", grid_text, "resolution: N (S^1) or NLATxNLON (S^2)");
    cmd_solve->add_option("--out", out_dir, "directory for body/report/trace files");
    cmd_solve->add_option("--dt", dt, "initial homotopy step");

    auto* cmd_verify = app.add_subcommand("verify", "Run a property suite");
    cmd_verify->add_option("--suite", suite, "isoperimetric, weak-convergence, or constancy")
        ->required();
    cmd_verify->add_option("--n", n, "ambient dimension (2 or 3)");
    cmd_verify->add_option("--p", p, "L_p parameter");
    cmd_verify->add_option("--C", C, "isotropic constant (constancy suite)");
    cmd_verify->add_option("--trials", trials, "trial count");
    cmd_verify->add_option("--rate-points", rate_points, "epsilon ladder length");
    cmd_verify->add_option("--seed", seed, "base seed");
    cmd_verify->add_option("--out", out_dir, "directory for verify.report");

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("gmink");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (cmd_threshold->parsed()) {
            out << "isotropic_threshold " << fmt6(isotropic_threshold(n, p)) << "\n";
            out << "mass_threshold " << fmt6(mass_threshold(n, p)) << "\n";
            return 0;
        }

        if (cmd_isotropic->parsed()) {
            const IsotropicReport rep = analyze_isotropic(n, p, C);
            out << "threshold " << fmt6(rep.threshold) << "\n";
            out << "root_count " << rep.root_count << "\n";
            for (const double r : rep.roots) out << "root " << fmt6(r) << "\n";
            if (!out_dir.empty()) {
                const auto dir = ensure_out_dir(out_dir);
                write_text_atomic((dir / "isotropic.report").string(),
                                  format_isotropic_report(rep));
            }
            return 0;
        }

        if (cmd_volume->parsed()) {
            const SupportField body = read_body(body_path);
            const double gamma = gaussian_volume(body);
            const McEstimate mc = gaussian_volume_mc(body, mc_samples, seed);
            const double sigma = mc.std_error > 0.0
                                     ? std::abs(gamma - mc.value) / mc.std_error
                                     : (gamma == mc.value ? 0.0 : std::numeric_limits<double>::infinity());
            out << "gamma_n " << fmt6(gamma) << "\n";
            out << "mc_value " << fmt6(mc.value) << "\n";
            out << "mc_std_error " << fmt6(mc.std_error) << "\n";
            out << "mc_sigma_distance " << fmt6(sigma) << "\n";
            if (!out_dir.empty()) {
                const auto dir = ensure_out_dir(out_dir);
                std::string s = "gmink-report 1\nkind volume\n";
                char buf[64];
                std::snprintf(buf, sizeof buf, "gamma_n %.17g\n", gamma);
                s += buf;
                std::snprintf(buf, sizeof buf, "mc_value %.17g\n", mc.value);
                s += buf;
                std::snprintf(buf, sizeof buf, "mc_std_error %.17g\n", mc.std_error);
                s += buf;
                write_text_atomic((dir / "volume.report").string(), s);
            }
            return 0;
        }

        if (cmd_measure->parsed()) {
            const SupportField body = read_body(body_path);
            const MeasureDensity d = surface_measure_density(body);
            const double total = surface_measure_total(d);
            const double total_radial = surface_measure_total_radial(body);
            out << "total " << fmt6(total) << "\n";
            out << "total_radial " << fmt6(total_radial) << "\n";
            if (!out_dir.empty()) {
                const auto dir = ensure_out_dir(out_dir);
                write_density((dir / "measure.density").string(), d);
                log.info("wrote " + (dir / "measure.density").string());
            }
            return 0;
        }

        if (cmd_solve->parsed()) {
            if (branch_text != "small" && branch_text != "large" && branch_text != "both")
                throw std::invalid_argument("--branch must be small, large, or both");

            const DensitySpec spec = parse_density_spec(density_text);
            MeasureDensity f;
            if (spec.kind == "samples") {
                std::shared_ptr<const DirectionGrid> grid;
                if (!grid_text.empty()) grid = build_grid(n, parse_resolution(grid_text));
                f = realize_density(spec, grid);
                if (f.grid->dim != n)
                    throw std::invalid_argument("sample density dimension does not match --n");
                // The solver rejects densities that are not exactly even.
                // Sample files carry roundoff-scale odd parts (e.g. measures
                // of even bodies); fold those away, but refuse real asymmetry.
                if (!is_even(f.values, *f.grid)) {
                    const Eigen::VectorXd even = symmetrize_even(f.values, *f.grid);
                    const double odd = (f.values - even).lpNorm<Eigen::Infinity>();
                    if (odd > 1e-10 * f.values.lpNorm<Eigen::Infinity>())
                        throw std::invalid_argument(
                            "sample density is not even under the antipodal map");
                    log.info("folded a roundoff-scale odd part out of the sample density");
                    f.values = even;
                    f.l1_norm = f.grid->weights.dot(f.values);
                }
            } else {
                const auto grid = grid_text.empty() ? default_grid(n)
                                                    : build_grid(n, parse_resolution(grid_text));
                f = realize_density(spec, grid);
            }

            SolveConfig cfg;
            cfg.p = p;
            cfg.homotopy_dt_init = dt;
            std::vector<Branch> branches;
            if (branch_text == "small" || branch_text == "both") branches.push_back(Branch::small);
            if (branch_text == "large" || branch_text == "both") branches.push_back(Branch::large);

            std::vector<SolveReport> reports;
            bool all_ok = true;
            for (const Branch b : branches) {
                cfg.branch = b;
                const char* name = b == Branch::small ? "small" : "large";
                log.info(std::string("solving the ") + name + " branch");
                SolveReport rep = homotopy_solve(f, cfg);
                if (!rep.mass_threshold_ok)
                    err << "warning: |f|_L1 is at or above the small-branch mass threshold; "
                           "proceeding anyway\n";
                if (log.level == LogLevel::trace)
                    for (const auto& pt : rep.homotopy_trace)
                        log.trace("t=" + fmt6(pt.t) + " gamma=" + fmt6(pt.gamma_n)
                                  + " residual=" + fmt6(pt.residual_sup));
                all_ok = all_ok && rep.converged;
                reports.push_back(std::move(rep));
            }

            const bool collapsed =
                reports.size() == 2 && reports[0].converged && reports[1].converged
                && hausdorff_distance(reports[0].solution, reports[1].solution) < 1e-6;
            if (collapsed) {
                out << "branch_collapse 1\n";
                print_solve_lines(out, "small", reports[0]);
                write_solve_artifacts(out_dir, "small", reports[0], log);
                return 0;
            }

            for (std::size_t i = 0; i < reports.size(); ++i) {
                const char* name = branches[i] == Branch::small ? "small" : "large";
                print_solve_lines(out, name, reports[i]);
                write_solve_artifacts(out_dir, name, reports[i], log);
            }
            if (reports.size() == 2 && reports[0].converged && reports[1].converged) {
                out << "hausdorff_distance "
                    << fmt6(hausdorff_distance(reports[0].solution, reports[1].solution)) << "\n";
                const double min_gap =
                    (reports[1].solution.values - reports[0].solution.values).minCoeff();
                out << "pointwise_ordered " << (min_gap > 0.0 ? 1 : 0) << "\n";
            }
            return all_ok ? 0 : 1;
        }

        if (cmd_verify->parsed()) {
            PropertyRunRecord rec;
            if (suite == "isoperimetric") {
                rec = check_isoperimetric(trials, n, p, seed);
            } else if (suite == "weak-convergence") {
                SupportField target = random_even_body(n, seed, 0.1);
                target.p = p;
                rec = check_weak_convergence(target, rate_points, seed + 1);
            } else if (suite == "constancy") {
                rec = probe_isotropic_constancy(n, p, C, trials);
            } else {
                throw std::invalid_argument(
                    "unknown suite '" + suite
                    + "' (expected isoperimetric, weak-convergence, or constancy)");
            }
            out << "name " << rec.name << "\n";
            out << "trials " << rec.trials << "\n";
            out << "failures " << rec.failures << "\n";
            out << "worst_margin " << fmt6(rec.worst_margin) << "\n";
            if (!out_dir.empty()) {
                const auto dir = ensure_out_dir(out_dir);
                write_text_atomic((dir / "verify.report").string(), format_property_record(rec));
            }
            return rec.failures == 0 ? 0 : 1;
        }
    } catch (const VersionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace gmink
