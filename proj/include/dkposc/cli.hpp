#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "dkposc/config.hpp"
#include "dkposc/errors.hpp"
#include "dkposc/fd_oracle.hpp"
#include "dkposc/laguerre.hpp"
#include "dkposc/model.hpp"
#include "dkposc/nu.hpp"
#include "dkposc/sweep.hpp"
#include "dkposc/version.hpp"
#include "dkposc/wavefunction.hpp"

namespace dkposc {
namespace cli {

namespace detail {

inline ModelParams load_params(const std::string& config_path) {
    ModelParams p = config_path.empty() ? ModelParams{} : parse_config_file(config_path);
    return validate(p);
}

/// a > 0 opens a closed-timelike-curve region r < a/alpha; the solver does
/// not restrict r, so flag it once per invocation.
inline void print_ctc_advisory(const ModelParams& p, std::ostream& err) {
    if (p.a > 0.0) {
        err << "advisory: a > 0: closed timelike curves exist for r < a/alpha = "
            << dkposc::detail::format_g17(p.a / p.alpha) << "; the solver domain is unrestricted\n";
    }
}

inline void emit_params_echo(const ModelParams& p, std::ostream& out) {
    using dkposc::detail::format_g17;
    out << "# params M=" << format_g17(p.M) << " omega=" << format_g17(p.omega)
        << " k=" << format_g17(p.k) << " m=" << p.m << " alpha=" << format_g17(p.alpha)
        << " a=" << format_g17(p.a) << " delta1=" << format_g17(p.delta1)
        << " delta2=" << format_g17(p.delta2) << "\n";
}

inline int run_spectrum(const ModelParams& params, QuantizationMode mode, Branch branch,
                        int levels, std::ostream& out, std::ostream& err) {
    print_ctc_advisory(params, err);
    using dkposc::detail::format_g17;
    out << "# " << kToolName << " " << kVersion << " spectrum\n";
    emit_params_echo(params, out);
    out << "# mode=" << to_string(mode) << " branch=" << to_string(branch)
        << " levels=" << levels << "\n";
    out << "n,E,residual\n";
    for (int n = 0; n < levels; ++n) {
        const EnergySolution sol = solve_energy(params, n, mode, branch);
        out << n << "," << format_g17(sol.energy) << "," << format_g17(sol.residual) << "\n";
    }
    return 0;
}

inline int run_wavefunction(const ModelParams& params, QuantizationMode mode, Branch branch,
                            int levels, double r_max, int samples, std::ostream& out,
                            std::ostream& err) {
    print_ctc_advisory(params, err);
    using dkposc::detail::format_g17;

    std::vector<WavefunctionSpec> specs;
    double auto_r_max = 0.0;
    for (int n = 0; n < levels; ++n) {
        const EnergySolution sol = solve_energy(params, n, mode, branch);
        const WavefunctionSpec spec = make_wavefunction_spec(
            params, n, sol.energy, WavefunctionConvention::reduced_consistent);
        auto_r_max = std::max(auto_r_max, confinement_r_max(spec.lambda_conf, spec.theta));
        specs.push_back(spec);
    }
    const double rmax = r_max > 0.0 ? r_max : auto_r_max;

    out << "# " << kToolName << " " << kVersion << " wavefunction\n";
    emit_params_echo(params, out);
    out << "# mode=" << to_string(mode) << " branch=" << to_string(branch)
        << " levels=" << levels << " r_max=" << format_g17(rmax) << " samples=" << samples
        << "\n";
    out << "n,r,phi1,density\n";
    for (const WavefunctionSpec& spec : specs) {
        const double norm = normalize(spec, rmax);
        for (int j = 1; j <= samples; ++j) {
            const double r = rmax * static_cast<double>(j) / static_cast<double>(samples);
            const double phi = radial_wavefunction(spec, r);
            out << spec.n << "," << format_g17(r) << "," << format_g17(phi) << ","
                << format_g17(norm * norm * phi * phi) << "\n";
        }
    }
    return 0;
}

inline int run_sweep_command(const SweepSpec& spec, int jobs, const std::string& out_path,
                             std::ostream& out, std::ostream& err) {
    print_ctc_advisory(spec.base, err);
    const SweepTable table = run_sweep(spec, jobs);
    if (out_path.empty()) {
        write_csv(table, out);
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            throw ConfigError("cannot open output file '" + out_path + "'");
        }
        write_csv(table, file);
    }
    return 0;
}

struct CheckLine {
    std::string label;
    bool pass = false;
    std::string detail;
};

/// Oracle adjudication plus the invariant suite behind `validate`.
inline bool run_validation(int trials, std::uint64_t seed, int grid_points, std::ostream& out) {
    using dkposc::detail::format_g17;
    std::vector<CheckLine> checks;

    out << kToolName << " " << kVersion << " validate: trials=" << trials << " seed=" << seed
        << " levels=0..3 grids=" << grid_points << "/" << 2 * grid_points << "\n";

    // 1. trivial kernel: chi^2 = 1/4 removes the centrifugal term; the
    // half-line oscillator spectrum 3, 7, 11 is exact, convergence is O(h^2).
    {
        CheckLine c;
        c.label = "trivial kernel (lambda=1, chi^2=1/4)";
        const double exact[3] = {3.0, 7.0, 11.0};
        FdGrid coarse{12.0, 2000};
        FdGrid fine{12.0, 4000};
        const std::vector<double> vc = fd_spectrum(1.0, 0.25, coarse, 3);
        const std::vector<double> vf = fd_spectrum(1.0, 0.25, fine, 3);
        double err_c = 0.0, err_f = 0.0;
        for (int i = 0; i < 3; ++i) {
            err_c = std::max(err_c, std::abs(vc[i] - exact[i]));
            err_f = std::max(err_f, std::abs(vf[i] - exact[i]));
        }
        const double ratio = err_c / err_f;
        c.pass = err_c <= 1e-3 && ratio >= 3.8 && ratio <= 4.2;
        c.detail = "max |Lambda - exact| = " + format_g17(err_c) +
                   ", Richardson error ratio = " + format_g17(ratio);
        checks.push_back(c);
    }

    // 2. analytic limit: a=0, delta1=1, delta2=0, alpha=1, m=0, k=0, M=omega=1
    // reduces to E^2 = 4n + 3.
    {
        CheckLine c;
        c.label = "analytic limit E = sqrt(4n+3)";
        ModelParams limit;
        limit.M = 1.0;
        limit.omega = 1.0;
        limit.k = 0.0;
        limit.m = 0;
        limit.alpha = 1.0;
        limit.a = 0.0;
        limit.delta1 = 1.0;
        limit.delta2 = 0.0;
        double worst = 0.0;
        for (int n = 0; n < 3; ++n) {
            const double e =
                solve_energy(limit, n, QuantizationMode::nu_standard, Branch::positive).energy;
            worst = std::max(worst, std::abs(e - std::sqrt(4.0 * n + 3.0)));
        }
        c.pass = worst <= 1e-10;
        c.detail = "max |E - exact| = " + format_g17(worst);
        checks.push_back(c);
    }

    // 3.-5. need the random sets.
    const std::vector<ModelParams> sets = random_parameter_sets(trials, seed);
    const std::vector<int> levels = {0, 1, 2, 3};

    {
        CheckLine c;
        c.label = "oracle adjudication";
        try {
            GridPolicy policy;
            policy.points = grid_points;
            const OracleVerdict verdict = adjudicate(sets, levels, policy);
            const double matched = verdict.adjudicated_mode == QuantizationMode::nu_standard
                                       ? verdict.max_rel_error_nu_standard
                                       : verdict.max_rel_error_paper_literal;
            const double other = verdict.adjudicated_mode == QuantizationMode::nu_standard
                                     ? verdict.max_rel_error_paper_literal
                                     : verdict.max_rel_error_nu_standard;
            c.pass = matched <= 1e-5 && other >= 1e-2;
            c.detail = std::string("adjudicated mode = ") + to_string(verdict.adjudicated_mode) +
                       "; nu-standard max rel err = " +
                       format_g17(verdict.max_rel_error_nu_standard) +
                       "; paper-literal max rel err = " +
                       format_g17(verdict.max_rel_error_paper_literal) +
                       "; cases = " + std::to_string(verdict.cases);
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string(e.kind()) + ": " + e.what();
        }
        checks.push_back(c);
    }

    {
        CheckLine c;
        c.label = "quartic/scan agreement";
        double worst = 0.0;
        for (const ModelParams& p : sets) {
            for (int n : levels) {
                const EnergySolution sol =
                    solve_energy(p, n, QuantizationMode::nu_standard, Branch::positive);
                worst = std::max(worst, sol.quartic_agreement);
            }
        }
        c.pass = worst <= 1e-8;
        c.detail = "max distance to accepted quartic root = " + format_g17(worst);
        checks.push_back(c);
    }

    {
        CheckLine c;
        c.label = "node counts";
        bool ok = true;
        int checked = 0;
        for (std::size_t i = 0; i < sets.size() && i < 3; ++i) {
            for (int n : levels) {
                const EnergySolution sol =
                    solve_energy(sets[i], n, QuantizationMode::nu_standard, Branch::positive);
                const WavefunctionSpec spec = make_wavefunction_spec(
                    sets[i], n, sol.energy, WavefunctionConvention::reduced_consistent);
                if (count_nodes(spec, default_node_grid(spec)) != n) ok = false;
                ++checked;
            }
        }
        c.pass = ok;
        c.detail = std::to_string(checked) + " states checked";
        checks.push_back(c);
    }

    bool all = true;
    for (const CheckLine& c : checks) {
        out << (c.pass ? "PASS" : "FAIL") << " " << c.label << ": " << c.detail << "\n";
        all = all && c.pass;
    }
    out << "verdict: " << (all ? "PASS" : "FAIL") << "\n";
    return all;
}

}  // namespace detail

/// Entry point behind main(); `args` excludes the program name. Exit codes:
/// 0 success, 1 solver/validation failure, 2 usage or configuration error.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bound-state solver for a generalized oscillator with a linear-plus-inverse "
                 "radial coupling on a spinning conical background",
                 kToolName};
    app.require_subcommand(1);

    const std::vector<std::string> mode_names = {"nu-standard", "paper-literal"};
    const std::vector<std::string> branch_names = {"positive", "negative"};
    const std::vector<std::string> preset_names = {"fig1", "fig2", "fig3", "fig4", "fig5"};
    const std::vector<std::string> param_names = {"alpha", "omega", "a", "delta1", "delta2"};

    std::string config_path;
    std::string mode_str = "nu-standard";
    std::string branch_str = "positive";
    int levels = 4;

    const std::string config_help =
        "line-oriented key=value parameter file; keys: M, omega, k, m, alpha, a, delta1, "
        "delta2 (m is a signed integer); missing keys default to 1 except m and k, which "
        "default to 0; '#' lines are comments";

    CLI::App* spectrum = app.add_subcommand("spectrum", "Print an n, E table");
    spectrum->add_option("--config", config_path, config_help);
    spectrum->add_option("--mode", mode_str, "quantization condition variant")
        ->check(CLI::IsMember(mode_names));
    spectrum->add_option("--branch", branch_str, "energy sign branch")
        ->check(CLI::IsMember(branch_names));
    spectrum->add_option("--levels", levels, "number of levels n = 0..levels-1")
        ->check(CLI::PositiveNumber);

    std::string preset;
    std::string param_str;
    double from = 0.0, to = 0.0;
    int steps = 25;
    std::string out_path;
    int jobs = 1;

    CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep, emitted as CSV");
    sweep->add_option("--config", config_path, config_help + " (custom sweeps only)");
    sweep->add_option("--preset", preset, "preset sweep fig1..fig5")
        ->check(CLI::IsMember(preset_names));
    CLI::Option* opt_param = sweep->add_option("--param", param_str, "parameter to sweep")
                                 ->check(CLI::IsMember(param_names));
    CLI::Option* opt_from = sweep->add_option("--from", from, "sweep lower bound");
    CLI::Option* opt_to = sweep->add_option("--to", to, "sweep upper bound");
    CLI::Option* opt_steps =
        sweep->add_option("--steps", steps, "number of grid points")->check(CLI::PositiveNumber);
    CLI::Option* opt_levels_sweep =
        sweep->add_option("--levels", levels, "number of levels n = 0..levels-1")
            ->check(CLI::PositiveNumber);
    CLI::Option* opt_mode_sweep = sweep->add_option("--mode", mode_str, "quantization variant")
                                      ->check(CLI::IsMember(mode_names));
    CLI::Option* opt_branch_sweep = sweep->add_option("--branch", branch_str, "energy sign branch")
                                        ->check(CLI::IsMember(branch_names));
    sweep->add_option("--out", out_path, "output CSV path (default: stdout)");
    sweep->add_option("--jobs", jobs, "worker pool width")->check(CLI::PositiveNumber);

    double r_max = 0.0;
    int samples = 400;

    CLI::App* wavefunction = app.add_subcommand("wavefunction", "Sample r, Phi1(r), |N Phi1|^2");
    wavefunction->add_option("--config", config_path, config_help);
    wavefunction->add_option("--mode", mode_str, "quantization variant")
        ->check(CLI::IsMember(mode_names));
    wavefunction->add_option("--branch", branch_str, "energy sign branch")
        ->check(CLI::IsMember(branch_names));
    wavefunction->add_option("--levels", levels, "number of levels n = 0..levels-1")
        ->check(CLI::PositiveNumber);
    wavefunction->add_option("--r-max", r_max, "sampling radius (default: automatic)");
    wavefunction->add_option("--samples", samples, "samples per level")
        ->check(CLI::PositiveNumber);
    wavefunction->add_option("--out", out_path, "output CSV path (default: stdout)");

    int trials = 20;
    std::uint64_t seed = 1;

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Run the oracle adjudication and invariant suite");
    validate_cmd->add_option("--trials", trials, "number of random parameter sets")
        ->check(CLI::Range(10, 1000));
    validate_cmd->add_option("--seed", seed, "random seed");

    std::vector<const char*> argv;
    argv.push_back(kToolName);
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (spectrum->parsed()) {
            const ModelParams params = detail::load_params(config_path);
            require_confining(params);
            return detail::run_spectrum(params, parse_mode(mode_str), parse_branch(branch_str),
                                        levels, out, err);
        }
        if (sweep->parsed()) {
            SweepSpec spec;
            if (!preset.empty()) {
                if (!config_path.empty()) {
                    throw ConfigError("--preset and --config are mutually exclusive");
                }
                if (*opt_param || *opt_from || *opt_to) {
                    throw ConfigError("--preset already fixes --param/--from/--to");
                }
                spec = preset_spec(preset);
            } else {
                if (!*opt_param || !*opt_from || !*opt_to) {
                    throw ConfigError("sweep needs either --preset or --param, --from and --to");
                }
                spec.base = detail::load_params(config_path);
                spec.swept = parse_swept_param(param_str);
                spec.lo = from;
                spec.hi = to;
                spec.levels = {0, 1, 2, 3};
            }
            if (*opt_steps) spec.steps = steps;
            if (*opt_levels_sweep) {
                spec.levels.clear();
                for (int n = 0; n < levels; ++n) spec.levels.push_back(n);
            }
            if (*opt_mode_sweep) spec.mode = parse_mode(mode_str);
            if (*opt_branch_sweep) spec.branch = parse_branch(branch_str);
            return detail::run_sweep_command(spec, jobs, out_path, out, err);
        }
        if (wavefunction->parsed()) {
            const ModelParams params = detail::load_params(config_path);
            require_confining(params);
            if (out_path.empty()) {
                return detail::run_wavefunction(params, parse_mode(mode_str),
                                                parse_branch(branch_str), levels, r_max, samples,
                                                out, err);
            }
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                throw ConfigError("cannot open output file '" + out_path + "'");
            }
            return detail::run_wavefunction(params, parse_mode(mode_str), parse_branch(branch_str),
                                            levels, r_max, samples, file, err);
        }
        if (validate_cmd->parsed()) {
            return detail::run_validation(trials, seed, 4000, out) ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        err << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 2;
    } catch (const SpecError& e) {
        err << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateError& e) {
        err << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace cli
}  // namespace dkposc
