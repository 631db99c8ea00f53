// neelwall: solve, tabulate and verify Néel wall profiles from the command line.
//
// Exit status: 0 when every solve converged (and, for verify, every check
// passed), 2 when some solve did not converge or a check failed, 1 on usage or
// I/O errors.

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neel/neel.hpp"

namespace {

using namespace neel;

struct SolveFlags {
    double nu = 1.0;
    double h = 0.0;
    double half_length = 40.0;
    int points = 4096;
    double tol = 1e-6;
    int max_iter = 20000;
    std::string out = "-";
    std::string format;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f, bool with_params)
{
    if (with_params) {
        cmd->add_option("--nu", f.nu, "thin film parameter nu > 0")->capture_default_str();
        cmd->add_option("--h", f.h, "transverse field h in [0, 1)")->capture_default_str();
    }
    cmd->add_option("--half-length", f.half_length, "domain is [-L, L]")->capture_default_str();
    cmd->add_option("--points", f.points, "number of grid intervals (even)")->capture_default_str();
    cmd->add_option("--tol", f.tol, "sup norm of the gradient at convergence")->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "iteration cap")->capture_default_str();
    cmd->add_option("--out", f.out, "output file, - for stdout")->capture_default_str();
    cmd->add_option("--format", f.format, "json or csv (default: from the file extension, else json)")
        ->check(CLI::IsMember({"json", "csv"}));
}

Format pick_format(const std::string& flag, const std::string& path, Format fallback)
{
    if (!flag.empty()) return format_from_string(flag);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return Format::csv;
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return Format::json;
    return fallback;
}

void write_output(const std::string& path, const std::string& text)
{
    if (path == "-")
        std::cout << text;
    else
        write_text_file(path, text);
}

SolveOptions options_from(const SolveFlags& f)
{
    SolveOptions o;
    o.tol = f.tol;
    o.max_iter = f.max_iter;
    return o;
}

int run_solve(const SolveFlags& f, double noise, unsigned long long seed)
{
    const auto grid = make_grid(f.half_length, f.points);
    const ModelParams params(f.nu, f.h);
    auto init = reference_profile(grid, params);
    if (noise > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, noise);
        auto v = init.values();
        for (int i = 1; i < grid.n_points(); ++i) v[i] += dist(rng);
        init = clamp_rotations(init.with_values(std::move(v)));
    }
    auto result = minimize(init, options_from(f));

    std::optional<VerificationReport> report;
    if (result.converged) {
        report = verify(result);
        if (report->decay) result.tail_amplitude = report->decay->amplitude_tailfit;
    }
    std::cerr << "nu=" << f.nu << " h=" << f.h << " status=" << to_string(result.status)
              << " iterations=" << result.iterations << " residual=" << result.residual_sup
              << " energy=" << format_number(result.energy.total) << "\n";

    const auto format = pick_format(f.format, f.out, Format::json);
    if (format == Format::csv) {
        write_output(f.out, to_csv(result));
    } else {
        auto j = to_json(result, report ? &*report : nullptr);
        j["initialization"] = noise > 0.0
                                  ? Json{{"kind", "reference_with_noise"}, {"sigma", noise}, {"seed", seed}}
                                  : Json{{"kind", "reference"}};
        write_output(f.out, to_json_text(j));
    }
    return result.converged ? 0 : 2;
}

int run_green(double nu, double h, double xmax, int samples, const std::string& out, const std::string& fmt)
{
    const auto table = tabulate_green(ModelParams(nu, h), xmax, samples);
    const auto format = pick_format(fmt, out, Format::csv);
    write_output(out, format == Format::json ? to_json_text(to_json(table)) : to_csv(table));
    return 0;
}

int run_sweep(const std::vector<double>& nus, const std::vector<double>& hs, const SolveFlags& f, unsigned threads)
{
    const auto table = sweep(nus, hs, options_from(f), SweepGrid{f.half_length, f.points}, threads);
    const auto format = pick_format(f.format, f.out, Format::csv);
    write_output(f.out, format == Format::csv ? to_csv(table) : to_json_text(to_json(table)));
    for (const auto& r : table.rows)
        if (!r.error.empty()) std::cerr << "nu=" << r.nu << " h=" << r.h << ": " << r.error << "\n";
    return table.all_converged() ? 0 : 2;
}

int run_verify(const std::string& in, const std::string& out)
{
    const auto result = load_solve_result(in);
    if (!result.converged) {
        std::cerr << in << ": solve did not converge (" << to_string(result.status) << ")\n";
        return 2;
    }
    const auto report = verify(result);
    write_output(out, to_json_text(to_json(report)));
    return report.all_ok() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Néel wall profiles: solve, Green's function tables, parameter sweeps, verification"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit"); // -h would clash with --h

    SolveFlags solve_flags;
    double noise = 0.0;
    unsigned long long seed = 0;
    auto* solve_cmd = app.add_subcommand("solve", "minimize the wall energy for one (nu, h)");
    add_solve_flags(solve_cmd, solve_flags, true);
    solve_cmd->add_option("--noise", noise, "std. deviation of Gaussian noise added to the initial profile");
    solve_cmd->add_option("--seed", seed, "seed for --noise")->capture_default_str();

    double g_nu = 1.0, g_h = 0.0, xmax = 20.0;
    int samples = 201;
    std::string g_out = "-", g_format;
    auto* green_cmd = app.add_subcommand("green", "tabulate the fundamental solution G(x) on [0, xmax]");
    green_cmd->add_option("--nu", g_nu, "thin film parameter")->capture_default_str();
    green_cmd->add_option("--h", g_h, "transverse field")->capture_default_str();
    green_cmd->add_option("--xmax", xmax, "largest sample position")->capture_default_str();
    green_cmd->add_option("--samples", samples, "number of samples")->capture_default_str();
    green_cmd->add_option("--out", g_out, "output file, - for stdout")->capture_default_str();
    green_cmd->add_option("--format", g_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    SolveFlags sweep_flags;
    std::vector<double> nu_list{0.5, 1.0, 2.0}, h_list{0.0, 0.3, 0.5};
    unsigned threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "solve every (nu, h) cell of a grid");
    sweep_cmd->add_option("--nu-list", nu_list, "comma-separated nu values")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--h-list", h_list, "comma-separated h values")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
    add_solve_flags(sweep_cmd, sweep_flags, false);

    std::string verify_in, verify_out = "-";
    auto* verify_cmd = app.add_subcommand("verify", "check a saved solution: monotonicity, symmetry, range, residual, forcing, decay");
    verify_cmd->add_option("--in", verify_in, "solution JSON written by solve")->required();
    verify_cmd->add_option("--out", verify_out, "report file, - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*solve_cmd) return run_solve(solve_flags, noise, seed);
        if (*green_cmd) return run_green(g_nu, g_h, xmax, samples, g_out, g_format);
        if (*sweep_cmd) return run_sweep(nu_list, h_list, sweep_flags, threads);
        if (*verify_cmd) return run_verify(verify_in, verify_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
