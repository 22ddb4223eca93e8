// ttv: travel-time variability valuation toolkit.
//
// Subcommands: fit, measures, value, routes, tradeoff, verify.
// Exit status: 0 success, 2 validation error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttv/report.hpp"

namespace {

struct CliOptions {
    std::vector<std::string> inputs;
    std::string config_file;
    std::string dist = "auto", format = "json", grid, out = ".";
    double alpha = 2.0, beta = 1.0, gamma = 0.0, tau = 0.0, tol = 1e-9;
    std::uint64_t seed = 0;
    std::vector<std::string> models;
    // set after parsing from option counts / the config file
    bool has_alpha = false, has_beta = false, has_gamma = false, has_tau = false;
    bool has_dist = false, has_tol = false, has_seed = false, has_grid = false;
    bool has_out = false, has_format = false;
};

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0)
        ttv::fail(ttv::errc::validation_error, "bad --grid, expected start:stop:step");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double t = start + i * step;
        if (t > stop + 1e-12) break;
        grid.push_back(t);
        if (grid.size() > 10'000) ttv::fail(ttv::errc::validation_error, "grid too fine");
    }
    if (grid.empty()) ttv::fail(ttv::errc::validation_error, "empty grid");
    return grid;
}

ttv::DistChoice parse_dist(const std::string& d) {
    if (d == "logn") return ttv::DistChoice::Logn;
    if (d == "burr") return ttv::DistChoice::Burr;
    if (d == "empirical") return ttv::DistChoice::Empirical;
    if (d == "auto") return ttv::DistChoice::Auto;
    ttv::fail(ttv::errc::validation_error, "unknown --dist " + d);
}

ttv::ReportFormat parse_format(const std::string& f) {
    if (f == "json") return ttv::ReportFormat::Json;
    if (f == "csv") return ttv::ReportFormat::Csv;
    if (f == "both") return ttv::ReportFormat::Both;
    ttv::fail(ttv::errc::validation_error, "unknown --format " + f);
}

// key=value lines; command-line flags take precedence over the file.
void apply_config_file(CliOptions& opt) {
    if (opt.config_file.empty()) return;
    std::ifstream in(opt.config_file);
    if (!in) ttv::fail(ttv::errc::file_not_found, "cannot open config " + opt.config_file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            ttv::fail(ttv::errc::parse_error,
                      "config line " + std::to_string(line_no) + " is not key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        const auto num = [&] {
            try {
                return std::stod(value);
            } catch (const std::exception&) {
                ttv::fail(ttv::errc::parse_error,
                          "bad number in config line " + std::to_string(line_no));
            }
        };
        if (key == "alpha") { if (!opt.has_alpha) opt.alpha = num(); }
        else if (key == "beta") { if (!opt.has_beta) opt.beta = num(); }
        else if (key == "gamma") { if (!opt.has_gamma && !opt.has_tau) { opt.gamma = num(); opt.has_gamma = true; } }
        else if (key == "tau") { if (!opt.has_tau && !opt.has_gamma) { opt.tau = num(); opt.has_tau = true; } }
        else if (key == "dist") { if (!opt.has_dist) opt.dist = value; }
        else if (key == "tol") { if (!opt.has_tol) opt.tol = num(); }
        else if (key == "seed") { if (!opt.has_seed) opt.seed = std::stoull(value); }
        else if (key == "grid") { if (!opt.has_grid) { opt.grid = value; opt.has_grid = true; } }
        else if (key == "out") { if (!opt.has_out) opt.out = value; }
        else if (key == "format") { if (!opt.has_format) opt.format = value; }
        else if (key == "model") { opt.models.push_back(value); }
        else ttv::fail(ttv::errc::parse_error, "unknown config key '" + key + "'");
    }
}

int run(ttv::Command cmd, CliOptions& opt) {
    apply_config_file(opt);
    ttv::RunConfig cfg;
    cfg.alpha = opt.alpha;
    cfg.beta = opt.beta;
    if (opt.has_gamma) cfg.gamma = opt.gamma;
    if (opt.has_tau) cfg.tau = opt.tau;
    cfg.dist = parse_dist(opt.dist);
    cfg.tol = opt.tol;
    cfg.seed = opt.seed;
    if (opt.has_grid) cfg.tau_grid = parse_grid(opt.grid);
    cfg.output_dir = opt.out;
    cfg.format = parse_format(opt.format);
    cfg.models = opt.models;

    const auto outcome = ttv::run_command(cmd, cfg, opt.inputs);
    for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << "\n";
    if (cmd == ttv::Command::Verify && !outcome.checks_pass) {
        std::cerr << "verification checks failed (see report)\n";
        return 3;
    }
    return 0;
}

void add_common_flags(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--alpha", opt.alpha, "value of time (marginal cost of mean travel time)");
    sub->add_option("--beta", opt.beta, "early-arrival penalty rate");
    sub->add_option("--gamma", opt.gamma, "late-arrival penalty rate (tau derived)");
    sub->add_option("--tau", opt.tau, "punctuality requirement in (0,1) (gamma derived)");
    sub->add_option("--dist", opt.dist, "fit family: logn|burr|empirical|auto");
    sub->add_option("--tol", opt.tol, "relative tolerance override [1e-12, 1e-3]");
    sub->add_option("--seed", opt.seed, "random seed for simulation oracles");
    sub->add_option("--grid", opt.grid, "tau grid start:stop:step");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--format", opt.format, "report format: json|csv|both");
    sub->add_option("--model", opt.models, "builtin model spec (repeatable)");
    sub->add_option("--config", opt.config_file, "key=value config file (flags win)");
    sub->add_option("inputs", opt.inputs, "sample file(s)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"travel-time variability valuation toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    std::map<std::string, ttv::Command> commands{
        {"fit", ttv::Command::Fit},         {"measures", ttv::Command::Measures},
        {"value", ttv::Command::Value},     {"routes", ttv::Command::Routes},
        {"tradeoff", ttv::Command::Tradeoff}, {"verify", ttv::Command::Verify},
    };
    const std::map<std::string, std::string> help{
        {"fit", "fit a travel-time distribution to samples"},
        {"measures", "tail risk measures for one model"},
        {"value", "VOR/VOU/VOV valuation report"},
        {"routes", "scenario costs and ranking across routes"},
        {"tradeoff", "punctuality trade-off table"},
        {"verify", "derivative-sign, curvature, Monte Carlo and sweep checks"},
    };
    for (const auto& [name, cmd] : commands) {
        auto* sub = app.add_subcommand(name, help.at(name));
        add_common_flags(sub, opt);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto* sub = app.get_subcommands().front();
    opt.has_alpha = sub->count("--alpha") > 0;
    opt.has_beta = sub->count("--beta") > 0;
    opt.has_gamma = sub->count("--gamma") > 0;
    opt.has_tau = sub->count("--tau") > 0;
    opt.has_dist = sub->count("--dist") > 0;
    opt.has_tol = sub->count("--tol") > 0;
    opt.has_seed = sub->count("--seed") > 0;
    opt.has_grid = sub->count("--grid") > 0;
    opt.has_out = sub->count("--out") > 0;
    opt.has_format = sub->count("--format") > 0;
    if (opt.has_gamma && opt.has_tau) {
        std::cerr << "ValidationError: supply either --gamma or --tau, not both\n";
        return 2;
    }

    try {
        return run(commands.at(sub->get_name()), opt);
    } catch (const ttv::error& e) {
        std::cerr << e.what() << "\n";
        return ttv::is_numerical(e.code()) ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
