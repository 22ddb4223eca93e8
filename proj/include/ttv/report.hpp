#ifndef TTV_REPORT_HPP
#define TTV_REPORT_HPP

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ttv/errors.hpp"
#include "ttv/fitting.hpp"
#include "ttv/io.hpp"
#include "ttv/quantile_model.hpp"
#include "ttv/risk_measures.hpp"
#include "ttv/scenarios.hpp"
#include "ttv/valuation.hpp"
#include "ttv/verifier.hpp"

namespace ttv {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Command { Fit, Measures, Value, Routes, Tradeoff, Verify };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Fit:      return "fit";
        case Command::Measures: return "measures";
        case Command::Value:    return "value";
        case Command::Routes:   return "routes";
        case Command::Tradeoff: return "tradeoff";
        case Command::Verify:   return "verify";
    }
    return "?";
}

enum class ReportFormat { Json, Csv, Both };

inline const char* format_name(ReportFormat f) {
    switch (f) {
        case ReportFormat::Json: return "json";
        case ReportFormat::Csv:  return "csv";
        case ReportFormat::Both: return "both";
    }
    return "?";
}

/// One run's configuration. Preferences come as (alpha, beta, gamma) or
/// (alpha, beta, tau) - never both; with neither, gamma defaults to 4
/// (tau = 0.8). Everything is explicit; there is no environment-variable
/// configuration.
struct RunConfig {
    double alpha = 2.0;
    double beta = 1.0;
    std::optional<double> gamma;
    std::optional<double> tau;
    DistChoice dist = DistChoice::Auto;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> tau_grid;
    std::string output_dir = ".";
    ReportFormat format = ReportFormat::Json;
    std::vector<std::string> models;  // builtin model specs
};

inline void validate_config(const RunConfig& c) {
    if (c.gamma && c.tau)
        fail(errc::validation_error, "supply either gamma or tau, not both");
    if (!(c.tol >= 1e-12 && c.tol <= 1e-3))
        fail(errc::validation_error, "tol must lie in [1e-12, 1e-3]");
    if (c.tau_grid) {
        const auto& g = *c.tau_grid;
        if (g.empty()) fail(errc::validation_error, "empty tau grid");
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(g[i] > 0.0 && g[i] < 1.0))
                fail(errc::probability_out_of_range, "grid taus must lie in (0,1)");
            if (i > 0 && g[i] <= g[i - 1])
                fail(errc::validation_error, "tau grid must be strictly increasing");
        }
    }
}

inline SchedulingPreferences preferences_from(const RunConfig& c) {
    if (c.tau) return SchedulingPreferences::from_punctuality(c.alpha, c.beta, *c.tau);
    return SchedulingPreferences::from_rates(c.alpha, c.beta, c.gamma.value_or(4.0));
}

/// Builtin analytic models, available to every command:
///   builtin:uniform            mean 10, std 1 test distribution
///   builtin:logn:<xi>:<psi>    lognormal with the given log-space params
///   builtin:degenerate:<v>     point mass at v
inline QuantileModel parse_builtin(const std::string& spec) {
    const auto split = [&] {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= spec.size(); ++i) {
            if (i == spec.size() || spec[i] == ':') {
                parts.push_back(spec.substr(start, i - start));
                start = i + 1;
            }
        }
        return parts;
    }();
    const auto num = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(errc::validation_error, "bad number in model spec: " + spec);
        }
    };
    if (split.size() >= 2 && split[0] == "builtin") {
        if (split[1] == "uniform" && split.size() == 2)
            return QuantileModel::uniform_from_moments(10.0, 1.0);
        if (split[1] == "logn" && split.size() == 4)
            return QuantileModel::lognormal(num(split[2]), num(split[3]));
        if (split[1] == "degenerate" && split.size() == 3)
            return QuantileModel::degenerate(num(split[2]));
    }
    fail(errc::validation_error, "unknown model spec: " + spec +
                                     " (expected builtin:uniform, builtin:logn:<xi>:<psi> "
                                     "or builtin:degenerate:<v>)");
}

struct CommandOutcome {
    std::string report_json;                       // the envelope bytes
    std::vector<std::filesystem::path> files;      // everything written
    bool checks_pass = true;                       // verify-only: all checks green
};

namespace detail {

struct NamedModel {
    std::string name;
    QuantileModel model;
    std::vector<std::string> warnings;
    std::optional<FitResult> fit;          // present when fitted from samples
    std::vector<double> samples;           // raw ingested values (file sources)
};

inline JsonObject model_json(const QuantileModel& m) {
    JsonObject o;
    o.emplace_back("kind", kind_name(m.kind()));
    switch (m.kind()) {
        case Kind::Lognormal:
            o.emplace_back("xi", m.lognormal_xi());
            o.emplace_back("psi", m.lognormal_psi());
            break;
        case Kind::BurrXII:
            o.emplace_back("c", m.burr_c());
            o.emplace_back("k", m.burr_k());
            o.emplace_back("s", m.burr_s());
            break;
        case Kind::UniformTest:
            o.emplace_back("lo", m.uniform_lo());
            o.emplace_back("hi", m.uniform_hi());
            break;
        case Kind::Degenerate:
            o.emplace_back("value", m.degenerate_value());
            break;
        case Kind::Empirical:
            o.emplace_back("n", m.samples().size());
            o.emplace_back("interpolation",
                           m.interpolation() == Interpolation::Step ? "step" : "linear");
            break;
    }
    o.emplace_back("mean", m.mean());
    o.emplace_back("std", m.stddev());
    return o;
}

inline JsonObject prefs_json(const SchedulingPreferences& p) {
    return JsonObject{{"alpha", p.alpha()},
                      {"beta", p.beta()},
                      {"gamma", p.gamma()},
                      {"tau", p.tau()},
                      {"risk_averse", p.risk_averse()}};
}

inline JsonObject config_json(const RunConfig& c) {
    JsonObject o;
    o.emplace_back("alpha", c.alpha);
    o.emplace_back("beta", c.beta);
    o.emplace_back("gamma", c.gamma ? JsonValue(*c.gamma) : JsonValue(nullptr));
    o.emplace_back("tau", c.tau ? JsonValue(*c.tau) : JsonValue(nullptr));
    const char* dist = "auto";
    switch (c.dist) {
        case DistChoice::Logn:      dist = "logn"; break;
        case DistChoice::Burr:      dist = "burr"; break;
        case DistChoice::Empirical: dist = "empirical"; break;
        case DistChoice::Auto:      dist = "auto"; break;
    }
    o.emplace_back("dist", dist);
    o.emplace_back("tol", c.tol);
    o.emplace_back("seed", static_cast<std::size_t>(c.seed));
    if (c.tau_grid) {
        JsonArray grid;
        for (double t : *c.tau_grid) grid.emplace_back(t);
        o.emplace_back("grid", std::move(grid));
    } else {
        o.emplace_back("grid", nullptr);
    }
    o.emplace_back("out", c.output_dir);
    o.emplace_back("format", format_name(c.format));
    JsonArray models;
    for (const auto& s : c.models) models.emplace_back(s);
    o.emplace_back("models", std::move(models));
    return o;
}

inline NamedModel resolve_file_model(const std::string& path, const RunConfig& config,
                                     std::uint64_t& digest_chain) {
    auto ingest = ingest_samples(path);
    digest_chain = fnv1a64(ingest.digest, digest_chain);
    NamedModel nm{std::filesystem::path(path).stem().string(),
                  QuantileModel::degenerate(1.0),
                  std::move(ingest.warnings),
                  std::nullopt,
                  {}};
    auto fit = fit_model(ingest.values, config.dist);
    for (const auto& w : fit.warnings) nm.warnings.push_back(w);
    nm.model = fit.model;
    nm.fit = std::move(fit);
    nm.samples = std::move(ingest.values);
    return nm;
}

// Every model source named on the command line, builtins first then files,
// with the input digest chained over all of them.
inline std::vector<NamedModel> resolve_models(const RunConfig& config,
                                              const std::vector<std::string>& inputs,
                                              std::uint64_t& digest_chain) {
    std::vector<NamedModel> out;
    for (const auto& spec : config.models) {
        digest_chain = fnv1a64(spec, digest_chain);
        out.push_back({spec, parse_builtin(spec), {}, std::nullopt, {}});
    }
    for (const auto& path : inputs) {
        out.push_back(resolve_file_model(path, config, digest_chain));
    }
    return out;
}

inline NamedModel resolve_single_model(const RunConfig& config,
                                       const std::vector<std::string>& inputs,
                                       std::uint64_t& digest_chain) {
    auto models = resolve_models(config, inputs, digest_chain);
    if (models.size() != 1)
        fail(errc::validation_error,
             "this command takes exactly one model (one --model or one input file)");
    return std::move(models.front());
}

inline JsonObject summary_json(const SampleSummary& s) {
    JsonObject o;
    o.emplace_back("n", s.n);
    o.emplace_back("mean", s.mean);
    o.emplace_back("std", s.stddev);
    o.emplace_back("skewness", s.skewness ? JsonValue(*s.skewness) : JsonValue(nullptr));
    o.emplace_back("kurtosis", s.kurtosis ? JsonValue(*s.kurtosis) : JsonValue(nullptr));
    return o;
}

inline JsonObject risk_measures_json(const RiskMeasures& r) {
    return JsonObject{{"s_u", r.s_u},
                      {"ttb", r.ttb},
                      {"delta_ttm", r.delta_ttm},
                      {"delta_eed", r.delta_eed},
                      {"mett", r.mett},
                      {"zeta_ttm", r.zeta_ttm},
                      {"zeta_eed", r.zeta_eed},
                      {"zeta_ett", r.zeta_ett},
                      {"premium", r.premium}};
}

inline JsonObject departure_json(const DepartureAnalysis& d) {
    const char* crit = "custom";
    switch (d.criterion) {
        case DepartureCriterion::Mean: crit = "mean"; break;
        case DepartureCriterion::TTB:  crit = "ttb"; break;
        case DepartureCriterion::METT: crit = "mett"; break;
        case DepartureCriterion::Custom: crit = "custom"; break;
    }
    return JsonObject{{"departure", d.departure},
                      {"eu_magnitude", d.eu_magnitude},
                      {"criterion", crit},
                      {"degenerate", d.degenerate}};
}

inline JsonObject valuation_json(const ValuationReport& v) {
    return JsonObject{{"vor", v.vor},
                      {"vou", v.vou},
                      {"vov", v.vov},
                      {"ttrr", v.ttrr},
                      {"ttvr", v.ttvr},
                      {"kappa", v.kappa},
                      {"ell", v.ell},
                      {"valid_condition", v.valid_condition},
                      {"margin", v.margin},
                      {"f_zeta_ett", v.f_zeta_ett},
                      {"residuals",
                       JsonObject{{"vor", v.vor_residual},
                                  {"vou", v.vou_residual},
                                  {"vov", v.vov_residual}}}};
}

inline std::vector<double> default_sweep_grid() {
    return {0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.99};
}

} // namespace detail

/// Serialize the figure-series behind a routes payload:
/// fig6_decomposition.csv with one row per route, fractions of total cost.
inline std::filesystem::path emit_fig6(const RouteComparison& cmp,
                                       const std::filesystem::path& dir) {
    std::string csv = "route,certainty_pct,reliability_pct,unreliability_pct\n";
    std::vector<const RouteResult*> rows;
    for (const auto& r : cmp.routes)
        if (r.breakdown) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(),
              [](const RouteResult* a, const RouteResult* b) { return a->name < b->name; });
    for (const auto* r : rows) {
        csv += r->name;
        for (double p : r->breakdown->percents) csv += "," + format_number(p);
        csv += "\n";
    }
    const auto path = dir / "fig6_decomposition.csv";
    write_file(path, csv);
    return path;
}

/// fig7_condition.csv: one row per (model, tau) point with a defined
/// (kappa+1)/l ratio, sorted by model name then tau.
inline std::filesystem::path emit_fig7(const std::vector<ConditionSweep>& sweeps,
                                       const std::filesystem::path& dir) {
    std::string csv = "model,tau,ratio\n";
    std::vector<const ConditionSweep*> ordered;
    for (const auto& s : sweeps) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const ConditionSweep* a, const ConditionSweep* b) {
                  return a->model_name < b->model_name;
              });
    for (const auto* s : ordered) {
        for (const auto& row : s->rows) {
            if (!row.in_domain) continue;
            csv += s->model_name + "," + format_number(row.tau) + "," +
                   format_number(row.ratio) + "\n";
        }
    }
    const auto path = dir / "fig7_condition.csv";
    write_file(path, csv);
    return path;
}

/// fig8_tradeoff.csv: tau, excess travel time, variability ratio.
inline std::filesystem::path emit_fig8(const std::vector<TradeoffRow>& rows,
                                       const std::filesystem::path& dir) {
    if (rows.empty()) fail(errc::validation_error, "no trade-off rows to emit");
    std::string csv = "tau,ett,ttvr\n";
    for (const auto& r : rows) {
        csv += format_number(r.tau) + "," + format_number(r.ett) + "," +
               format_number(r.ttvr) + "\n";
    }
    const auto path = dir / "fig8_tradeoff.csv";
    write_file(path, csv);
    return path;
}

/// Runs one CLI command against the configured model sources and writes the
/// JSON report envelope (plus figure CSVs when the format asks for them)
/// into the output directory. Identical inputs, config and seed produce
/// byte-identical files.
inline CommandOutcome run_command(Command cmd, const RunConfig& config,
                                  const std::vector<std::string>& inputs) {
    validate_config(config);
    const std::filesystem::path out_dir(config.output_dir);
    std::filesystem::create_directories(out_dir);

    std::uint64_t digest_chain = fnv1a64(command_name(cmd));
    CommandOutcome outcome;
    JsonObject results;
    std::vector<std::string> warnings;
    const bool want_csv = config.format != ReportFormat::Json;

    switch (cmd) {
        case Command::Fit: {
            auto nm = detail::resolve_single_model(config, inputs, digest_chain);
            warnings = nm.warnings;
            results.emplace_back("model", detail::model_json(nm.model));
            if (nm.fit) {
                JsonObject sel;
                sel.emplace_back("chosen", nm.fit->chosen);
                sel.emplace_back("ks_lognormal", nm.fit->ks_logn ? JsonValue(*nm.fit->ks_logn)
                                                                 : JsonValue(nullptr));
                sel.emplace_back("ks_burr", nm.fit->ks_burr ? JsonValue(*nm.fit->ks_burr)
                                                            : JsonValue(nullptr));
                results.emplace_back("selection", std::move(sel));
            }
            if (!nm.samples.empty()) {
                results.emplace_back("summary",
                                     detail::summary_json(summary_stats(nm.samples)));
            }
            break;
        }
        case Command::Measures: {
            auto nm = detail::resolve_single_model(config, inputs, digest_chain);
            warnings = nm.warnings;
            const auto prefs = preferences_from(config);
            results.emplace_back("model", detail::model_json(nm.model));
            results.emplace_back("prefs", detail::prefs_json(prefs));
            results.emplace_back("risk_measures",
                                 detail::risk_measures_json(compute_risk_measures(nm.model, prefs)));
            JsonObject deps;
            deps.emplace_back("ttb", detail::departure_json(optimal_departure(nm.model, prefs)));
            deps.emplace_back("mett", detail::departure_json(departure_mett(nm.model, prefs)));
            results.emplace_back("departures", std::move(deps));
            break;
        }
        case Command::Value: {
            auto nm = detail::resolve_single_model(config, inputs, digest_chain);
            warnings = nm.warnings;
            const auto prefs = preferences_from(config);
            results.emplace_back("model", detail::model_json(nm.model));
            results.emplace_back("prefs", detail::prefs_json(prefs));
            results.emplace_back("risk_measures",
                                 detail::risk_measures_json(compute_risk_measures(nm.model, prefs)));
            results.emplace_back("valuation",
                                 detail::valuation_json(valuation_report(nm.model, prefs)));
            break;
        }
        case Command::Routes: {
            std::vector<std::pair<std::string, QuantileModel>> named;
            if (config.models.empty() && inputs.size() == 1) {
                // one multi-column CSV, one column per route
                const auto multi = ingest_routes_csv(inputs.front());
                digest_chain = fnv1a64(multi.digest, digest_chain);
                for (const auto& route : multi.routes) {
                    auto fit = fit_model(route.values, config.dist);
                    for (const auto& w : fit.warnings) warnings.push_back(w);
                    named.emplace_back(route.name, fit.model);
                }
            } else {
                auto models = detail::resolve_models(config, inputs, digest_chain);
                for (auto& nm : models) {
                    for (const auto& w : nm.warnings) warnings.push_back(w);
                    named.emplace_back(nm.name, nm.model);
                }
            }
            if (named.size() < 2)
                fail(errc::validation_error, "routes needs at least two models");
            const auto prefs = preferences_from(config);
            const auto cmp = compare_routes(named, prefs);
            results.emplace_back("prefs", detail::prefs_json(prefs));
            JsonArray routes;
            for (const auto& r : cmp.routes) {
                JsonObject o;
                o.emplace_back("name", r.name);
                o.emplace_back("cost_mean",
                               r.cost_mean ? JsonValue(*r.cost_mean) : JsonValue(nullptr));
                o.emplace_back("cost_ttb",
                               r.cost_ttb ? JsonValue(*r.cost_ttb) : JsonValue(nullptr));
                o.emplace_back("cost_mett",
                               r.cost_mett ? JsonValue(*r.cost_mett) : JsonValue(nullptr));
                if (r.breakdown) {
                    JsonArray pct;
                    for (double p : r.breakdown->percents) pct.emplace_back(p);
                    o.emplace_back("percents", std::move(pct));
                } else {
                    o.emplace_back("percents", nullptr);
                }
                o.emplace_back("error", r.error ? JsonValue(*r.error) : JsonValue(nullptr));
                routes.push_back(JsonValue(std::move(o)));
            }
            results.emplace_back("routes", std::move(routes));
            JsonObject mins;
            mins.emplace_back("mean",
                              cmp.argmin_mean ? JsonValue(*cmp.argmin_mean) : JsonValue(nullptr));
            mins.emplace_back("ttb",
                              cmp.argmin_ttb ? JsonValue(*cmp.argmin_ttb) : JsonValue(nullptr));
            mins.emplace_back("mett",
                              cmp.argmin_mett ? JsonValue(*cmp.argmin_mett) : JsonValue(nullptr));
            results.emplace_back("argmin", std::move(mins));
            if (want_csv) outcome.files.push_back(emit_fig6(cmp, out_dir));
            break;
        }
        case Command::Tradeoff: {
            auto nm = detail::resolve_single_model(config, inputs, digest_chain);
            warnings = nm.warnings;
            const auto grid =
                config.tau_grid.value_or(std::vector<double>{0.60, 0.65, 0.70, 0.75, 0.80,
                                                             0.85, 0.90});
            const auto rows = tradeoff_table(nm.model, config.alpha, config.beta, grid);
            results.emplace_back("model", detail::model_json(nm.model));
            results.emplace_back("alpha", config.alpha);
            results.emplace_back("beta", config.beta);
            JsonArray arr;
            for (const auto& r : rows) {
                arr.push_back(JsonValue(JsonObject{{"tau", r.tau},
                                                   {"gamma", r.gamma},
                                                   {"ett", r.ett},
                                                   {"ttvr", r.ttvr},
                                                   {"ett_change_pct", r.ett_change_pct},
                                                   {"ttvr_change_pct", r.ttvr_change_pct}}));
            }
            results.emplace_back("rows", std::move(arr));
            if (want_csv) outcome.files.push_back(emit_fig8(rows, out_dir));
            break;
        }
        case Command::Verify: {
            auto nm = detail::resolve_single_model(config, inputs, digest_chain);
            warnings = nm.warnings;
            const auto prefs = preferences_from(config);
            bool all_pass = true;

            // Finite differences need a differentiable quantile; a step
            // quantile makes the valuations piecewise with jumps at the
            // sample atoms, so these checks are skipped, not failed.
            const bool step_model = nm.model.kind() == Kind::Empirical &&
                                    nm.model.interpolation() == Interpolation::Step;
            if (step_model) {
                results.emplace_back("derivatives", nullptr);
                warnings.push_back(
                    "derivative checks skipped: step quantile is not differentiable");
            } else {
                const auto suite = check_derivative_signs(nm.model, prefs, 1e-4);
                all_pass = all_pass && suite.all_pass;
                JsonArray checks;
                for (const auto& c : suite.checks) {
                    const char* sign = c.expected_sign == ExpectedSign::NonNegative ? ">=0"
                                       : c.expected_sign == ExpectedSign::NonPositive ? "<=0"
                                                                                      : "<0";
                    checks.push_back(
                        JsonValue(JsonObject{{"target", derivative_target_name(c.target)},
                                             {"estimate", c.estimate},
                                             {"expected_sign", sign},
                                             {"step", c.step},
                                             {"applicable", c.applicable},
                                             {"stable", c.stable},
                                             {"pass", c.pass}}));
                }
                JsonObject deriv;
                deriv.emplace_back("checks", std::move(checks));
                deriv.emplace_back("appendix_a",
                                   JsonObject{{"closed_form", suite.appendix_a_closed_form},
                                              {"finite_difference", suite.appendix_a_fd},
                                              {"match", suite.appendix_a_match}});
                results.emplace_back("derivatives", std::move(deriv));
            }

            if (step_model) {
                results.emplace_back("appendix_b", nullptr);
                warnings.push_back("appendix B skipped: step quantile is not differentiable");
            } else {
                const auto rep = appendix_b_condition(nm.model, prefs.tau(), 200);
                std::size_t n_hold = 0;
                JsonArray grid_pts;
                for (std::size_t i = 0; i < rep.grid.size(); ++i) {
                    n_hold += rep.holds[i] ? 1 : 0;
                    grid_pts.push_back(JsonValue(
                        JsonObject{{"p", rep.grid[i]}, {"holds", rep.holds[i]}}));
                }
                results.emplace_back("appendix_b",
                                     JsonObject{{"tau", prefs.tau()},
                                                {"points", rep.grid.size()},
                                                {"points_holding", n_hold},
                                                {"all_hold", rep.all_hold},
                                                {"valid_condition", rep.valid_verdict},
                                                {"implication_ok", rep.implication_ok},
                                                {"grid", std::move(grid_pts)}});
                all_pass = all_pass && rep.implication_ok;
            }

            const auto audit = monte_carlo_audit(nm.model, prefs, 1'000'000, config.seed);
            all_pass = all_pass && audit.pass;
            JsonArray entries;
            for (const auto& e : audit.entries) {
                entries.push_back(JsonValue(JsonObject{{"name", e.name},
                                                       {"estimate", e.estimate},
                                                       {"std_error", e.std_error},
                                                       {"analytic", e.analytic},
                                                       {"pass", e.pass}}));
            }
            results.emplace_back("monte_carlo", JsonObject{{"n", audit.n},
                                                           {"seed", static_cast<std::size_t>(audit.seed)},
                                                           {"entries", std::move(entries)},
                                                           {"pass", audit.pass}});

            auto grid = config.tau_grid.value_or(detail::default_sweep_grid());
            const auto sweeps = condition_sweep({{nm.name, nm.model}}, grid, false);
            JsonArray sweep_rows;
            for (const auto& row : sweeps.front().rows) {
                sweep_rows.push_back(JsonValue(JsonObject{
                    {"tau", row.tau},
                    {"in_domain", row.in_domain},
                    {"ratio", row.in_domain ? JsonValue(row.ratio) : JsonValue(nullptr)},
                    {"holds", row.holds},
                    {"inequality_margin", row.inequality_margin}}));
            }
            const bool sweep_ok = !sweeps.front().error && sweeps.front().all_valid;
            all_pass = all_pass && sweep_ok;
            results.emplace_back(
                "condition_sweep",
                JsonObject{{"model", nm.name},
                           {"rows", std::move(sweep_rows)},
                           {"all_valid", sweeps.front().all_valid},
                           {"error", sweeps.front().error ? JsonValue(*sweeps.front().error)
                                                          : JsonValue(nullptr)}});

            results.emplace_back("pass", all_pass);
            outcome.checks_pass = all_pass;
            if (want_csv) outcome.files.push_back(emit_fig7(sweeps, out_dir));
            break;
        }
    }

    JsonObject envelope;
    envelope.emplace_back("tool_version", kToolVersion);
    envelope.emplace_back("command", command_name(cmd));
    envelope.emplace_back("config", detail::config_json(config));
    envelope.emplace_back("inputs_digest", digest_hex(digest_chain));
    envelope.emplace_back("results", std::move(results));
    JsonArray warn;
    for (const auto& w : warnings) warn.emplace_back(w);
    envelope.emplace_back("warnings", std::move(warn));

    outcome.report_json = JsonValue(std::move(envelope)).dump();
    const auto report_path =
        out_dir / (std::string(command_name(cmd)) + "_report.json");
    write_file(report_path, outcome.report_json);
    outcome.files.insert(outcome.files.begin(), report_path);
    return outcome;
}

} // namespace ttv

#endif // TTV_REPORT_HPP
