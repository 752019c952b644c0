#pragma once

// Command-line front end. `run` is testable in-process: it takes the
// arguments after the program name and writes to the given streams.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "bayescreen/service.hpp"

namespace bayescreen::cli {

using service::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Fixed-point with `precision` decimals; never prints "-0.0000".
inline std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::fabs(v) < 0.5 * std::pow(10.0, -precision)) v = 0.0;
    return fmt::format("{:.{}f}", v, precision);
}

inline std::string format_scalar(const json& v, int precision) {
    if (v.is_number_float()) return format_number(v.get<double>(), precision);
    if (v.is_number()) return v.dump();
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "null";
    return v.dump();
}

inline bool is_scalar(const json& v) { return !v.is_array() && !v.is_object(); }

/// Flattens a result payload into "path: value" lines.
inline void render_text(std::ostream& out, const json& v, const std::string& path, int precision) {
    if (v.is_object()) {
        for (const auto& [key, child] : v.items()) {
            render_text(out, child, path.empty() ? key : path + "." + key, precision);
        }
        return;
    }
    if (v.is_array()) {
        const bool scalars = std::all_of(v.begin(), v.end(), [](const json& e) { return is_scalar(e); });
        if (scalars && v.size() <= 8) {
            out << path << ":";
            for (const auto& e : v) out << ' ' << format_scalar(e, precision);
            out << '\n';
        } else if (scalars) {
            out << path << ": [" << v.size() << " values]\n";
        } else if (std::all_of(v.begin(), v.end(), [](const json& e) {
                       return e.is_array() && std::all_of(e.begin(), e.end(), is_scalar);
                   })) {
            out << path << ":\n";
            for (const auto& row : v) {
                out << ' ';
                for (const auto& e : row) out << ' ' << format_scalar(e, precision);
                out << '\n';
            }
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) {
                render_text(out, v[i], path + "[" + std::to_string(i) + "]", precision);
            }
        }
        return;
    }
    out << path << ": " << format_scalar(v, precision) << '\n';
}

/// Fixed-width rendering of the two reference tables.
inline void render_tables(std::ostream& out, const json& result, int p) {
    bool first = true;
    if (result.contains("kappa_table")) {
        out << fmt::format("# kappa table: pretest needed for a posttest of 1.0 or 0.5 (slope {})\n",
                           format_number(result["constant"]["slope"].get<double>(), p));
        out << fmt::format("{:>6}  {:>10}  {:>15}  {:>15}\n", "kappa", "delta", "pretest_for_1.0",
                           "pretest_for_0.5");
        for (const auto& row : result["kappa_table"]) {
            out << fmt::format("{:>6}  {:>10}  {:>15}  {:>15}\n",
                               format_number(row["kappa"].get<double>(), 0),
                               format_number(row["delta"].get<double>(), p),
                               format_number(row["pretest_for_1.0"].get<double>(), p),
                               format_number(row["pretest_for_0.5"].get<double>(), p));
        }
        first = false;
    }
    if (result.contains("pretest_table")) {
        if (!first) out << '\n';
        out << fmt::format("# pretest table: mean and range by product of finding ratios (divisor {})\n",
                           format_number(result["constant"]["display_divisor"].get<double>(), p));
        out << fmt::format("{:>13}  {:>10}  {:>10}  {:>10}\n", "kappa_product", "mean", "min", "max");
        for (const auto& row : result["pretest_table"]) {
            out << fmt::format("{:>13}  {:>10}  {:>10}  {:>10}\n",
                               format_number(row["kappa_product"].get<double>(), 0),
                               format_number(row["mean"].get<double>(), p),
                               format_number(row["min"].get<double>(), p),
                               format_number(row["max"].get<double>(), p));
        }
    }
}

namespace detail {

// What a subcommand needs after parsing: the command name, the JSON inputs
// built from the flags that were given, and any CSV export it supports.
struct Invocation {
    std::string command;
    json inputs = json::object();
    std::map<std::string, std::string> flag_of_field;
    bool csv_supported = false;
};

class Builder {
public:
    Builder(CLI::App& app, Invocation& inv) : app_(app), inv_(inv) {}

    void probability(const std::string& flag, const std::string& field, const std::string& help,
                     bool required = false) {
        auto* opt = app_.add_option_function<double>(
            "--" + flag, [inv = &inv_, field](double v) { inv->inputs[field] = v; }, help);
        opt->check(CLI::Range(0.0, 1.0));
        if (required) opt->required();
        inv_.flag_of_field[field] = "--" + flag;
    }

    void number(const std::string& flag, const std::string& field, const std::string& help,
                bool required = false) {
        auto* opt = app_.add_option_function<double>(
            "--" + flag, [inv = &inv_, field](double v) { inv->inputs[field] = v; }, help);
        if (required) opt->required();
        inv_.flag_of_field[field] = "--" + flag;
    }

    void count(const std::string& flag, const std::string& field, const std::string& help,
               bool required = false) {
        auto* opt = app_.add_option_function<std::uint64_t>(
            "--" + flag, [inv = &inv_, field](std::uint64_t v) { inv->inputs[field] = v; }, help);
        opt->check(CLI::NonNegativeNumber);
        if (required) opt->required();
        inv_.flag_of_field[field] = "--" + flag;
    }

    void text(const std::string& flag, const std::string& field, const std::string& help,
              std::vector<std::string> choices) {
        auto* opt = app_.add_option_function<std::string>(
            "--" + flag, [inv = &inv_, field](const std::string& v) { inv->inputs[field] = v; }, help);
        opt->check(CLI::IsMember(std::move(choices)));
        inv_.flag_of_field[field] = "--" + flag;
    }

    void test(bool required = true) {
        probability("sens", "sens", "sensitivity a in [0, 1]", required);
        probability("spec", "spec", "specificity b in [0, 1]", required);
    }

    void cohort() {
        count("t", "t", "number of positive results", true);
        count("n", "n", "number of subjects tested", true);
    }

    void constant() {
        app_.add_option_function<std::string>(
                "--constant", [inv = &inv_](const std::string& v) { inv->inputs["constant"] = v; },
                "heuristic constant: 4.54 (slope 0.22) or 5")
            ->check(CLI::IsMember({"4.54", "5"}));
        inv_.flag_of_field["constant"] = "--constant";
    }

private:
    CLI::App& app_;
    Invocation& inv_;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Diagnostic screening probability engine", "bayescreen"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(service::kEngineVersion));

    bool as_json = false;
    int precision = 4;
    std::string csv_path;

    detail::Invocation inv;
    std::vector<CLI::App*> leaves;

    auto leaf = [&](CLI::App& parent, const std::string& name, const std::string& command,
                    const std::string& description, bool csv) {
        CLI::App* sub = parent.add_subcommand(name, description);
        sub->add_flag("--json", as_json, "emit a JSON envelope");
        sub->add_option("--precision", precision, "decimal places for text output")
            ->envname("BAYESCREEN_PRECISION")
            ->check(CLI::Range(0, 17));
        if (csv) sub->add_option("--csv", csv_path, "write the full series to a CSV file");
        sub->callback([&inv, command, csv] {
            inv.command = command;
            inv.csv_supported = csv;
        });
        leaves.push_back(sub);
        return sub;
    };

    // Every subcommand owns its own flag bindings; only the chosen one fires.
    std::map<std::string, detail::Invocation> per_command;
    auto bind = [&](CLI::App* sub, const std::string& command) {
        return detail::Builder(*sub, per_command[command]);
    };

    {
        auto b = bind(leaf(app, "ppv", "ppv", "positive and negative predictive value", false), "ppv");
        b.test();
        b.probability("pretest", "pretest", "pretest probability", true);
    }
    {
        auto b = bind(leaf(app, "threshold", "threshold", "prevalence threshold", false), "threshold");
        b.test();
        b.probability("pretest", "pretest", "compare this pretest probability with the threshold");
    }
    {
        auto b = bind(leaf(app, "lr", "lr", "positive likelihood ratio", false), "lr");
        b.test();
    }
    {
        auto b = bind(leaf(app, "posttest", "posttest", "exact and heuristic posttest probability", false),
                      "posttest");
        b.probability("pretest", "pretest", "pretest probability", true);
        b.number("lr", "kappa", "positive likelihood ratio", true);
        b.constant();
    }
    {
        auto b = bind(leaf(app, "mcgee", "mcgee", "linear log-odds heuristic", false), "mcgee");
        b.probability("pretest", "pretest", "pretest probability", true);
        b.number("lr", "kappa", "positive likelihood ratio", true);
        b.probability("target", "target", "report the likelihood ratio needed to reach this posttest");
        b.constant();
    }
    {
        auto b = bind(leaf(app, "curve", "curve", "PPV or tipping-point curve", true), "curve");
        b.text("kind", "kind", "ppv or tipping", {"ppv", "tipping"});
        b.test(false);
        b.count("grid", "grid", "number of grid points");
        b.number("kappa-min", "kappa_min", "smallest likelihood ratio (tipping curve)");
        b.number("kappa-max", "kappa_max", "largest likelihood ratio (tipping curve)");
        b.constant();
    }
    {
        auto b = bind(leaf(app, "nomogram", "nomogram", "Fagan nomogram coordinates", false), "nomogram");
        b.probability("pretest", "pretest", "pretest probability", true);
        b.number("lr", "kappa", "positive likelihood ratio", true);
    }

    CLI::App* estimate = app.add_subcommand("estimate", "prevalence estimators");
    estimate->require_subcommand(1);
    {
        auto b = bind(leaf(*estimate, "rogan-gladen", "estimate rogan-gladen",
                           "Rogan-Gladen estimate with Wald interval", false),
                      "estimate rogan-gladen");
        b.cohort();
        b.test();
        b.number("level", "level", "interval level (default uses z = 1.96)");
    }
    {
        auto b = bind(leaf(*estimate, "beta", "estimate beta", "conjugate beta posterior", true),
                      "estimate beta");
        b.cohort();
        b.number("alpha", "alpha", "prior alpha (default 1)");
        b.number("beta", "beta", "prior beta (default 1)");
        b.number("level", "level", "credible level (default 0.95)");
        b.count("grid", "grid", "density grid points (default 2048)");
    }
    {
        auto b = bind(leaf(*estimate, "baxter", "estimate baxter",
                           "prevalence posterior with known sensitivity and specificity", true),
                      "estimate baxter");
        b.cohort();
        b.test();
        b.number("level", "level", "credible level (default 0.95)");
        b.count("grid", "grid", "density grid points (default 2048)");
    }
    CLI::App* unknown = nullptr;
    {
        unknown = leaf(*estimate, "baxter-unknown", "estimate baxter-unknown",
                       "prevalence posterior with uncertain sensitivity and specificity", true);
        auto b = bind(unknown, "estimate baxter-unknown");
        b.cohort();
        b.count("n-a", "n_a", "known positives in validation", true);
        b.count("t-a", "t_a", "true positives among them", true);
        b.count("n-b", "n_b", "known negatives in validation", true);
        b.count("t-b", "t_b", "false positives among them", true);
        b.number("level", "level", "credible level (default 0.95)");
        b.count("grid", "grid", "prevalence grid points (default 2048)");
        b.count("grid-a", "grid_a", "sensitivity grid points (default 128)");
        b.count("grid-b", "grid_b", "specificity grid points (default 128)");
    }
    json prior_a = json::object();
    json prior_b = json::object();
    unknown->add_option_function<double>("--prior-a-alpha", [&](double v) { prior_a["alpha"] = v; },
                                         "sensitivity prior alpha");
    unknown->add_option_function<double>("--prior-a-beta", [&](double v) { prior_a["beta"] = v; },
                                         "sensitivity prior beta");
    unknown->add_option_function<double>("--prior-b-alpha", [&](double v) { prior_b["alpha"] = v; },
                                         "specificity prior alpha");
    unknown->add_option_function<double>("--prior-b-beta", [&](double v) { prior_b["beta"] = v; },
                                         "specificity prior beta");

    std::vector<double> lr_values;
    std::vector<std::string> finding_specs;
    {
        CLI::App* sub = leaf(app, "pretest", "pretest", "a-priori pretest bounds from findings", false);
        sub->add_option("--lr", lr_values, "likelihood ratio of a finding (repeatable)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--finding", finding_specs, "labelled finding as label=kappa (repeatable)");
        auto b = bind(sub, "pretest");
        b.probability("baseline", "baseline", "baseline prevalence added to the minimal bound");
        b.constant();
        b.test(false);
    }
    {
        auto b = bind(leaf(app, "category", "category", "qualitative risk category", false), "category");
        b.probability("probability", "probability", "probability to classify", true);
        b.text("result", "result", "shift by a positive or negative test", {"positive", "negative", "none"});
    }
    {
        auto b = bind(leaf(app, "power-class", "power-class", "clinical power class", false), "power-class");
        b.number("lr", "kappa", "likelihood ratio", true);
    }
    {
        auto b = bind(leaf(app, "audit", "audit", "heuristic-versus-exact error audit", false), "audit");
        b.number("pretest-min", "pretest_min", "smallest pretest (default 0.1)");
        b.number("pretest-max", "pretest_max", "largest pretest (default 0.9)");
        b.number("kappa-min", "kappa_min", "smallest likelihood ratio (default 1)");
        b.number("kappa-max", "kappa_max", "largest likelihood ratio (default 10)");
        b.number("step", "step", "grid step for both axes (default 0.001)");
        b.constant();
    }
    {
        auto b = bind(leaf(app, "simulate", "simulate", "seeded cohort simulation", true), "simulate");
        b.count("n", "n", "subjects per cohort", true);
        b.probability("prevalence", "prevalence", "true prevalence", true);
        b.test();
        b.count("seed", "seed", "random seed (default 0)");
        b.count("replicates", "replicates", "number of cohorts (default 1)");
        b.number("level", "level", "interval level for the coverage report");
    }
    {
        auto b = bind(leaf(app, "tables", "tables", "regenerate the kappa and pretest tables", false), "tables");
        b.text("table", "table", "3, 4 or all", {"3", "4", "all"});
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << service::kEngineVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    for (CLI::App* sub : leaves) {
        if (sub->parsed() && sub->count("--help") > 0) return kExitOk;
    }
    if (inv.command.empty()) {
        err << "usage error: a subcommand is required\n";
        return kExitUsage;
    }

    detail::Invocation& chosen = per_command[inv.command];
    json inputs = chosen.inputs;
    if (inv.command == "estimate baxter-unknown") {
        if (!prior_a.empty()) inputs["prior_a"] = prior_a;
        if (!prior_b.empty()) inputs["prior_b"] = prior_b;
    }
    if (inv.command == "pretest") {
        json findings = json::array();
        for (std::size_t i = 0; i < lr_values.size(); ++i) {
            findings.push_back({{"label", "lr" + std::to_string(i + 1)}, {"kappa", lr_values[i]}});
        }
        for (const auto& spec : finding_specs) {
            const auto eq = spec.rfind('=');
            double kappa = 0.0;
            try {
                if (eq == std::string::npos) throw std::invalid_argument(spec);
                std::size_t used = 0;
                kappa = std::stod(spec.substr(eq + 1), &used);
                if (used != spec.size() - eq - 1) throw std::invalid_argument(spec);
            } catch (const std::exception&) {
                err << "usage error: --finding: expected label=kappa, got '" << spec << "'\n";
                return kExitUsage;
            }
            findings.push_back({{"label", spec.substr(0, eq)}, {"kappa", kappa}});
        }
        inputs["findings"] = findings;
    }

    service::Outcome outcome;
    DensityGrid density;
    SimResult sim;
    try {
        if (inv.command == "estimate beta") {
            outcome = service::cmd_beta(inputs, &density);
        } else if (inv.command == "estimate baxter") {
            outcome = service::cmd_baxter(inputs, &density);
        } else if (inv.command == "estimate baxter-unknown") {
            outcome = service::cmd_baxter_unknown(inputs, &density);
        } else if (inv.command == "simulate") {
            outcome = service::cmd_simulate(inputs, &sim);
        } else {
            outcome = service::commands().at(inv.command)(inputs);
        }
    } catch (const InvalidArgument& e) {
        const auto it = chosen.flag_of_field.find(e.field());
        const std::string flag = it != chosen.flag_of_field.end() ? it->second : e.field();
        err << "usage error: " << flag << ": " << e.detail() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) {
            err << "error: cannot open " << csv_path << " for writing\n";
            return kExitDomain;
        }
        if (inv.command == "curve") {
            const json& r = outcome.result;
            csv << r["x_label"].get<std::string>() << ',' << r["y_label"].get<std::string>() << '\n';
            for (const auto& p : r["points"]) {
                csv << fmt::format("{},{}\n", p[0].get<double>(), p[1].get<double>());
            }
        } else if (inv.command == "simulate") {
            write_replicate_table(csv, sim);
        } else {
            csv << "phi,density\n";
            for (std::size_t i = 0; i < density.size(); ++i) {
                csv << fmt::format("{},{}\n", density.support[i], density.values[i]);
            }
        }
    }

    if (as_json) {
        out << service::envelope(inv.command, outcome).dump(2) << '\n';
    } else if (inv.command == "tables") {
        render_tables(out, outcome.result, precision);
    } else {
        render_text(out, outcome.result, "", precision);
    }
    for (const auto& w : outcome.warnings) err << "warning: " << w << '\n';
    return kExitOk;
}

}  // namespace bayescreen::cli
