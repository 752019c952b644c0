#pragma once

// Command layer shared by the CLI and the HTTP service. Each command takes a
// JSON object of inputs and produces the inputs echo (with defaults filled
// in), a result payload and a list of warnings. Both front ends call these
// functions, so their numbers agree by construction.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bayescreen/density.hpp"
#include "bayescreen/estimators.hpp"
#include "bayescreen/heuristics.hpp"
#include "bayescreen/screening.hpp"
#include "bayescreen/simulator.hpp"
#include "bayescreen/tables.hpp"

namespace bayescreen::service {

using json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr std::string_view kEngineVersion = "1.0.0";
inline constexpr std::size_t kMaxTransportPoints = 512;
inline constexpr std::size_t kMaxAuditNodes = 20'000'000;

struct Outcome {
    json inputs = json::object();
    json result = json::object();
    std::vector<std::string> warnings;
};

/// Typed access to a JSON input object. Every value read (or defaulted) is
/// recorded for the inputs echo.
class Fields {
public:
    explicit Fields(const json& in) : in_(in) {
        if (!in_.is_object()) throw InvalidArgument("body", "must be a JSON object");
    }

    bool has(const std::string& key) const { return in_.contains(key) && !in_.at(key).is_null(); }

    double number(const std::string& key) const {
        if (!has(key)) throw InvalidArgument(key, "is required");
        return number_at(key);
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number_at(key) : record(key, fallback);
    }

    std::optional<double> optional_number(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return number_at(key);
    }

    Probability probability(const std::string& key) const { return Probability(number(key), key); }

    Probability probability_or(const std::string& key, double fallback) const {
        return Probability(number_or(key, fallback), key);
    }

    std::uint64_t count(const std::string& key) const {
        if (!has(key)) throw InvalidArgument(key, "is required");
        return count_at(key);
    }

    std::uint64_t count_or(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) {
            echo_[key] = fallback;
            return fallback;
        }
        return count_at(key);
    }

    std::string string_or(const std::string& key, const std::string& fallback) const {
        if (!has(key)) {
            echo_[key] = fallback;
            return fallback;
        }
        const json& v = in_.at(key);
        if (!v.is_string()) throw InvalidArgument(key, "must be a string");
        echo_[key] = v;
        return v.get<std::string>();
    }

    const json& raw(const std::string& key) const {
        if (!has(key)) throw InvalidArgument(key, "is required");
        echo_[key] = in_.at(key);
        return in_.at(key);
    }

    json echo() const { return echo_; }

private:
    double number_at(const std::string& key) const {
        const json& v = in_.at(key);
        if (!v.is_number()) throw InvalidArgument(key, "must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw InvalidArgument(key, "must be finite");
        return record(key, d);
    }

    std::uint64_t count_at(const std::string& key) const {
        const json& v = in_.at(key);
        if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            const auto c = v.get<std::uint64_t>();
            echo_[key] = c;
            return c;
        }
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 9.007199254740992e15) {
                const auto c = static_cast<std::uint64_t>(d);
                echo_[key] = c;
                return c;
            }
        }
        throw InvalidArgument(key, "must be a non-negative integer");
    }

    double record(const std::string& key, double value) const {
        echo_[key] = value;
        return value;
    }

    const json& in_;
    mutable json echo_ = json::object();
};

// --- conversions -------------------------------------------------------------

inline json lr_to_json(LikelihoodRatio k) {
    if (k.is_infinite()) return "infinite";
    return k.value();
}

inline json constant_to_json(const HeuristicConstant& c) {
    return {{"slope", c.slope}, {"divisor", c.divisor()}, {"display_divisor", c.display_divisor}};
}

inline json summary_to_json(const PosteriorSummary& s) {
    return {{"mean", s.mean},   {"mode", s.mode},   {"variance", s.variance}, {"sd", s.sd},
            {"lower", s.lower}, {"upper", s.upper}, {"level", s.level}};
}

/// Downsampled for transport; the mode node is always retained.
inline json density_to_json(const DensityGrid& d) {
    const DensityGrid small = decimate_max(d, kMaxTransportPoints);
    return {{"phi", small.support}, {"density", small.values}, {"grid_size", d.size()}};
}

inline json curve_to_json(const CurveSeries& c) {
    json points = json::array();
    for (const auto& p : c.points) points.push_back({p.x, p.y});
    return {{"x_label", c.x_label}, {"y_label", c.y_label}, {"points", points}};
}

inline json confusion_to_json(const Confusion& c) {
    return {{"t", c.positives()}, {"TP", c.tp}, {"FP", c.fp}, {"TN", c.tn}, {"FN", c.fn}};
}

inline TestCharacteristics read_test(const Fields& f) {
    return TestCharacteristics(f.probability("sens"), f.probability("spec"));
}

inline CohortObservation read_cohort(const Fields& f) {
    return CohortObservation(f.count("n"), f.count("t"));
}

inline HeuristicConstant read_constant(const Fields& f) {
    if (!f.has("constant")) return HeuristicConstant::standard();
    const json& v = f.raw("constant");
    if (v.is_string()) return HeuristicConstant::parse(v.get<std::string>());
    if (v.is_number()) {
        const double d = v.get<double>();
        if (d == 5.0) return HeuristicConstant::rounded();
        if (d == 4.54) return HeuristicConstant::precise();
    }
    throw InvalidArgument("constant", "must be 4.54 or 5");
}

inline std::size_t read_grid(const Fields& f, const std::string& key, std::size_t fallback) {
    const std::uint64_t g = f.count_or(key, fallback);
    if (g > 1'000'000) throw InvalidArgument(key, "must not exceed 1000000");
    return static_cast<std::size_t>(g);
}

inline double read_z(const Fields& f) {
    if (f.has("level")) return z_for_level(f.number("level"));
    return kDefaultZ;
}

inline double read_level(const Fields& f) {
    const double level = f.number_or("level", 0.95);
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level", "must lie in (0, 1)");
    return level;
}

// --- commands ----------------------------------------------------------------

inline Outcome cmd_ppv(const json& in) {
    Fields f(in);
    const TestCharacteristics test = read_test(f);
    const Probability pretest = f.probability("pretest");
    Outcome o;
    o.result["ppv"] = ppv(test, pretest).value();
    o.result["npv"] = npv(test, pretest).value();
    o.result["youden"] = test.youden();
    if (!test.degenerate()) o.result["positive_lr"] = lr_to_json(positive_lr(test));
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_threshold(const json& in) {
    Fields f(in);
    const TestCharacteristics test = read_test(f);
    Outcome o;
    o.result["prevalence_threshold"] = prevalence_threshold(test).value();
    o.result["positive_lr"] = lr_to_json(positive_lr(test));
    if (test.specificity.value() < 1.0) {
        o.result["ppv_at_threshold"] = ppv_at_threshold(test).value();
    } else {
        o.warnings.push_back("specificity 1: PPV at the threshold is undefined");
    }
    if (f.has("pretest")) {
        const Probability pretest = f.probability("pretest");
        o.result["pretest_above_threshold"] =
            pretest.value() >= prevalence_threshold(test).value();
    }
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_lr(const json& in) {
    Fields f(in);
    const TestCharacteristics test = read_test(f);
    const LikelihoodRatio kappa = positive_lr(test);
    Outcome o;
    o.result["positive_lr"] = lr_to_json(kappa);
    o.result["youden"] = test.youden();
    if (kappa.is_positive_finite()) {
        o.result["power_class"] = std::string(clinical_power_class(kappa).name);
        o.result["threshold_from_lr"] = threshold_from_lr(kappa).value();
    }
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_posttest(const json& in) {
    Fields f(in);
    const Probability pretest = f.probability("pretest");
    const LikelihoodRatio kappa(f.number("kappa"), "kappa");
    const HeuristicConstant c = read_constant(f);
    Outcome o;
    const Probability exact = posttest_exact(pretest, kappa);
    o.result["exact"] = exact.value();
    if (kappa.is_positive_finite()) {
        const HeuristicValue h = mcgee_posttest(pretest, kappa, c);
        o.result["mcgee"] = h.value.value();
        o.result["gap"] = std::fabs(h.value.value() - exact.value());
        if (h.clamped) o.warnings.push_back("heuristic posttest clamped to [0, 1]");
        if (h.out_of_domain) o.warnings.push_back("pretest outside [0.1, 0.9]: heuristic is unreliable");
    }
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_mcgee(const json& in) {
    Fields f(in);
    const Probability pretest = f.probability("pretest");
    const LikelihoodRatio kappa(f.number("kappa"), "kappa");
    const HeuristicConstant c = read_constant(f);
    Outcome o;
    const HeuristicValue h = mcgee_posttest(pretest, kappa, c);
    o.result["delta"] = mcgee_delta(kappa, c);
    o.result["posttest"] = h.value.value();
    o.result["raw_posttest"] = h.raw;
    o.result["clamped"] = h.clamped;
    o.result["out_of_domain"] = h.out_of_domain;
    o.result["exact"] = posttest_exact(pretest, kappa).value();
    o.result["constant"] = constant_to_json(c);
    if (f.has("target")) {
        o.result["required_lr"] = required_lr(pretest, f.probability("target"), c).value();
    }
    if (h.clamped) o.warnings.push_back("heuristic posttest clamped to [0, 1]");
    if (h.out_of_domain) o.warnings.push_back("pretest outside [0.1, 0.9]: heuristic is unreliable");
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_curve(const json& in) {
    Fields f(in);
    const std::string kind = f.string_or("kind", "ppv");
    const std::size_t grid = read_grid(f, "grid", 101);
    Outcome o;
    if (kind == "ppv") {
        o.result = curve_to_json(ppv_curve(read_test(f), grid));
    } else if (kind == "tipping") {
        const HeuristicConstant c = read_constant(f);
        const double lo = f.number_or("kappa_min", 0.01);
        const double hi = f.number_or("kappa_max", 11.0);
        if (!(lo > 0.0)) throw InvalidArgument("kappa_min", "must be positive");
        if (!(hi > lo)) throw InvalidArgument("kappa_max", "must exceed kappa_min");
        const auto kappas = uniform_grid(lo, hi, grid);
        o.result = curve_to_json(tipping_curve(c, kappas));
    } else {
        throw InvalidArgument("kind", "must be ppv or tipping");
    }
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_nomogram(const json& in) {
    Fields f(in);
    const Probability pretest = f.probability("pretest");
    const LikelihoodRatio kappa(f.number("kappa"), "kappa");
    const FaganLine line = fagan_coordinates(pretest, kappa);
    Outcome o;
    o.result["left"] = line.left;
    o.result["mid"] = line.mid;
    o.result["right"] = line.right;
    o.result["posttest"] = line.posttest.value();
    o.result["axis_limit"] = 5.0;

    static constexpr double kProbTicks[] = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1,
                                            0.2,   0.3,   0.4,   0.5,  0.6,  0.7,  0.8,
                                            0.9,   0.95,  0.98,  0.99, 0.995, 0.999};
    static constexpr double kLrTicks[] = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1,
                                          2,     5,     10,    20,   50,   100,  200, 500, 1000};
    json pretest_ticks = json::array();
    json posttest_ticks = json::array();
    for (double p : kProbTicks) {
        const double l = logit(Probability(p));
        pretest_ticks.push_back({{"value", p}, {"position", -l}});
        posttest_ticks.push_back({{"value", p}, {"position", l}});
    }
    json lr_ticks = json::array();
    for (double k : kLrTicks) lr_ticks.push_back({{"value", k}, {"position", std::log(k)}});
    o.result["ticks"] = {{"pretest", pretest_ticks}, {"kappa", lr_ticks}, {"posttest", posttest_ticks}};
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_rogan_gladen(const json& in) {
    Fields f(in);
    const CohortObservation obs = read_cohort(f);
    const TestCharacteristics test = read_test(f);
    const IntervalEstimate est = rogan_gladen(obs, test, read_z(f));
    Outcome o;
    o.result["apparent_prevalence"] = apparent_prevalence(obs).value();
    o.result["point"] = est.point.value();
    o.result["lower"] = est.lower.value();
    o.result["upper"] = est.upper.value();
    o.result["raw_point"] = est.raw_point;
    o.result["clamped"] = est.clamped;
    o.result["z"] = est.z;
    if (est.raw_point < 0.0) {
        o.warnings.push_back("clamped: apparent prevalence is below the false-positive rate");
    } else if (est.raw_point > 1.0) {
        o.warnings.push_back("clamped: raw estimate exceeds 1");
    } else if (est.clamped) {
        o.warnings.push_back("clamped: Wald interval truncated to [0, 1]");
    }
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_beta(const json& in, DensityGrid* full = nullptr) {
    Fields f(in);
    const CohortObservation obs = read_cohort(f);
    const BetaParams prior(f.number_or("alpha", 1.0), f.number_or("beta", 1.0));
    const double level = read_level(f);
    const std::size_t grid = read_grid(f, "grid", kDefaultPrevalenceGrid);
    const BetaParams post = beta_update(prior, obs);
    const BetaMoments m = beta_moments(post);
    const DensityGrid density = beta_pdf(post, grid);
    Outcome o;
    o.result["posterior"] = {{"alpha", post.alpha}, {"beta", post.beta}};
    o.result["moments"] = {{"mean", m.mean},
                           {"second_moment", m.second_moment},
                           {"variance", m.variance},
                           {"sd", m.sd}};
    o.result["summary"] = summary_to_json(posterior_summary(density, level));
    o.result["density"] = density_to_json(density);
    if (full) *full = density;
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_baxter(const json& in, DensityGrid* full = nullptr) {
    Fields f(in);
    const CohortObservation obs = read_cohort(f);
    const TestCharacteristics test = read_test(f);
    const double level = read_level(f);
    const std::size_t grid = read_grid(f, "grid", kDefaultPrevalenceGrid);
    const DensityGrid density = baxter_posterior_known(obs, test, grid);
    Outcome o;
    o.result["summary"] = summary_to_json(posterior_summary(density, level));
    o.result["rogan_gladen_raw_point"] = rogan_gladen(obs, test).raw_point;
    o.result["analytic_mass"] = density.analytic_mass;
    o.result["density"] = density_to_json(density);
    if (std::fabs(density.analytic_mass - 1.0) > 1e-3) {
        o.warnings.push_back("analytic normalisation differs from quadrature by more than 1e-3; "
                             "increase the grid");
    }
    if (full) *full = density;
    o.inputs = f.echo();
    return o;
}

inline BetaParams read_prior(const Fields& f, const std::string& key) {
    if (!f.has(key)) return BetaParams::uniform();
    const json& v = f.raw(key);
    if (!v.is_object()) throw InvalidArgument(key, "must be an object with alpha and beta");
    Fields inner(v);
    try {
        return BetaParams(inner.number_or("alpha", 1.0), inner.number_or("beta", 1.0));
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(key + "." + e.field(), e.detail());
    }
}

inline Outcome cmd_baxter_unknown(const json& in, DensityGrid* full = nullptr) {
    Fields f(in);
    const CohortObservation obs = read_cohort(f);
    const ValidationData val(f.count("n_a"), f.count("t_a"), f.count("n_b"), f.count("t_b"));
    const BetaParams prior_a = read_prior(f, "prior_a");
    const BetaParams prior_b = read_prior(f, "prior_b");
    const double level = read_level(f);
    ParameterGridSizes sizes;
    sizes.prevalence = read_grid(f, "grid", kDefaultPrevalenceGrid);
    sizes.sensitivity = read_grid(f, "grid_a", kDefaultParameterGrid);
    sizes.specificity = read_grid(f, "grid_b", kDefaultParameterGrid);
    if (static_cast<double>(sizes.prevalence) * static_cast<double>(sizes.sensitivity) *
            static_cast<double>(sizes.specificity) > 2e9) {
        throw InvalidArgument("grid", "grid product too large");
    }
    const DensityGrid density = baxter_posterior_unknown(obs, val, prior_a, prior_b, sizes);
    const BetaParams post_a = sensitivity_posterior(val, prior_a);
    const BetaParams post_b = specificity_posterior(val, prior_b);
    Outcome o;
    o.result["summary"] = summary_to_json(posterior_summary(density, level));
    o.result["sensitivity_posterior"] = {{"alpha", post_a.alpha}, {"beta", post_a.beta}};
    o.result["specificity_posterior"] = {{"alpha", post_b.alpha}, {"beta", post_b.beta}};
    o.result["analytic_mass"] = density.analytic_mass;
    o.result["density"] = density_to_json(density);
    if (full) *full = density;
    o.inputs = f.echo();
    return o;
}

inline FindingSet read_findings(const Fields& f) {
    FindingSet fs;
    const json& list = f.raw("findings");
    if (!list.is_array()) throw InvalidArgument("findings", "must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "findings[" + std::to_string(i) + "]";
        const json& item = list[i];
        if (!item.is_object()) throw InvalidArgument(where, "must be an object");
        if (!item.contains("kappa") || !item["kappa"].is_number()) {
            throw InvalidArgument(where + ".kappa", "is required and must be a number");
        }
        const double k = item["kappa"].get<double>();
        if (!(k > 0.0) || !std::isfinite(k)) {
            throw InvalidArgument(where + ".kappa", "must be positive and finite");
        }
        std::string label = "finding" + std::to_string(i + 1);
        if (item.contains("label")) {
            if (!item["label"].is_string()) throw InvalidArgument(where + ".label", "must be a string");
            label = item["label"].get<std::string>();
        }
        fs.findings.emplace_back(std::move(label), k);
    }
    if (f.has("baseline")) fs.baseline_prevalence = f.probability("baseline");
    return fs;
}

inline Outcome cmd_pretest(const json& in) {
    Fields f(in);
    const FindingSet fs = read_findings(f);
    const HeuristicConstant c = read_constant(f);
    const PretestEstimate est = pretest_estimate(fs, c);
    Outcome o;
    o.result["min"] = est.min_bound.value();
    o.result["max"] = est.max_bound.value();
    o.result["mean"] = est.mean.value();
    o.result["raw_min"] = est.raw_min;
    o.result["clamped"] = est.clamped;
    o.result["kappa_product"] = fs.product();
    o.result["constant"] = constant_to_json(c);
    o.result["category"] = std::string(risk_band(medow_lucey_category(est.mean)).name);

    json comparison;
    const double product = fs.product();
    comparison["crossing_kappa"] = threshold_crossing_kappa(c);
    if (product > 0.0 && std::isfinite(product)) {
        const double own = threshold_from_lr(LikelihoodRatio(product)).value();
        comparison["product_threshold"] = own;
        comparison["min_above_product_threshold"] = est.min_bound.value() >= own;
    }
    if (f.has("sens") || f.has("spec")) {
        const double phi_e = prevalence_threshold(read_test(f)).value();
        comparison["test_threshold"] = phi_e;
        comparison["min_above_test_threshold"] = est.min_bound.value() >= phi_e;
        comparison["mean_above_test_threshold"] = est.mean.value() >= phi_e;
    }
    o.result["threshold_comparison"] = comparison;
    if (fs.findings.empty()) o.warnings.push_back("no findings: the estimate is uninformative");
    if (est.clamped) o.warnings.push_back("minimal bound clamped to [0, 1]");
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_category(const json& in) {
    Fields f(in);
    const Probability p = f.probability("probability");
    const RiskCategory cat = medow_lucey_category(p);
    const RiskBand& band = risk_band(cat);
    Outcome o;
    o.result["category"] = std::string(band.name);
    o.result["lower"] = band.lower;
    o.result["upper"] = band.upper;
    const std::string result = f.string_or("result", "none");
    if (result == "positive" || result == "negative") {
        o.result["updated"] = std::string(risk_band(medow_lucey_update(cat, result == "positive")).name);
    } else if (result != "none") {
        throw InvalidArgument("result", "must be positive, negative or none");
    }
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_power_class(const json& in) {
    Fields f(in);
    const LikelihoodRatio kappa(f.number("kappa"), "kappa");
    const PowerClass& pc = clinical_power_class(kappa);
    Outcome o;
    o.result["class"] = std::string(pc.name);
    o.result["anchor_log10_kappa"] = pc.log10_kappa;
    o.result["log10_kappa"] = std::log10(kappa.value());
    o.inputs = f.echo();
    return o;
}

inline std::vector<double> stepped_grid(double lo, double hi, double step, const std::string& field) {
    if (!(step > 0.0)) throw InvalidArgument(field, "step must be positive");
    if (!(hi >= lo)) throw InvalidArgument(field, "upper bound must not be below lower bound");
    const double span = (hi - lo) / step;
    const auto n = static_cast<std::size_t>(std::llround(span)) + 1;
    if (std::fabs(span - std::round(span)) > 1e-9 * std::max(1.0, span)) {
        throw InvalidArgument(field, "range must be a whole number of steps");
    }
    if (n == 1) return {lo};
    return uniform_grid(lo, hi, n, field);
}

inline Outcome cmd_audit(const json& in) {
    Fields f(in);
    const HeuristicConstant c = read_constant(f);
    const double step = f.number_or("step", 0.001);
    const auto pretests =
        stepped_grid(f.number_or("pretest_min", 0.1), f.number_or("pretest_max", 0.9), step, "pretest_min");
    const auto kappas =
        stepped_grid(f.number_or("kappa_min", 1.0), f.number_or("kappa_max", 10.0), step, "kappa_min");
    if (pretests.size() * kappas.size() > kMaxAuditNodes) {
        throw InvalidArgument("step", "audit grid exceeds 2e7 nodes");
    }
    const AuditSurface s = heuristic_audit(pretests, kappas, c);
    Outcome o;
    o.result["max_error"] = s.max_error;
    o.result["argmax_pretest"] = s.argmax_pretest;
    o.result["argmax_kappa"] = s.argmax_kappa;
    o.result["pretest_nodes"] = pretests.size();
    o.result["kappa_nodes"] = kappas.size();
    o.result["constant"] = constant_to_json(c);
    o.inputs = f.echo();
    return o;
}

inline Outcome cmd_simulate(const json& in, SimResult* full = nullptr) {
    Fields f(in);
    SimConfig cfg;
    cfg.n = f.count("n");
    cfg.true_prevalence = f.probability("prevalence");
    cfg.test = read_test(f);
    cfg.seed = f.count_or("seed", 0);
    cfg.replicates = f.count_or("replicates", 1);
    if (static_cast<double>(cfg.n) * static_cast<double>(cfg.replicates) > 1e9) {
        throw InvalidArgument("replicates", "n * replicates must not exceed 1e9");
    }
    const SimResult sim = simulate(cfg);
    Outcome o;
    o.result["first"] = confusion_to_json(sim.confusion);
    double t_total = 0.0;
    for (const auto& c : sim.replicates) t_total += static_cast<double>(c.positives());
    o.result["mean_t"] = t_total / static_cast<double>(sim.replicates.size());
    o.result["replicates"] = sim.replicates.size();
    if (cfg.test.youden() > 0.0 && cfg.replicates >= 2) {
        const CoverageReport cov = coverage_experiment(cfg, read_z(f));
        o.result["coverage"] = {{"coverage", cov.coverage},
                                {"clamp_rate", cov.clamp_rate},
                                {"mean_point", cov.mean_point}};
    }
    if (full) *full = sim;
    o.inputs = f.echo();
    return o;
}

inline json kappa_table_json(const HeuristicConstant& c) {
    json rows = json::array();
    for (const auto& r : kappa_table(c)) {
        rows.push_back({{"kappa", r.kappa},
                        {"delta", r.delta},
                        {"pretest_for_1.0", r.pretest_for_certainty},
                        {"pretest_for_0.5", r.pretest_for_even_odds}});
    }
    return rows;
}

inline json pretest_table_json(const HeuristicConstant& c) {
    json rows = json::array();
    for (const auto& r : pretest_table(c)) {
        rows.push_back({{"kappa_product", r.kappa_product}, {"mean", r.mean}, {"min", r.min}, {"max", r.max}});
    }
    return rows;
}

inline Outcome cmd_tables(const json& in) {
    Fields f(in);
    const std::string which = f.string_or("table", "all");
    const HeuristicConstant c = HeuristicConstant::standard();
    Outcome o;
    if (which == "3" || which == "all") o.result["kappa_table"] = kappa_table_json(c);
    if (which == "4" || which == "all") o.result["pretest_table"] = pretest_table_json(c);
    if (o.result.empty()) throw InvalidArgument("table", "must be 3, 4 or all");
    o.result["constant"] = constant_to_json(c);
    o.inputs = f.echo();
    return o;
}

// --- registry ------------------------------------------------------------------

using Handler = std::function<Outcome(const json&)>;

inline const std::map<std::string, Handler>& commands() {
    static const std::map<std::string, Handler> table{
        {"ppv", cmd_ppv},
        {"threshold", cmd_threshold},
        {"lr", cmd_lr},
        {"posttest", cmd_posttest},
        {"mcgee", cmd_mcgee},
        {"curve", cmd_curve},
        {"nomogram", cmd_nomogram},
        {"estimate rogan-gladen", cmd_rogan_gladen},
        {"estimate beta", [](const json& in) { return cmd_beta(in); }},
        {"estimate baxter", [](const json& in) { return cmd_baxter(in); }},
        {"estimate baxter-unknown", [](const json& in) { return cmd_baxter_unknown(in); }},
        {"pretest", cmd_pretest},
        {"category", cmd_category},
        {"power-class", cmd_power_class},
        {"audit", cmd_audit},
        {"simulate", [](const json& in) { return cmd_simulate(in); }},
        {"tables", cmd_tables},
    };
    return table;
}

inline json envelope(const std::string& command, const Outcome& o) {
    return {{"schema_version", kSchemaVersion},
            {"version", kEngineVersion},
            {"command", command},
            {"inputs", o.inputs},
            {"result", o.result},
            {"warnings", o.warnings}};
}

}  // namespace bayescreen::service
