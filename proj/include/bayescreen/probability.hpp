#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "bayescreen/errors.hpp"

namespace bayescreen {

/// A real number in the closed unit interval.
class Probability {
public:
    constexpr Probability() = default;

    explicit Probability(double value, const std::string& field = "probability") : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw InvalidArgument(field, "must lie in [0, 1], got " + std::to_string(value));
        }
    }

    /// Clamps into [0, 1]; NaN is still rejected.
    static Probability clamped(double value, const std::string& field = "probability") {
        if (std::isnan(value)) throw InvalidArgument(field, "is NaN");
        return Probability(std::clamp(value, 0.0, 1.0), field);
    }

    constexpr double value() const noexcept { return value_; }
    constexpr double complement() const noexcept { return 1.0 - value_; }

    friend constexpr auto operator<=>(Probability, Probability) = default;

private:
    double value_ = 0.0;
};

/// Odds p/(1-p); infinite when p = 1.
struct Odds {
    double value = 0.0;

    bool is_infinite() const noexcept { return std::isinf(value); }
};

inline Odds to_odds(Probability p) {
    if (p.value() == 1.0) return Odds{std::numeric_limits<double>::infinity()};
    return Odds{p.value() / p.complement()};
}

inline Probability to_probability(Odds o) {
    if (!(o.value >= 0.0)) throw InvalidArgument("odds", "must be non-negative");
    if (o.is_infinite()) return Probability(1.0);
    return Probability(o.value / (1.0 + o.value));
}

/// Log-odds. Undefined at the endpoints of the unit interval.
inline double logit(Probability p) {
    if (p.value() <= 0.0 || p.value() >= 1.0) {
        throw BoundaryLogit("logit is undefined at p = " + std::to_string(p.value()));
    }
    return std::log(p.value()) - std::log1p(-p.value());
}

inline Probability inv_logit(double x) {
    if (std::isnan(x)) throw InvalidArgument("logit", "is NaN");
    // Split by sign so neither branch overflows.
    if (x >= 0.0) return Probability(1.0 / (1.0 + std::exp(-x)));
    const double e = std::exp(x);
    return Probability(e / (1.0 + e));
}

}  // namespace bayescreen
