#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bayescreen {

// Every error raised by the engine carries a stable name that the CLI and
// the HTTP service surface verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Raised for malformed inputs (out-of-range probabilities, bad grid sizes,
// t > n, ...). The HTTP layer maps these to 400, everything else to 422.
class InvalidArgument : public Error {
public:
    InvalidArgument(std::string field, const std::string& message)
        : Error("InvalidArgument", field + ": " + message),
          field_(std::move(field)),
          detail_(message) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string field_;
    std::string detail_;
};

#define BAYESCREEN_DOMAIN_ERROR(Name)                                              \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& message) : Error(#Name, message) {}       \
    }

BAYESCREEN_DOMAIN_ERROR(DegenerateTest);
BAYESCREEN_DOMAIN_ERROR(UndefinedRatio);
BAYESCREEN_DOMAIN_ERROR(BoundaryLogit);
BAYESCREEN_DOMAIN_ERROR(UninformativeTest);
BAYESCREEN_DOMAIN_ERROR(EmptyCohort);
BAYESCREEN_DOMAIN_ERROR(UnnormalizedDensity);
BAYESCREEN_DOMAIN_ERROR(InvalidPrior);
BAYESCREEN_DOMAIN_ERROR(InvalidTarget);

#undef BAYESCREEN_DOMAIN_ERROR

}  // namespace bayescreen
