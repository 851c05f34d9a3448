#pragma once

#include <stdexcept>
#include <string>

namespace bailey {

enum class ErrKind {
    NonUnitLeading,
    EmptySeries,
    NonconvergentInfiniteProduct,
    IndexBeyondTable,
    PreconditionFailed,
    NoStabilization,
    NoValuationGrowth,
    NonCoerciveBound,
    DegenerateSpecialization,
    InsufficientOrder,
    LatticeViolation,
    Parse,
    InvalidParams,
    Internal,
};

class EngineError : public std::runtime_error {
public:
    EngineError(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    ErrKind kind() const { return kind_; }

private:
    ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg)
{
    throw EngineError(k, msg);
}

} // namespace bailey
