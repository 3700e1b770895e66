#pragma once

#include <stdexcept>
#include <string>

namespace pnp {

enum class Errc {
    InputError,
    NotPrime,
    DegreeZero,
    DivisionByZero,
    IndexOutOfRange,
    IncompleteFactorization,
    NotDividing,
    NotCoprime,
    NotReduced,
    TowerTooLarge,
    HypothesisViolated,
    InvalidSubset,
    PreconditionViolated,
};

const char* errc_name(Errc e) noexcept;

/// Every library failure is reported through this one type; `kind()` tells callers what went wrong.
class Error : public std::runtime_error {
public:
    Error(Errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Errc kind() const noexcept { return kind_; }
    const char* kind_name() const noexcept { return errc_name(kind_); }

private:
    Errc kind_;
};

[[noreturn]] inline void fail(Errc kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, Errc kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace pnp
