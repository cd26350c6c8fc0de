#pragma once

#include <stdexcept>
#include <string>

namespace bec {

enum class ErrorKind {
    contract,
    domain,
    input,
    inadmissible,
    not_affiliated,
    numerical,
    insufficient_resolution,
    gapless,
    no_gap,
    band_edge,
    degenerate_exponent,
    triple_degeneracy,
    not_comparable,
    lost_band,
    unsupported,
};

const char* to_string(ErrorKind kind);

// CLI exit code for an error of this kind: 2 for bad input or inadmissible
// data, 3 for numerical trouble.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace bec
