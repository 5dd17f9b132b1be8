#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace gamefit {

// Rejected input: dimension mismatches, bound violations, bad arguments.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent data files / configs. Carries the offending
// row when the source is tabular.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
    DataError(const std::string& what, long row)
        : std::runtime_error(what + " (row " + std::to_string(row) + ")"), row_(row) {}

    std::optional<long> row() const { return row_; }

private:
    std::optional<long> row_;
};

// Conditions that must not occur if the library is correct (e.g. an
// infeasible epigraph LP, which is impossible for a nonempty parameter
// space).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gamefit
