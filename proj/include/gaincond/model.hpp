#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaincond/matrix.hpp"

namespace gaincond {

struct Mv {
    std::string name;
    double delta_move = 1.0;  // typical move size used during identification
    std::string units;
};

struct Cv {
    std::string name;
    std::string units;
};

// Steady-state gain model in engineering units: one row per CV, one
// column per MV.
struct GainModel {
    std::vector<Mv> mvs;
    std::vector<Cv> cvs;
    Matrix gains;

    std::optional<std::size_t> mv_index(const std::string& name) const;
    std::optional<std::size_t> cv_index(const std::string& name) const;
    std::vector<std::string> mv_names() const;
    std::vector<std::string> cv_names() const;
};

enum class ViolationCode {
    dimension_mismatch,
    non_finite_gain,
    non_positive_delta_move,
    duplicate_mv_name,
    duplicate_cv_name,
    zero_row,  // all-zero CV row; warning, not error
};

enum class Severity { error, warning };

struct Violation {
    ViolationCode code;
    Severity severity = Severity::error;
    std::optional<std::size_t> row;
    std::optional<std::size_t> col;
    std::string subject;  // offending name, when the location is a name
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool has_errors() const;
    bool has_warnings() const;
};

// Reports every invariant violation; all-zero CV rows come back as
// warnings so downstream scaling can still run.
ValidationReport validate_model(const GainModel& model);

const char* to_string(ViolationCode code);
const char* to_string(Severity s);

}  // namespace gaincond
