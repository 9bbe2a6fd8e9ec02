#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "gaincond/format.hpp"
#include "gaincond/model.hpp"

namespace gaincond {

// Raised for malformed model files. Carries the closest known location
// (0-based row/column of the offending cell, or the offending name).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::string message,
                        std::optional<std::size_t> row = std::nullopt,
                        std::optional<std::size_t> col = std::nullopt,
                        std::string subject = {});

    std::optional<std::size_t> row() const { return row_; }
    std::optional<std::size_t> col() const { return col_; }
    const std::string& subject() const { return subject_; }

private:
    std::optional<std::size_t> row_;
    std::optional<std::size_t> col_;
    std::string subject_;
};

// Canonical format is the json document {"mvs":[{"name","delta_move"}],
// "cvs":[{"name"}], "gains":[[...], ...]} with CV-major rows. The csv
// layout mirrors the usual gain-table print: empty corner cell, MV name
// header, a delta_move row, then one row per CV.
GainModel parse_model(const std::string& text, Format format);

// Reads a model file, picking the format from the extension (.csv) and
// falling back to content sniffing.
GainModel load_model(const std::filesystem::path& path);

std::string serialize_model(const GainModel& model, Format format);

}  // namespace gaincond
