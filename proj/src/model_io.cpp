#include "gaincond/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gaincond {

using ordered_json = nlohmann::ordered_json;

// ------------------------------------------------------------ model type

std::optional<std::size_t> GainModel::mv_index(const std::string& name) const {
    for (std::size_t j = 0; j < mvs.size(); ++j)
        if (mvs[j].name == name) return j;
    return std::nullopt;
}

std::optional<std::size_t> GainModel::cv_index(const std::string& name) const {
    for (std::size_t i = 0; i < cvs.size(); ++i)
        if (cvs[i].name == name) return i;
    return std::nullopt;
}

std::vector<std::string> GainModel::mv_names() const {
    std::vector<std::string> out;
    out.reserve(mvs.size());
    for (const auto& mv : mvs) out.push_back(mv.name);
    return out;
}

std::vector<std::string> GainModel::cv_names() const {
    std::vector<std::string> out;
    out.reserve(cvs.size());
    for (const auto& cv : cvs) out.push_back(cv.name);
    return out;
}

bool ValidationReport::has_errors() const {
    for (const auto& v : violations)
        if (v.severity == Severity::error) return true;
    return false;
}

bool ValidationReport::has_warnings() const {
    for (const auto& v : violations)
        if (v.severity == Severity::warning) return true;
    return false;
}

const char* to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::dimension_mismatch: return "dimension_mismatch";
        case ViolationCode::non_finite_gain: return "non_finite_gain";
        case ViolationCode::non_positive_delta_move: return "non_positive_delta_move";
        case ViolationCode::duplicate_mv_name: return "duplicate_mv_name";
        case ViolationCode::duplicate_cv_name: return "duplicate_cv_name";
        case ViolationCode::zero_row: return "zero_row";
    }
    return "?";
}

const char* to_string(Severity s) {
    return s == Severity::error ? "error" : "warning";
}

// ------------------------------------------------------------ validation

ValidationReport validate_model(const GainModel& model) {
    ValidationReport report;
    auto add = [&](Violation v) { report.violations.push_back(std::move(v)); };

    if (model.gains.rows() != model.cvs.size() || model.gains.cols() != model.mvs.size()) {
        add({ViolationCode::dimension_mismatch, Severity::error, model.gains.rows(),
             model.gains.cols(), {},
             "gains matrix is " + std::to_string(model.gains.rows()) + "x" +
                 std::to_string(model.gains.cols()) + ", expected " +
                 std::to_string(model.cvs.size()) + "x" + std::to_string(model.mvs.size())});
        return report;  // later checks would index out of bounds
    }

    std::set<std::string> seen;
    for (std::size_t j = 0; j < model.mvs.size(); ++j) {
        const auto& mv = model.mvs[j];
        if (!seen.insert(mv.name).second)
            add({ViolationCode::duplicate_mv_name, Severity::error, std::nullopt, j, mv.name,
                 "duplicate MV name '" + mv.name + "'"});
        if (!(mv.delta_move > 0.0) || !std::isfinite(mv.delta_move))
            add({ViolationCode::non_positive_delta_move, Severity::error, std::nullopt, j,
                 mv.name, "delta_move for '" + mv.name + "' must be a positive finite real"});
    }
    seen.clear();
    for (std::size_t i = 0; i < model.cvs.size(); ++i)
        if (!seen.insert(model.cvs[i].name).second)
            add({ViolationCode::duplicate_cv_name, Severity::error, i, std::nullopt,
                 model.cvs[i].name, "duplicate CV name '" + model.cvs[i].name + "'"});

    for (std::size_t i = 0; i < model.gains.rows(); ++i) {
        bool all_zero = true;
        for (std::size_t j = 0; j < model.gains.cols(); ++j) {
            const double g = model.gains(i, j);
            if (!std::isfinite(g))
                add({ViolationCode::non_finite_gain, Severity::error, i, j, {},
                     "gain (" + model.cvs[i].name + ", " + model.mvs[j].name +
                         ") is not finite"});
            if (g != 0.0) all_zero = false;
        }
        if (all_zero && model.gains.cols() > 0)
            add({ViolationCode::zero_row, Severity::warning, i, std::nullopt,
                 model.cvs[i].name,
                 "CV '" + model.cvs[i].name + "' has an all-zero gain row"});
    }
    return report;
}

// ------------------------------------------------------------ parse: json

ParseError::ParseError(std::string message, std::optional<std::size_t> row,
                       std::optional<std::size_t> col, std::string subject)
    : std::runtime_error(std::move(message)), row_(row), col_(col),
      subject_(std::move(subject)) {}

namespace {

double require_number(const ordered_json& j, const char* what, const std::string& subject) {
    if (!j.is_number())
        throw ParseError(std::string(what) + " must be a number", std::nullopt, std::nullopt,
                         subject);
    return j.get<double>();
}

GainModel parse_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("json syntax error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("mvs") || !doc.contains("cvs") ||
        !doc.contains("gains"))
        throw ParseError("model json must be an object with 'mvs', 'cvs' and 'gains'");

    GainModel model;
    std::set<std::string> seen;
    for (const auto& item : doc["mvs"]) {
        if (!item.is_object() || !item.contains("name") || !item["name"].is_string())
            throw ParseError("each mv needs a string 'name'");
        Mv mv;
        mv.name = item["name"].get<std::string>();
        if (!item.contains("delta_move"))
            throw ParseError("mv '" + mv.name + "' is missing 'delta_move'", std::nullopt,
                             std::nullopt, mv.name);
        mv.delta_move = require_number(item["delta_move"], "delta_move", mv.name);
        if (item.contains("units")) mv.units = item["units"].get<std::string>();
        if (!(mv.delta_move > 0.0) || !std::isfinite(mv.delta_move))
            throw ParseError("non-positive delta_move for MV '" + mv.name + "'",
                             std::nullopt, model.mvs.size(), mv.name);
        if (!seen.insert(mv.name).second)
            throw ParseError("duplicate MV name '" + mv.name + "'", std::nullopt,
                             model.mvs.size(), mv.name);
        model.mvs.push_back(std::move(mv));
    }
    seen.clear();
    for (const auto& item : doc["cvs"]) {
        if (!item.is_object() || !item.contains("name") || !item["name"].is_string())
            throw ParseError("each cv needs a string 'name'");
        Cv cv;
        cv.name = item["name"].get<std::string>();
        if (item.contains("units")) cv.units = item["units"].get<std::string>();
        if (!seen.insert(cv.name).second)
            throw ParseError("duplicate CV name '" + cv.name + "'", model.cvs.size(),
                             std::nullopt, cv.name);
        model.cvs.push_back(std::move(cv));
    }

    const auto& gains = doc["gains"];
    if (!gains.is_array() || gains.size() != model.cvs.size())
        throw ParseError("'gains' must have one row per CV (" +
                             std::to_string(model.cvs.size()) + " expected, " +
                             std::to_string(gains.size()) + " found)",
                         gains.is_array() ? std::optional<std::size_t>(gains.size())
                                          : std::nullopt);
    model.gains = Matrix(model.cvs.size(), model.mvs.size());
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const auto& row = gains[i];
        if (!row.is_array() || row.size() != model.mvs.size())
            throw ParseError("gains row " + std::to_string(i) + " must have " +
                                 std::to_string(model.mvs.size()) + " entries",
                             i, row.is_array() ? std::optional<std::size_t>(row.size())
                                               : std::nullopt);
        for (std::size_t j = 0; j < row.size(); ++j)
            model.gains(i, j) = require_number(row[j], "gain", model.cvs[i].name);
    }
    return model;
}

// ------------------------------------------------------------ parse: csv

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("cannot parse number '" + cell + "'", row, col);
    return value;
}

GainModel parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> lines;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (trim(raw).empty()) continue;
        lines.push_back(split_csv_line(raw));
    }
    if (lines.size() < 3)
        throw ParseError("csv model needs a header row, a delta_move row and at least one CV row");
    if (!lines[0][0].empty())
        throw ParseError("csv cell (0,0) must be empty", 0, 0);

    GainModel model;
    const std::size_t n_mv = lines[0].size() - 1;
    if (n_mv == 0) throw ParseError("csv header row names no MVs", 0, 1);
    if (lines[1].size() != n_mv + 1)
        throw ParseError("delta_move row has " + std::to_string(lines[1].size() - 1) +
                             " values, expected " + std::to_string(n_mv),
                         1, lines[1].size());
    if (lines[1][0] != "delta_move")
        throw ParseError("row 1 must start with the 'delta_move' label", 1, 0);

    std::set<std::string> seen;
    for (std::size_t j = 0; j < n_mv; ++j) {
        Mv mv;
        mv.name = lines[0][j + 1];
        if (mv.name.empty()) throw ParseError("empty MV name", 0, j + 1);
        if (!seen.insert(mv.name).second)
            throw ParseError("duplicate MV name '" + mv.name + "'", 0, j + 1, mv.name);
        mv.delta_move = parse_cell(lines[1][j + 1], 1, j + 1);
        if (!(mv.delta_move > 0.0) || !std::isfinite(mv.delta_move))
            throw ParseError("non-positive delta_move for MV '" + mv.name + "'", 1, j + 1,
                             mv.name);
        model.mvs.push_back(std::move(mv));
    }

    const std::size_t n_cv = lines.size() - 2;
    model.gains = Matrix(n_cv, n_mv);
    seen.clear();
    for (std::size_t i = 0; i < n_cv; ++i) {
        const auto& row = lines[i + 2];
        if (row.size() != n_mv + 1)
            throw ParseError("row " + std::to_string(i + 2) + " has " +
                                 std::to_string(row.size() - 1) + " gains, expected " +
                                 std::to_string(n_mv),
                             i + 2, row.size());
        Cv cv;
        cv.name = row[0];
        if (cv.name.empty()) throw ParseError("empty CV name", i + 2, 0);
        if (!seen.insert(cv.name).second)
            throw ParseError("duplicate CV name '" + cv.name + "'", i + 2, 0, cv.name);
        model.cvs.push_back(std::move(cv));
        for (std::size_t j = 0; j < n_mv; ++j)
            model.gains(i, j) = parse_cell(row[j + 1], i + 2, j + 1);
    }
    return model;
}

}  // namespace

GainModel parse_model(const std::string& text, Format format) {
    switch (format) {
        case Format::json: return parse_json(text);
        case Format::csv: return parse_csv(text);
        case Format::table: break;
    }
    throw std::invalid_argument("parse_model: unsupported format");
}

GainModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    Format format = Format::json;
    if (path.extension() == ".csv") {
        format = Format::csv;
    } else if (path.extension() != ".json") {
        // sniff: a json document starts with '{'
        const auto pos = text.find_first_not_of(" \t\r\n");
        format = (pos != std::string::npos && text[pos] == '{') ? Format::json : Format::csv;
    }
    return parse_model(text, format);
}

// ------------------------------------------------------------ serialize

std::string serialize_model(const GainModel& model, Format format) {
    if (format == Format::csv) {
        std::string out;
        for (const auto& mv : model.mvs) out += "," + mv.name;
        out += "\ndelta_move";
        for (const auto& mv : model.mvs) out += "," + format_number(mv.delta_move);
        out += "\n";
        for (std::size_t i = 0; i < model.cvs.size(); ++i) {
            out += model.cvs[i].name;
            for (std::size_t j = 0; j < model.mvs.size(); ++j)
                out += "," + format_number(model.gains(i, j));
            out += "\n";
        }
        return out;
    }
    if (format != Format::json)
        throw std::invalid_argument("serialize_model: unsupported format");

    ordered_json doc;
    doc["mvs"] = ordered_json::array();
    for (const auto& mv : model.mvs) {
        ordered_json j{{"name", mv.name}, {"delta_move", mv.delta_move}};
        if (!mv.units.empty()) j["units"] = mv.units;
        doc["mvs"].push_back(std::move(j));
    }
    doc["cvs"] = ordered_json::array();
    for (const auto& cv : model.cvs) {
        ordered_json j{{"name", cv.name}};
        if (!cv.units.empty()) j["units"] = cv.units;
        doc["cvs"].push_back(std::move(j));
    }
    doc["gains"] = ordered_json::array();
    for (std::size_t i = 0; i < model.gains.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < model.gains.cols(); ++j)
            row.push_back(model.gains(i, j));
        doc["gains"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

}  // namespace gaincond
