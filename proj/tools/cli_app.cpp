#include "cli_app.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaincond/binning.hpp"
#include "gaincond/model_io.hpp"
#include "gaincond/report.hpp"

namespace gaincond::cli {

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kIoError = 2;
constexpr int kBadConfig = 3;

void emit_error(std::ostream& err, const std::string& code, const std::string& message) {
    nlohmann::ordered_json j{{"error", code}, {"message", message}};
    err << j.dump() << "\n";
}

std::pair<std::string, std::string> split_cell(const std::string& spec) {
    const auto pos = spec.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == spec.size())
        throw std::invalid_argument("cell '" + spec + "' must look like CV:MV");
    return {spec.substr(0, pos), spec.substr(pos + 1)};
}

struct Options {
    std::string input;
    std::string input_right;  // compare only
    std::string out_path;
    std::string format = "table";
    std::string mode = "rga_flagged";
    double rga_threshold = 12.0;
    double cn_threshold = 59.0;
    double cn_higher_threshold = 100.0;
    std::vector<std::string> include;
    std::vector<std::string> exclude;
    std::optional<std::size_t> grid_bins;
    double grid_min_magnitude = 0.01;
};

Thresholds make_thresholds(const Options& o) {
    Thresholds th;
    th.rga_threshold = o.rga_threshold;
    th.cn_threshold = o.cn_threshold;
    th.cn_higher_threshold = o.cn_higher_threshold;
    th.validate();
    return th;
}

ConditioningPolicy make_policy(const Options& o) {
    ConditioningPolicy policy;
    policy.thresholds = make_thresholds(o);
    policy.mode = parse_selection_mode(o.mode);
    for (const auto& cell : o.include) policy.include.push_back(split_cell(cell));
    for (const auto& cell : o.exclude) policy.exclude.push_back(split_cell(cell));
    return policy;
}

// Loads and validates; hard invariant violations stop the command.
GainModel load_checked(const std::string& path, std::ostream& err) {
    GainModel model = load_model(path);
    const ValidationReport report = validate_model(model);
    if (report.has_errors()) {
        err << serialize_report(report, Format::json);
        throw std::domain_error("model '" + path + "' failed validation");
    }
    return model;
}

void deliver(const std::string& text, const Options& o, std::ostream& out) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw ParseError("cannot write '" + o.out_path + "'");
    f << text;
}

int cmd_validate(const Options& o, std::ostream& out) {
    const GainModel model = load_model(o.input);
    const ValidationReport report = validate_model(model);
    deliver(serialize_report(report, parse_format(o.format)), o, out);
    return report.has_errors() ? kValidationFailure : kOk;
}

int cmd_scale(const Options& o, std::ostream& out, std::ostream& err) {
    const GainModel model = load_checked(o.input, err);
    const ScaledGainMatrix scaled = typical_move_scale(model);
    const auto pairs = enumerate_pairs(scaled, make_thresholds(o));
    deliver(serialize_scaled(scaled, pairs, parse_format(o.format)), o, out);
    return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
    const GainModel model = load_checked(o.input, err);
    const ScaledGainMatrix scaled = typical_move_scale(model);
    const AnalysisSnapshot snapshot = analyze_matrix(scaled, make_thresholds(o));
    deliver(serialize_report(snapshot, scaled.mv_names, scaled.cv_names,
                             parse_format(o.format)),
            o, out);
    return kOk;
}

int cmd_bin(const Options& o, std::ostream& out, std::ostream& err) {
    const GainModel model = load_checked(o.input, err);
    const ConditioningResult result = condition_matrix(model, make_policy(o));

    // the diff report goes to stdout; --out holds the conditioned model
    out << serialize_report(result, parse_format(o.format));
    if (!o.out_path.empty()) {
        GainModel conditioned = model;
        conditioned.gains = result.engineering;
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) throw ParseError("cannot write '" + o.out_path + "'");
        f << serialize_model(conditioned, Format::json);
    }
    return kOk;
}

int cmd_grid(const Options& o, std::ostream& out) {
    const BinGrid grid = o.grid_bins ? build_grid_n(o.rga_threshold, *o.grid_bins)
                                     : build_grid(o.rga_threshold, o.grid_min_magnitude);
    deliver(serialize_report(grid, parse_format(o.format)), o, out);
    return kOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
    const GainModel left = load_checked(o.input, err);
    const GainModel right = load_checked(o.input_right, err);
    const ModelDiff diff = diff_models(left, right);
    deliver(serialize_report(diff, left.mv_names(), left.cv_names(), parse_format(o.format)),
            o, out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"gain matrix conditioning toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool thresholds, bool policy) {
        cmd->add_option("--format", o.format, "output format: table, csv or json")
            ->default_val("table");
        cmd->add_option("--out", o.out_path, "write the result to a file");
        if (thresholds) {
            cmd->add_option("--rga-threshold", o.rga_threshold)->default_val(12.0);
            cmd->add_option("--cn-threshold", o.cn_threshold)->default_val(59.0);
            cmd->add_option("--cn-higher-threshold", o.cn_higher_threshold)
                ->default_val(100.0);
        }
        if (policy) {
            cmd->add_option("--mode", o.mode,
                            "rga_flagged, rga_or_cn_flagged, all_nonzero or explicit")
                ->default_val("rga_flagged");
            cmd->add_option("--include", o.include, "CV:MV cell to force-adjust");
            cmd->add_option("--exclude", o.exclude, "CV:MV cell to leave untouched");
        }
    };

    auto* validate = app.add_subcommand("validate", "check a model file");
    validate->add_option("model", o.input)->required();
    add_common(validate, false, false);

    auto* scale = app.add_subcommand("scale", "typical-move scale with flag markers");
    scale->add_option("model", o.input)->required();
    add_common(scale, true, false);

    auto* analyze = app.add_subcommand("analyze", "2x2 and higher-order conditioning scan");
    analyze->add_option("model", o.input)->required();
    add_common(analyze, true, false);

    auto* bin = app.add_subcommand("bin", "condition the model by bin snapping");
    bin->add_option("model", o.input)->required();
    add_common(bin, true, true);

    auto* grid = app.add_subcommand("grid", "list bin boundaries for a threshold");
    grid->add_option("--rga-threshold", o.rga_threshold)->default_val(12.0);
    auto* nopt = grid->add_option_function<std::size_t>(
        "-n,--bins", [&](std::size_t n) { o.grid_bins = n; }, "number of bins");
    grid->add_option("--min-magnitude", o.grid_min_magnitude,
                     "extend the grid to cover this magnitude")
        ->excludes(nopt)
        ->default_val(0.01);
    add_common(grid, false, false);

    auto* compare = app.add_subcommand("compare", "cell-by-cell diff of two models");
    compare->add_option("left", o.input)->required();
    compare->add_option("right", o.input_right)->required();
    add_common(compare, false, false);

    try {
        // CLI11 consumes the vector back to front
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "bad_arguments", e.what());
        return kBadConfig;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(o, out);
        if (app.got_subcommand(scale)) return cmd_scale(o, out, err);
        if (app.got_subcommand(analyze)) return cmd_analyze(o, out, err);
        if (app.got_subcommand(bin)) return cmd_bin(o, out, err);
        if (app.got_subcommand(grid)) return cmd_grid(o, out);
        if (app.got_subcommand(compare)) return cmd_compare(o, out, err);
        emit_error(err, "bad_arguments", "no command given");
        return kBadConfig;
    } catch (const ParseError& e) {
        emit_error(err, "parse_error", e.what());
        return kIoError;
    } catch (const std::domain_error&) {
        return kValidationFailure;  // report already on stderr
    } catch (const std::invalid_argument& e) {
        emit_error(err, "bad_configuration", e.what());
        return kBadConfig;
    } catch (const std::exception& e) {
        emit_error(err, "internal_error", e.what());
        return kBadConfig;
    }
}

}  // namespace gaincond::cli
