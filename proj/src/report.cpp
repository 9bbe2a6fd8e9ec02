#include "gaincond/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace gaincond {

using ordered_json = nlohmann::ordered_json;

namespace {

// json has no literal for infinities; reports print them as "inf" and
// readers map the string back, keeping round-trips lossless.
ordered_json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string layout_table(const std::vector<std::vector<std::string>>& rows,
                         const std::vector<bool>& right_align) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const bool right = c < right_align.size() && right_align[c];
            std::string cell = row[c];
            if (right)
                cell.insert(0, width[c] - cell.size(), ' ');
            else if (c + 1 < row.size())
                cell.append(width[c] - cell.size(), ' ');
            if (c) line += "  ";
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

ordered_json pair_json(const PairMetrics& p, std::span<const std::string> mv_names,
                       std::span<const std::string> cv_names) {
    return ordered_json{{"mv1", mv_names[p.mv1]}, {"mv2", mv_names[p.mv2]},
                        {"cv1", cv_names[p.cv1]}, {"cv2", cv_names[p.cv2]},
                        {"cond", json_number(p.cond)},
                        {"rga", json_number(p.rga_number)},
                        {"rga_flagged", p.rga_flagged},
                        {"cn_flagged", p.cn_flagged},
                        {"degenerate", to_string(p.degenerate)}};
}

std::string pair_flags(const PairMetrics& p) {
    std::string f;
    if (p.rga_flagged) f += '#';
    if (p.cn_flagged) f += '*';
    return f;
}

std::vector<PairMetrics> flagged_by_cond(std::span<const PairMetrics> pairs) {
    std::vector<PairMetrics> out;
    for (const auto& p : pairs)
        if (p.rga_flagged || p.cn_flagged) out.push_back(p);
    std::sort(out.begin(), out.end(), [](const PairMetrics& a, const PairMetrics& b) {
        if (a.cond != b.cond) return a.cond < b.cond;
        return std::tie(a.mv1, a.mv2, a.cv1, a.cv2) < std::tie(b.mv1, b.mv2, b.cv1, b.cv2);
    });
    return out;
}

}  // namespace

// ------------------------------------------------------------ validation

std::string serialize_report(const ValidationReport& report, Format format) {
    if (format == Format::json) {
        ordered_json doc;
        std::size_t errors = 0, warnings = 0;
        doc["violations"] = ordered_json::array();
        for (const auto& v : report.violations) {
            (v.severity == Severity::error ? errors : warnings)++;
            ordered_json j{{"code", to_string(v.code)}, {"severity", to_string(v.severity)}};
            if (v.row) j["row"] = *v.row;
            if (v.col) j["col"] = *v.col;
            if (!v.subject.empty()) j["subject"] = v.subject;
            j["message"] = v.message;
            doc["violations"].push_back(std::move(j));
        }
        doc["errors"] = errors;
        doc["warnings"] = warnings;
        return doc.dump(2) + "\n";
    }
    if (format == Format::csv) {
        std::string out = "severity,code,row,col,subject,message\n";
        for (const auto& v : report.violations) {
            out += std::string(to_string(v.severity)) + "," + to_string(v.code) + ",";
            out += (v.row ? std::to_string(*v.row) : "") + ",";
            out += (v.col ? std::to_string(*v.col) : "") + ",";
            out += csv_quote(v.subject) + "," + csv_quote(v.message) + "\n";
        }
        return out;
    }
    if (report.violations.empty()) return "model is valid\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& v : report.violations) {
        std::string where = v.subject;
        if (v.row || v.col) {
            where = "(";
            if (v.row) where += "row " + std::to_string(*v.row);
            if (v.row && v.col) where += ", ";
            if (v.col) where += "col " + std::to_string(*v.col);
            where += ")";
            if (!v.subject.empty()) where += " " + v.subject;
        }
        rows.push_back({to_string(v.severity), to_string(v.code), where, v.message});
    }
    return layout_table(rows, {});
}

// ------------------------------------------------------------ pair lists

std::string serialize_report(std::span<const PairMetrics> pairs,
                             std::span<const std::string> mv_names,
                             std::span<const std::string> cv_names, Format format) {
    if (format == Format::csv) {
        std::string out = "mv1,mv2,cv1,cv2,cond,rga\n";
        for (const auto& p : pairs) {
            out += mv_names[p.mv1] + "," + mv_names[p.mv2] + "," + cv_names[p.cv1] + "," +
                   cv_names[p.cv2] + "," + format_number(p.cond) + "," +
                   format_number(p.rga_number) + "\n";
        }
        return out;
    }
    if (format == Format::json) {
        ordered_json doc = ordered_json::array();
        for (const auto& p : pairs) doc.push_back(pair_json(p, mv_names, cv_names));
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"MV1", "MV2", "CV1", "CV2", "cond", "rga", "flags"});
    for (const auto& p : pairs)
        rows.push_back({mv_names[p.mv1], mv_names[p.mv2], cv_names[p.cv1], cv_names[p.cv2],
                        format_fixed(p.cond, 2), format_fixed(p.rga_number, 2),
                        pair_flags(p)});
    return layout_table(rows, {false, false, false, false, true, true});
}

// ------------------------------------------------------------ grid

std::string serialize_report(const BinGrid& grid, Format format) {
    if (format == Format::json) {
        ordered_json doc{{"rga_threshold", grid.rga_threshold},
                         {"ratio", grid.ratio},
                         {"max_change_pct", max_relative_change(grid.rga_threshold)},
                         {"boundaries", grid.boundaries}};
        return doc.dump(2) + "\n";
    }
    if (format == Format::csv) {
        std::string out = "index,boundary\n";
        for (std::size_t i = 0; i < grid.boundaries.size(); ++i)
            out += std::to_string(i) + "," + format_number(grid.boundaries[i]) + "\n";
        return out;
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < grid.boundaries.size(); ++i)
        rows.push_back({"B_" + std::to_string(i), format_fixed(grid.boundaries[i], 4)});
    std::string out = layout_table(rows, {false, true});
    out += "ratio " + format_fixed(grid.ratio, 6) + ", max change " +
           format_fixed(max_relative_change(grid.rga_threshold), 2) + "%\n";
    return out;
}

// ------------------------------------------------------------ analysis

std::string serialize_report(const AnalysisSnapshot& snapshot,
                             std::span<const std::string> mv_names,
                             std::span<const std::string> cv_names, Format format) {
    const auto flagged = flagged_by_cond(snapshot.pairs);

    if (format == Format::csv)
        return serialize_report(std::span<const PairMetrics>(flagged), mv_names, cv_names,
                                Format::csv);

    if (format == Format::json) {
        ordered_json doc;
        doc["thresholds"] = {{"rga_threshold", snapshot.thresholds.rga_threshold},
                             {"cn_threshold", snapshot.thresholds.cn_threshold},
                             {"cn_higher_threshold", snapshot.thresholds.cn_higher_threshold},
                             {"singular_tol", snapshot.thresholds.singular_tol}};
        doc["summary"] = {{"pairs_total", snapshot.pairs.size()},
                          {"rga_flagged", snapshot.rga_flagged_count()},
                          {"cn_flagged", snapshot.cn_flagged_count()},
                          {"collinear", snapshot.collinear.pairs.size()},
                          {"structural", snapshot.collinear.structural.size()}};
        doc["pairs"] = ordered_json::array();
        for (const auto& p : flagged) doc["pairs"].push_back(pair_json(p, mv_names, cv_names));
        doc["collinear_pairs"] = ordered_json::array();
        for (const auto& k : snapshot.collinear.pairs)
            doc["collinear_pairs"].push_back({{"mv1", mv_names[k.mv1]},
                                              {"mv2", mv_names[k.mv2]},
                                              {"cv1", cv_names[k.cv1]},
                                              {"cv2", cv_names[k.cv2]}});
        doc["higher_order"] = ordered_json::array();
        for (const auto& scan : snapshot.higher) {
            ordered_json j{{"k", scan.k},
                           {"total", scan.total()},
                           {"flagged_count", scan.flagged.size()},
                           {"singular_count", scan.singular_count},
                           {"below_count", scan.below_count}};
            j["submatrices"] = ordered_json::array();
            for (const auto& sm : scan.flagged) {
                ordered_json names_mv = ordered_json::array();
                for (auto idx : sm.mv_set) names_mv.push_back(mv_names[idx]);
                ordered_json names_cv = ordered_json::array();
                for (auto idx : sm.cv_set) names_cv.push_back(cv_names[idx]);
                j["submatrices"].push_back(
                    {{"mvs", names_mv}, {"cvs", names_cv}, {"cond", json_number(sm.cond)}});
            }
            doc["higher_order"].push_back(std::move(j));
        }
        return doc.dump(2) + "\n";
    }

    std::string out = "ill-conditioned 2x2 pairs: " + std::to_string(flagged.size()) +
                      " of " + std::to_string(snapshot.pairs.size()) +
                      " (rga >= " + format_number(snapshot.thresholds.rga_threshold) + ": " +
                      std::to_string(snapshot.rga_flagged_count()) +
                      ", cond >= " + format_number(snapshot.thresholds.cn_threshold) + ": " +
                      std::to_string(snapshot.cn_flagged_count()) + ")\n";
    out += serialize_report(std::span<const PairMetrics>(flagged), mv_names, cv_names,
                            Format::table);
    out += "collinear pairs: " + std::to_string(snapshot.collinear.pairs.size()) +
           " (structural zero pairs: " + std::to_string(snapshot.collinear.structural.size()) +
           ")\n";
    for (const auto& k : snapshot.collinear.pairs)
        out += "  " + mv_names[k.mv1] + " x " + mv_names[k.mv2] + "  /  " + cv_names[k.cv1] +
               " x " + cv_names[k.cv2] + "\n";
    for (const auto& scan : snapshot.higher)
        out += std::to_string(scan.k) + "x" + std::to_string(scan.k) +
               " submatrices above cond " +
               format_number(snapshot.thresholds.cn_higher_threshold) + ": " +
               std::to_string(scan.flagged.size()) + " of " + std::to_string(scan.total()) +
               " (singular: " + std::to_string(scan.singular_count) + ")\n";
    return out;
}

// ------------------------------------------------------------ scaled table

std::string render_scaled_table(const ScaledGainMatrix& scaled,
                                std::span<const PairMetrics> pairs) {
    const std::size_t n_cv = scaled.values.rows();
    const std::size_t n_mv = scaled.values.cols();
    std::vector<std::vector<std::string>> marks(n_cv, std::vector<std::string>(n_mv));
    for (const auto& p : pairs) {
        for (auto [i, j] : {std::pair{p.cv1, p.mv1}, std::pair{p.cv1, p.mv2},
                            std::pair{p.cv2, p.mv1}, std::pair{p.cv2, p.mv2}}) {
            auto& m = marks[i][j];
            if (p.rga_flagged && m.find('#') == std::string::npos) m += '#';
            if (p.cn_flagged && m.find('*') == std::string::npos) m += '*';
        }
    }
    for (auto& row : marks)
        for (auto& m : row) std::sort(m.begin(), m.end());  // '#' before '*'

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{""};
    header.insert(header.end(), scaled.mv_names.begin(), scaled.mv_names.end());
    rows.push_back(header);
    std::vector<std::string> delta{"delta_move"};
    for (double d : scaled.col_scales) delta.push_back(format_number(d));
    rows.push_back(delta);
    for (std::size_t i = 0; i < n_cv; ++i) {
        std::vector<std::string> row{scaled.cv_names[i]};
        for (std::size_t j = 0; j < n_mv; ++j)
            row.push_back(format_fixed(scaled.values(i, j), 4) + marks[i][j]);
        rows.push_back(row);
    }
    std::vector<bool> right(n_mv + 1, true);
    right[0] = false;
    return layout_table(rows, right);
}

std::string serialize_scaled(const ScaledGainMatrix& scaled,
                             std::span<const PairMetrics> pairs, Format format) {
    if (format == Format::table) return render_scaled_table(scaled, pairs);
    if (format == Format::csv) {
        std::string out;
        for (const auto& n : scaled.mv_names) out += "," + n;
        out += "\ndelta_move";
        for (double d : scaled.col_scales) out += "," + format_number(d);
        out += "\n";
        for (std::size_t i = 0; i < scaled.values.rows(); ++i) {
            out += scaled.cv_names[i];
            for (std::size_t j = 0; j < scaled.values.cols(); ++j)
                out += "," + format_number(scaled.values(i, j));
            out += "\n";
        }
        return out;
    }
    ordered_json doc;
    doc["mvs"] = ordered_json::array();
    for (std::size_t j = 0; j < scaled.mv_names.size(); ++j)
        doc["mvs"].push_back(
            {{"name", scaled.mv_names[j]}, {"delta_move", scaled.col_scales[j]}});
    doc["cvs"] = ordered_json::array();
    for (const auto& n : scaled.cv_names) doc["cvs"].push_back({{"name", n}});
    doc["values"] = ordered_json::array();
    for (std::size_t i = 0; i < scaled.values.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < scaled.values.cols(); ++j)
            row.push_back(scaled.values(i, j));
        doc["values"].push_back(std::move(row));
    }
    doc["row_scales"] = scaled.row_scales;
    doc["zero_rows"] = scaled.zero_rows;
    ordered_json rga_cells = ordered_json::array(), cn_cells = ordered_json::array();
    std::set<std::pair<std::size_t, std::size_t>> seen_rga, seen_cn;
    for (const auto& p : pairs)
        for (auto [i, j] : {std::pair{p.cv1, p.mv1}, std::pair{p.cv1, p.mv2},
                            std::pair{p.cv2, p.mv1}, std::pair{p.cv2, p.mv2}}) {
            if (p.rga_flagged && seen_rga.insert({i, j}).second)
                rga_cells.push_back({{"cv", scaled.cv_names[i]}, {"mv", scaled.mv_names[j]}});
            if (p.cn_flagged && seen_cn.insert({i, j}).second)
                cn_cells.push_back({{"cv", scaled.cv_names[i]}, {"mv", scaled.mv_names[j]}});
        }
    doc["flags"] = {{"rga", rga_cells}, {"cn", cn_cells}};
    return doc.dump(2) + "\n";
}

// ------------------------------------------------------------ conditioning

std::string serialize_report(const ConditioningResult& result, Format format) {
    const auto& mv_names = result.scaled.mv_names;
    const auto& cv_names = result.scaled.cv_names;
    const std::size_t n_cv = result.binned.rows();
    const std::size_t n_mv = result.binned.cols();

    std::size_t adjusted = 0, changed = 0;
    double max_change = 0.0;
    for (std::size_t i = 0; i < n_cv; ++i)
        for (std::size_t j = 0; j < n_mv; ++j)
            if (result.bin_index[i][j] >= 0) {
                ++adjusted;
                if (result.change_pct(i, j) != 0.0) ++changed;
                max_change = std::max(max_change, std::abs(result.change_pct(i, j)));
            }

    if (format == Format::csv) {
        std::string out = "cv,mv,scaled,binned,bin_index,change_pct\n";
        for (std::size_t i = 0; i < n_cv; ++i)
            for (std::size_t j = 0; j < n_mv; ++j)
                if (result.bin_index[i][j] >= 0)
                    out += cv_names[i] + "," + mv_names[j] + "," +
                           format_number(result.scaled.values(i, j)) + "," +
                           format_number(result.binned(i, j)) + "," +
                           std::to_string(result.bin_index[i][j]) + "," +
                           format_number(result.change_pct(i, j)) + "\n";
        return out;
    }

    if (format == Format::json) {
        ordered_json doc;
        doc["grid"] = {{"rga_threshold", result.grid.rga_threshold},
                       {"ratio", result.grid.ratio},
                       {"boundaries", result.grid.boundaries}};
        doc["cells"] = ordered_json::array();
        for (std::size_t i = 0; i < n_cv; ++i)
            for (std::size_t j = 0; j < n_mv; ++j)
                if (result.bin_index[i][j] >= 0)
                    doc["cells"].push_back({{"cv", cv_names[i]},
                                            {"mv", mv_names[j]},
                                            {"scaled", result.scaled.values(i, j)},
                                            {"binned", result.binned(i, j)},
                                            {"bin_index", result.bin_index[i][j]},
                                            {"change_pct", result.change_pct(i, j)}});
        doc["binned"] = ordered_json::array();
        for (std::size_t i = 0; i < n_cv; ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t j = 0; j < n_mv; ++j) row.push_back(result.binned(i, j));
            doc["binned"].push_back(std::move(row));
        }
        doc["engineering"] = ordered_json::array();
        for (std::size_t i = 0; i < n_cv; ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t j = 0; j < n_mv; ++j) row.push_back(result.engineering(i, j));
            doc["engineering"].push_back(std::move(row));
        }
        auto snapshot_counts = [](const AnalysisSnapshot& s) {
            ordered_json j{{"rga_flagged", s.rga_flagged_count()},
                           {"cn_flagged", s.cn_flagged_count()},
                           {"collinear", s.collinear.pairs.size()}};
            for (const auto& scan : s.higher)
                j[std::to_string(scan.k) + "x" + std::to_string(scan.k) + "_above_threshold"] =
                    scan.flagged.size();
            return j;
        };
        doc["summary"] = {{"adjusted_cells", adjusted},
                          {"changed_cells", changed},
                          {"max_change_pct", max_change},
                          {"before", snapshot_counts(result.before)},
                          {"after", snapshot_counts(result.after)}};
        return doc.dump(2) + "\n";
    }

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{""};
    header.insert(header.end(), mv_names.begin(), mv_names.end());
    rows.push_back(header);
    for (std::size_t i = 0; i < n_cv; ++i) {
        std::vector<std::string> row{cv_names[i]};
        for (std::size_t j = 0; j < n_mv; ++j) {
            std::string cell = format_fixed(result.binned(i, j), 4);
            if (result.change_pct(i, j) != 0.0) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), " (%+.2f%%)", result.change_pct(i, j));
                cell += buf;
            }
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    std::vector<bool> right(n_mv + 1, true);
    right[0] = false;

    std::string out = "bin grid: rga threshold " +
                      format_number(result.grid.rga_threshold) + ", " +
                      std::to_string(result.grid.boundaries.size()) +
                      " boundaries, change bound " +
                      format_fixed(max_relative_change(result.grid.rga_threshold), 2) + "%\n";
    out += "adjusted " + std::to_string(adjusted) + " cells (" + std::to_string(changed) +
           " changed, largest change " + format_fixed(max_change, 2) + "%)\n";
    out += layout_table(rows, right);
    out += "pairs rga-flagged " + std::to_string(result.before.rga_flagged_count()) + " -> " +
           std::to_string(result.after.rga_flagged_count()) + ", cn-flagged " +
           std::to_string(result.before.cn_flagged_count()) + " -> " +
           std::to_string(result.after.cn_flagged_count()) + ", collinear " +
           std::to_string(result.before.collinear.pairs.size()) + " -> " +
           std::to_string(result.after.collinear.pairs.size()) + "\n";
    for (std::size_t s = 0; s < result.before.higher.size() && s < result.after.higher.size();
         ++s) {
        const auto& b = result.before.higher[s];
        const auto& a = result.after.higher[s];
        out += std::to_string(b.k) + "x" + std::to_string(b.k) + " above cond " +
               format_number(result.before.thresholds.cn_higher_threshold) + ": " +
               std::to_string(b.flagged.size()) + " -> " + std::to_string(a.flagged.size()) +
               "\n";
    }
    return out;
}

// ------------------------------------------------------------ model diff

ModelDiff diff_models(const GainModel& left, const GainModel& right) {
    if (left.mvs.size() != right.mvs.size() || left.cvs.size() != right.cvs.size())
        throw std::invalid_argument("diff_models: models have different shapes");
    for (std::size_t j = 0; j < left.mvs.size(); ++j)
        if (left.mvs[j].name != right.mvs[j].name)
            throw std::invalid_argument("diff_models: MV names differ at column " +
                                        std::to_string(j));
    for (std::size_t i = 0; i < left.cvs.size(); ++i)
        if (left.cvs[i].name != right.cvs[i].name)
            throw std::invalid_argument("diff_models: CV names differ at row " +
                                        std::to_string(i));

    ModelDiff diff;
    diff.total_cells = left.cvs.size() * left.mvs.size();
    for (std::size_t i = 0; i < left.cvs.size(); ++i)
        for (std::size_t j = 0; j < left.mvs.size(); ++j) {
            const double a = left.gains(i, j);
            const double b = right.gains(i, j);
            // round-trips through scaling leave ~1 ulp of noise; ignore it
            if (std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b))) continue;
            const double pct = a == 0.0 ? std::numeric_limits<double>::infinity()
                                        : (b - a) / a * 100.0;
            diff.cells.push_back({i, j, a, b, pct});
        }
    return diff;
}

std::string serialize_report(const ModelDiff& diff,
                             std::span<const std::string> mv_names,
                             std::span<const std::string> cv_names, Format format) {
    if (format == Format::csv) {
        std::string out = "cv,mv,left,right,change_pct\n";
        for (const auto& c : diff.cells)
            out += cv_names[c.cv] + "," + mv_names[c.mv] + "," + format_number(c.left) + "," +
                   format_number(c.right) + "," + format_number(c.change_pct) + "\n";
        return out;
    }
    if (format == Format::json) {
        ordered_json doc;
        doc["cells"] = ordered_json::array();
        for (const auto& c : diff.cells)
            doc["cells"].push_back({{"cv", cv_names[c.cv]},
                                    {"mv", mv_names[c.mv]},
                                    {"left", c.left},
                                    {"right", c.right},
                                    {"change_pct", json_number(c.change_pct)}});
        doc["differing"] = diff.cells.size();
        doc["total"] = diff.total_cells;
        return doc.dump(2) + "\n";
    }
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"CV", "MV", "left", "right", "change"});
    for (const auto& c : diff.cells) {
        std::string pct = std::isfinite(c.change_pct)
                              ? format_fixed(c.change_pct, 2) + "%"
                              : "new";
        rows.push_back({cv_names[c.cv], mv_names[c.mv], format_number(c.left),
                        format_number(c.right), pct});
    }
    std::string out = layout_table(rows, {false, false, true, true, true});
    out += std::to_string(diff.cells.size()) + " of " + std::to_string(diff.total_cells) +
           " cells differ\n";
    return out;
}

}  // namespace gaincond
