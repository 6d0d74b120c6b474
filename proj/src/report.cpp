#include "report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "binary_io.hpp"
#include "error.hpp"
#include "svg_chart.hpp"

namespace fz {

using nlohmann::json;

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

json mask_stats_json(const MetricsReport& report) {
    json arr = json::array();
    for (const MaskStat& s : report.mask_stats) {
        arr.push_back({{"layer", s.layer},
                       {"threshold_t", s.threshold_t},
                       {"mode", s.mode},
                       {"frozen_count", s.frozen_count},
                       {"size", s.size},
                       {"frozen_fraction", s.frozen_fraction}});
    }
    return arr;
}

std::vector<std::vector<double>> read_csv_columns(const std::string& path,
                                                  std::size_t expected_cols) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file");
    std::vector<std::vector<double>> cols(expected_cols);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t start = 0;
        for (std::size_t c = 0; c < expected_cols; ++c) {
            std::size_t stop = line.find(',', start);
            if (stop == std::string::npos) stop = line.size();
            double v = 0.0;
            const char* b = line.data() + start;
            const char* e = line.data() + stop;
            const auto [ptr, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || ptr != e) {
                // Non-numeric cells (failed sweep markers) become NaN.
                v = std::numeric_limits<double>::quiet_NaN();
            }
            cols[c].push_back(v);
            start = stop + 1;
        }
    }
    return cols;
}

} // namespace

std::string metrics_csv_text(const MetricsReport& report) {
    std::string out = "epoch,train_loss,test_accuracy\n";
    for (const EpochRecord& rec : report.per_epoch) {
        out += std::to_string(rec.epoch);
        out += ',';
        out += fmt9(rec.train_loss);
        out += ',';
        out += fmt9(rec.test_accuracy);
        out += '\n';
    }
    return out;
}

std::string summary_json_text(const MetricsReport& report) {
    json j;
    j["config_hash"] = report.config_hash;
    j["epochs"] = report.per_epoch.size();
    j["max_test_accuracy"] = {{"value", report.max_test_accuracy},
                              {"epoch", report.max_accuracy_epoch}};
    if (report.median_test_accuracy) {
        j["median_test_accuracy_window"] = *report.median_test_accuracy;
        j["median_window"] = {report.median_window_range->first,
                              report.median_window_range->second};
    } else {
        j["median_test_accuracy_window"] = nullptr;
        j["median_window"] = nullptr;
    }
    j["smoothing"] = {{"kind", "trailing"}, {"width", report.smooth_width}};
    j["mask_stats"] = mask_stats_json(report);
    j["runtime_seconds"] = report.runtime_seconds;
    return j.dump(2) + "\n";
}

void emit_report(const MetricsReport& report, const std::string& out_dir) {
    ensure_dir(out_dir);
    write_file_atomic(out_dir + "/metrics.csv", metrics_csv_text(report));
    write_file_atomic(out_dir + "/summary.json", summary_json_text(report));

    SvgLineChart chart;
    chart.title = "Test accuracy";
    chart.x_label = "epoch";
    chart.y_label = "accuracy";
    SvgSeries s;
    s.name = "test accuracy";
    for (const EpochRecord& rec : report.per_epoch) {
        s.x.push_back(static_cast<double>(rec.epoch));
        s.y.push_back(rec.test_accuracy);
    }
    chart.series.push_back(std::move(s));
    write_file_atomic(out_dir + "/accuracy.svg", chart.render());
}

void emit_sweep(const SweepResult& sweep, const ExperimentConfig& cfg,
                const std::string& out_dir) {
    ensure_dir(out_dir);

    std::string csv = "threshold_t,max_test_accuracy,median_test_accuracy_window,status\n";
    json cells = json::array();
    SvgSeries max_series{"max accuracy", {}, {}};
    SvgSeries med_series{"median accuracy", {}, {}};
    bool any_median = false;
    for (const SweepCell& cell : sweep.cells) {
        csv += fmt9(cell.threshold_t);
        csv += ',';
        json jc;
        jc["threshold_t"] = cell.threshold_t;
        if (cell.ok) {
            csv += fmt9(cell.report.max_test_accuracy);
            csv += ',';
            csv += cell.report.median_test_accuracy ? fmt9(*cell.report.median_test_accuracy)
                                                    : std::string();
            csv += ",ok\n";
            jc["max_test_accuracy"] = cell.report.max_test_accuracy;
            if (cell.report.median_test_accuracy) {
                jc["median_test_accuracy_window"] = *cell.report.median_test_accuracy;
            } else {
                jc["median_test_accuracy_window"] = nullptr;
            }
            jc["config_hash"] = cell.report.config_hash;
            max_series.x.push_back(cell.threshold_t);
            max_series.y.push_back(cell.report.max_test_accuracy);
            if (cell.report.median_test_accuracy) {
                any_median = true;
                med_series.x.push_back(cell.threshold_t);
                med_series.y.push_back(*cell.report.median_test_accuracy);
            }
        } else {
            csv += ",,failed\n";
            jc["error"] = cell.error;
        }
        cells.push_back(jc);
    }
    write_file_atomic(out_dir + "/sweep.csv", csv);

    json j;
    j["config_hash"] = cfg.config_hash();
    j["cells"] = cells;
    write_file_atomic(out_dir + "/sweep.json", j.dump(2) + "\n");

    if (!max_series.x.empty()) {
        SvgLineChart chart;
        chart.title = "Accuracy vs freeze threshold";
        chart.x_label = "threshold t";
        chart.y_label = "accuracy";
        chart.series.push_back(std::move(max_series));
        if (any_median) chart.series.push_back(std::move(med_series));
        write_file_atomic(out_dir + "/sweep.svg", chart.render());
    }

    // Per-cell artifacts for drill-down.
    for (const SweepCell& cell : sweep.cells) {
        if (!cell.ok) continue;
        char name[32];
        std::snprintf(name, sizeof(name), "t_%.6g", cell.threshold_t);
        emit_report(cell.report, out_dir + "/" + name);
    }
}

void emit_compare(const CompareResult& cmp, const ExperimentConfig& cfg,
                  const std::string& out_dir) {
    ensure_dir(out_dir);

    std::string csv = "epoch,baseline_accuracy,frozen_accuracy\n";
    std::vector<double> base_acc;
    std::vector<double> frozen_acc;
    for (std::size_t i = 0; i < cmp.baseline.per_epoch.size(); ++i) {
        const EpochRecord& b = cmp.baseline.per_epoch[i];
        const EpochRecord& f = cmp.frozen.per_epoch[i];
        csv += std::to_string(b.epoch);
        csv += ',';
        csv += fmt9(b.test_accuracy);
        csv += ',';
        csv += fmt9(f.test_accuracy);
        csv += '\n';
        base_acc.push_back(b.test_accuracy);
        frozen_acc.push_back(f.test_accuracy);
    }
    write_file_atomic(out_dir + "/compare.csv", csv);

    const std::size_t width = cfg.metrics.smooth_width;
    const std::vector<double> base_smooth = smooth_curve(base_acc, width);
    const std::vector<double> frozen_smooth = smooth_curve(frozen_acc, width);

    SvgLineChart chart;
    chart.title = "Before/after weight freezing (smoothed, width " + std::to_string(width) + ")";
    chart.x_label = "epoch";
    chart.y_label = "test accuracy";
    SvgSeries bs{"baseline (dense)", {}, {}};
    SvgSeries fs{"weight freezing t=" + std::to_string(cmp.threshold_t).substr(0, 5), {}, {}};
    for (std::size_t i = 0; i < base_smooth.size(); ++i) {
        const double epoch = static_cast<double>(i + width); // window end epoch
        bs.x.push_back(epoch);
        bs.y.push_back(base_smooth[i]);
        fs.x.push_back(epoch);
        fs.y.push_back(frozen_smooth[i]);
    }
    chart.series.push_back(std::move(bs));
    chart.series.push_back(std::move(fs));
    write_file_atomic(out_dir + "/compare.svg", chart.render());

    json j;
    j["config_hash"] = cfg.config_hash();
    j["threshold_t"] = cmp.threshold_t;
    j["baseline"] = {{"max_test_accuracy", cmp.baseline.max_test_accuracy},
                     {"median_test_accuracy_window",
                      cmp.baseline.median_test_accuracy ? json(*cmp.baseline.median_test_accuracy)
                                                        : json(nullptr)}};
    j["frozen"] = {{"max_test_accuracy", cmp.frozen.max_test_accuracy},
                   {"median_test_accuracy_window",
                    cmp.frozen.median_test_accuracy ? json(*cmp.frozen.median_test_accuracy)
                                                    : json(nullptr)}};
    if (cmp.baseline.median_test_accuracy && cmp.frozen.median_test_accuracy) {
        j["median_difference"] =
            *cmp.frozen.median_test_accuracy - *cmp.baseline.median_test_accuracy;
    } else {
        j["median_difference"] = nullptr;
    }
    j["smoothing"] = {{"kind", "trailing"}, {"width", width}};
    write_file_atomic(out_dir + "/compare.json", j.dump(2) + "\n");
}

void rerender_report(const std::string& run_dir, bool quiet) {
    namespace fs = std::filesystem;
    bool found = false;

    if (fs::exists(run_dir + "/metrics.csv")) {
        found = true;
        auto cols = read_csv_columns(run_dir + "/metrics.csv", 3);
        SvgLineChart chart;
        chart.title = "Test accuracy";
        chart.x_label = "epoch";
        chart.y_label = "accuracy";
        chart.series.push_back({"test accuracy", cols[0], cols[2]});
        write_file_atomic(run_dir + "/accuracy.svg", chart.render());
        if (!quiet) std::cout << "rendered " << run_dir << "/accuracy.svg\n";
    }
    if (fs::exists(run_dir + "/sweep.csv")) {
        found = true;
        auto cols = read_csv_columns(run_dir + "/sweep.csv", 4);
        SvgLineChart chart;
        chart.title = "Accuracy vs freeze threshold";
        chart.x_label = "threshold t";
        chart.y_label = "accuracy";
        SvgSeries max_series{"max accuracy", {}, {}};
        SvgSeries med_series{"median accuracy", {}, {}};
        for (std::size_t i = 0; i < cols[0].size(); ++i) {
            if (std::isnan(cols[1][i])) continue;
            max_series.x.push_back(cols[0][i]);
            max_series.y.push_back(cols[1][i]);
            if (!std::isnan(cols[2][i])) {
                med_series.x.push_back(cols[0][i]);
                med_series.y.push_back(cols[2][i]);
            }
        }
        if (!max_series.x.empty()) {
            chart.series.push_back(std::move(max_series));
            if (!med_series.x.empty()) chart.series.push_back(std::move(med_series));
            write_file_atomic(run_dir + "/sweep.svg", chart.render());
            if (!quiet) std::cout << "rendered " << run_dir << "/sweep.svg\n";
        }
    }
    if (fs::exists(run_dir + "/compare.csv")) {
        found = true;
        std::size_t width = 20;
        if (fs::exists(run_dir + "/compare.json")) {
            std::ifstream in(run_dir + "/compare.json");
            try {
                json j;
                in >> j;
                width = j.at("smoothing").at("width").get<std::size_t>();
            } catch (const json::exception&) {
                // stick with the default width
            }
        }
        auto cols = read_csv_columns(run_dir + "/compare.csv", 3);
        if (cols[0].size() >= width) {
            const std::vector<double> base_smooth = smooth_curve(cols[1], width);
            const std::vector<double> frozen_smooth = smooth_curve(cols[2], width);
            SvgLineChart chart;
            chart.title =
                "Before/after weight freezing (smoothed, width " + std::to_string(width) + ")";
            chart.x_label = "epoch";
            chart.y_label = "test accuracy";
            SvgSeries bs{"baseline (dense)", {}, {}};
            SvgSeries fz_series{"weight freezing", {}, {}};
            for (std::size_t i = 0; i < base_smooth.size(); ++i) {
                bs.x.push_back(static_cast<double>(i + width));
                bs.y.push_back(base_smooth[i]);
                fz_series.x.push_back(static_cast<double>(i + width));
                fz_series.y.push_back(frozen_smooth[i]);
            }
            chart.series.push_back(std::move(bs));
            chart.series.push_back(std::move(fz_series));
            write_file_atomic(run_dir + "/compare.svg", chart.render());
            if (!quiet) std::cout << "rendered " << run_dir << "/compare.svg\n";
        }
    }
    if (!found) {
        throw IoError("no metrics.csv, sweep.csv or compare.csv under '" + run_dir + "'");
    }
}

} // namespace fz
