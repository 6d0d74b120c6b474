#include "trial_io.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "binary_io.hpp"
#include "error.hpp"

namespace fz {

namespace {
constexpr char kTrialMagic[] = "FRZNET01";
constexpr std::uint32_t kTrialVersion = 1;
} // namespace

void save_trialset(const TrialSet& set, const std::string& path) {
    set.validate();
    if (set.trials.empty()) throw DomainError("save_trialset: refusing to write an empty set");
    if (set.n_classes() >= 65536) throw DomainError("save_trialset: too many classes for u16");

    ByteWriter w;
    w.bytes(kTrialMagic, 8);
    w.u32(kTrialVersion);
    w.u32(static_cast<std::uint32_t>(set.trials.size()));
    w.u32(static_cast<std::uint32_t>(set.channel_count));
    w.u32(static_cast<std::uint32_t>(set.sample_count()));
    w.f64(set.fs);
    w.u32(static_cast<std::uint32_t>(set.n_classes()));
    for (const Trial& t : set.trials) {
        for (std::size_t i = 0; i < t.data.size(); ++i) w.f64(t.data.data()[i]);
    }
    for (const Trial& t : set.trials) w.u16(static_cast<std::uint16_t>(t.label));
    write_file_atomic(path, w.buffer());
}

TrialSet load_trialset(const std::string& path) {
    const std::vector<char> bytes = read_file_bytes(path);
    ByteReader r(bytes, path);
    r.expect_magic(kTrialMagic);
    const std::uint32_t version = r.u32();
    if (version != kTrialVersion) {
        throw FormatError(path + ": unsupported trial file version " + std::to_string(version));
    }
    const std::uint32_t n_trials = r.u32();
    const std::uint32_t n_channels = r.u32();
    const std::uint32_t n_samples = r.u32();
    const double fs = r.f64();
    const std::uint32_t n_classes = r.u32();
    if (n_trials == 0 || n_channels == 0 || n_samples == 0 || n_classes == 0) {
        throw FormatError(path + ": header declares a zero dimension");
    }
    const std::size_t payload = static_cast<std::size_t>(n_trials) * n_channels * n_samples * 8;
    const std::size_t expected = payload + static_cast<std::size_t>(n_trials) * 2;
    if (r.remaining() != expected) {
        throw FormatError(path + ": header declares " + std::to_string(expected) +
                          " payload bytes but file has " + std::to_string(r.remaining()) +
                          " after byte offset " + std::to_string(r.offset()));
    }

    TrialSet set;
    set.fs = fs;
    set.channel_count = n_channels;
    set.class_names = default_class_names(n_classes);
    set.trials.resize(n_trials);
    for (std::uint32_t t = 0; t < n_trials; ++t) {
        Matrix data(n_channels, n_samples);
        for (std::size_t i = 0; i < data.size(); ++i) data.data()[i] = r.f64();
        set.trials[t].data = std::move(data);
    }
    for (std::uint32_t t = 0; t < n_trials; ++t) {
        set.trials[t].label = static_cast<int>(r.u16());
    }
    r.expect_end();
    set.validate();
    return set;
}

TrialSet import_csv_trials(const std::string& data_path, const std::string& labels_path,
                           std::size_t n_channels, double fs) {
    if (n_channels == 0) throw DomainError("import_csv_trials: n_channels must be >= 1");

    std::ifstream data_in(data_path);
    if (!data_in) throw IoError("cannot open '" + data_path + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_cells = 0;
    while (std::getline(data_in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> cells;
        std::size_t col = 1;
        const char* p = line.data();
        const char* end = p + line.size();
        while (true) {
            const char* comma = p;
            while (comma != end && *comma != ',') ++comma;
            double v = 0.0;
            // Trim surrounding spaces before parsing.
            const char* b = p;
            const char* e = comma;
            while (b != e && (*b == ' ' || *b == '\t')) ++b;
            while (e != b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
            const auto [ptr, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || ptr != e || b == e) {
                throw FormatError(data_path + ": non-numeric cell at line " +
                                  std::to_string(line_no) + ", column " + std::to_string(col));
            }
            cells.push_back(v);
            if (comma == end) break;
            p = comma + 1;
            ++col;
        }
        if (expected_cells == 0) {
            expected_cells = cells.size();
            if (expected_cells % n_channels != 0) {
                throw FormatError(data_path + ": line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) +
                                  " cells, not divisible by n_channels=" +
                                  std::to_string(n_channels));
            }
        } else if (cells.size() != expected_cells) {
            throw FormatError(data_path + ": ragged row at line " + std::to_string(line_no) +
                              " (" + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(expected_cells) + ")");
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw FormatError(data_path + ": no data rows");

    std::ifstream labels_in(labels_path);
    if (!labels_in) throw IoError("cannot open '" + labels_path + "'");
    std::vector<int> labels;
    line_no = 0;
    while (std::getline(labels_in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        int v = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc() || ptr != line.data() + line.size() || v < 0) {
            throw FormatError(labels_path + ": invalid label at line " + std::to_string(line_no));
        }
        labels.push_back(v);
    }
    if (labels.size() != rows.size()) {
        throw FormatError("trial/label count mismatch: " + data_path + " has " +
                          std::to_string(rows.size()) + " trials but " + labels_path + " has " +
                          std::to_string(labels.size()) + " labels");
    }

    int max_label = 0;
    for (int l : labels) max_label = std::max(max_label, l);

    TrialSet set;
    set.fs = fs;
    set.channel_count = n_channels;
    set.class_names = default_class_names(static_cast<std::size_t>(max_label) + 1);
    const std::size_t samples = expected_cells / n_channels;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        Trial trial;
        trial.label = labels[t];
        trial.data = Matrix(n_channels, samples);
        for (std::size_t i = 0; i < expected_cells; ++i) trial.data.data()[i] = rows[t][i];
        set.trials.push_back(std::move(trial));
    }
    set.validate();
    return set;
}

} // namespace fz
