#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <doctest.h>

#include "binary_io.hpp"
#include "error.hpp"
#include "synth.hpp"
#include "testutil.hpp"
#include "trial_io.hpp"

using namespace fz;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("fztest_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

bool sets_equal(const TrialSet& a, const TrialSet& b) {
    if (a.trials.size() != b.trials.size() || a.fs != b.fs ||
        a.channel_count != b.channel_count || a.n_classes() != b.n_classes()) {
        return false;
    }
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        if (a.trials[i].label != b.trials[i].label) return false;
        if (!(a.trials[i].data == b.trials[i].data)) return false;
    }
    return true;
}

SynthConfig small_synth() {
    SynthConfig cfg;
    cfg.n_classes = 3;
    cfg.n_channels = 4;
    cfg.trial_seconds = 1.0;
    cfg.fs = 128.0;
    cfg.trials_per_class_train = 6;
    cfg.trials_per_class_test = 4;
    cfg.snr_db = 6.0;
    cfg.seed = 77;
    return cfg;
}

} // namespace

// ---------------------------------------------------------------------------
// Synthetic generation
// ---------------------------------------------------------------------------

TEST_CASE("same config generates bit-identical datasets") {
    auto [train_a, test_a] = generate_synthetic(small_synth());
    auto [train_b, test_b] = generate_synthetic(small_synth());
    CHECK(sets_equal(train_a, train_b));
    CHECK(sets_equal(test_a, test_b));
}

TEST_CASE("class counts are exactly trials_per_class in both splits") {
    auto [train, test] = generate_synthetic(small_synth());
    std::vector<int> train_counts(3, 0);
    std::vector<int> test_counts(3, 0);
    for (const Trial& t : train.trials) ++train_counts[static_cast<std::size_t>(t.label)];
    for (const Trial& t : test.trials) ++test_counts[static_cast<std::size_t>(t.label)];
    for (int c : train_counts) CHECK(c == 6);
    for (int c : test_counts) CHECK(c == 4);
}

TEST_CASE("changing the test split size never alters the training bytes") {
    SynthConfig a = small_synth();
    SynthConfig b = small_synth();
    b.trials_per_class_test = 9;
    auto [train_a, test_a] = generate_synthetic(a);
    auto [train_b, test_b] = generate_synthetic(b);
    CHECK(sets_equal(train_a, train_b));
    CHECK(test_a.trials.size() != test_b.trials.size());
}

TEST_CASE("nyquist violation is a config error") {
    SynthConfig cfg = small_synth();
    cfg.fs = 30.0; // class 2 sits at 14 Hz, nyquist is 15 -> ok; class 3 would not be
    cfg.n_classes = 4; // top frequency 17 Hz >= 15
    CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
}

TEST_CASE("dominant frequency per trial equals the class frequency at high snr") {
    // Goertzel-style periodogram oracle on the class's principal channel.
    SynthConfig cfg;
    cfg.n_classes = 4;
    cfg.n_channels = 6;
    cfg.trial_seconds = 4.0;
    cfg.fs = 250.0;
    cfg.trials_per_class_train = 8;
    cfg.trials_per_class_test = 2;
    cfg.snr_db = 60.0;
    cfg.seed = 11;
    auto [train, test] = generate_synthetic(cfg);

    // Principal channel: the strongest absolute response per class, taken
    // from the realized trial itself (the envelope scales all channels alike).
    const std::size_t n_samples = train.sample_count();
    std::size_t hits = 0;
    for (const Trial& t : train.trials) {
        std::size_t principal = 0;
        double best_power = -1.0;
        for (std::size_t ch = 0; ch < cfg.n_channels; ++ch) {
            double p = 0.0;
            for (std::size_t s = 0; s < n_samples; ++s) p += t.data(ch, s) * t.data(ch, s);
            if (p > best_power) {
                best_power = p;
                principal = ch;
            }
        }
        // Periodogram over 0.25 Hz bins up to 40 Hz.
        double best_mag = -1.0;
        double best_freq = 0.0;
        for (std::size_t bin = 1; bin <= 160; ++bin) {
            const double f = 0.25 * static_cast<double>(bin);
            double re = 0.0;
            double im = 0.0;
            for (std::size_t s = 0; s < n_samples; ++s) {
                const double ang = 2.0 * M_PI * f * static_cast<double>(s) / cfg.fs;
                re += t.data(principal, s) * std::cos(ang);
                im -= t.data(principal, s) * std::sin(ang);
            }
            const double mag = re * re + im * im;
            if (mag > best_mag) {
                best_mag = mag;
                best_freq = f;
            }
        }
        const double f_k = cfg.class_frequency(static_cast<std::size_t>(t.label));
        if (best_freq == doctest::Approx(f_k).epsilon(1e-9)) ++hits;
    }
    CHECK(hits == train.trials.size()); // >= 99% required; expect 100% here
}

TEST_CASE("snr scaling is exact per trial") {
    SynthConfig clean_cfg = small_synth();
    clean_cfg.snr_db = 300.0; // effectively noiseless reference
    SynthConfig noisy_cfg = small_synth();
    noisy_cfg.snr_db = -6.0;
    auto [clean, ct] = generate_synthetic(clean_cfg);
    auto [noisy, nt] = generate_synthetic(noisy_cfg);
    for (std::size_t i = 0; i < clean.trials.size(); ++i) {
        double sig = 0.0;
        double noise = 0.0;
        for (std::size_t j = 0; j < clean.trials[i].data.size(); ++j) {
            const double s = clean.trials[i].data.data()[j];
            const double n = noisy.trials[i].data.data()[j] - s;
            sig += s * s;
            noise += n * n;
        }
        const double snr_db = 10.0 * std::log10(sig / noise);
        CHECK(snr_db == doctest::Approx(-6.0).epsilon(1e-6));
    }
}

// ---------------------------------------------------------------------------
// .frz container
// ---------------------------------------------------------------------------

TEST_CASE("trial file round trip is bit-exact") {
    TempDir dir;
    auto [train, test] = generate_synthetic(small_synth());
    const std::string path = dir.file("set.frz");
    save_trialset(train, path);
    TrialSet loaded = load_trialset(path);
    CHECK(sets_equal(train, loaded));

    // Byte-level determinism of the container itself.
    const std::string path2 = dir.file("set2.frz");
    save_trialset(loaded, path2);
    CHECK(read_file_bytes(path) == read_file_bytes(path2));
}

TEST_CASE("corrupted magic is a format error with no partial value") {
    TempDir dir;
    auto [train, test] = generate_synthetic(small_synth());
    const std::string path = dir.file("bad.frz");
    save_trialset(train, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXXXXXX", 8);
    }
    CHECK_THROWS_AS(load_trialset(path), FormatError);
}

TEST_CASE("header-declared size larger than payload is a truncation error") {
    TempDir dir;
    auto [train, test] = generate_synthetic(small_synth());
    const std::string path = dir.file("trunc.frz");
    save_trialset(train, path);
    // Bump n_trials in the header (offset 12, little-endian u32).
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(12);
        const std::uint32_t huge = 10000;
        char bytes[4];
        for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((huge >> (8 * i)) & 0xff);
        f.write(bytes, 4);
    }
    try {
        load_trialset(path);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
}

TEST_CASE("truncated file reports the byte offset") {
    TempDir dir;
    auto [train, test] = generate_synthetic(small_synth());
    const std::string path = dir.file("cut.frz");
    save_trialset(train, path);
    const auto bytes = read_file_bytes(path);
    std::vector<char> cut(bytes.begin(), bytes.begin() + 20);
    std::ofstream(path, std::ios::binary).write(cut.data(), static_cast<std::streamsize>(cut.size()));
    CHECK_THROWS_AS(load_trialset(path), FormatError);
}

// ---------------------------------------------------------------------------
// CSV import
// ---------------------------------------------------------------------------

TEST_CASE("csv import round trips through the binary container") {
    TempDir dir;
    const std::string data_path = dir.file("trials.csv");
    const std::string labels_path = dir.file("labels.csv");
    {
        std::ofstream d(data_path);
        d << "1.0,2.0,3.0,4.0,5.0,6.0\n"; // 2 channels x 3 samples per trial
        d << "7.0,8.0,9.0,10.5,-11.25,12.0\n";
        std::ofstream l(labels_path);
        l << "0\n1\n";
    }
    TrialSet set = import_csv_trials(data_path, labels_path, 2, 100.0);
    REQUIRE(set.trials.size() == 2);
    CHECK(set.channel_count == 2);
    CHECK(set.sample_count() == 3);
    CHECK(set.trials[0].data(0, 0) == 1.0);
    CHECK(set.trials[0].data(1, 2) == 6.0);
    CHECK(set.trials[1].label == 1);

    const std::string bin = dir.file("round.frz");
    save_trialset(set, bin);
    CHECK(sets_equal(set, load_trialset(bin)));
}

TEST_CASE("label count mismatch names both counts") {
    TempDir dir;
    const std::string data_path = dir.file("trials.csv");
    const std::string labels_path = dir.file("labels.csv");
    {
        std::ofstream d(data_path);
        d << "1,2\n3,4\n";
        std::ofstream l(labels_path);
        l << "0\n";
    }
    try {
        import_csv_trials(data_path, labels_path, 1, 10.0);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2 trials") != std::string::npos);
        CHECK(msg.find("1 labels") != std::string::npos);
    }
}

TEST_CASE("non-numeric cell reports line and column") {
    TempDir dir;
    const std::string data_path = dir.file("trials.csv");
    const std::string labels_path = dir.file("labels.csv");
    {
        std::ofstream d(data_path);
        d << "1,2,3\n4,oops,6\n";
        std::ofstream l(labels_path);
        l << "0\n0\n";
    }
    try {
        import_csv_trials(data_path, labels_path, 1, 10.0);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }
}

TEST_CASE("ragged rows report the line number") {
    TempDir dir;
    const std::string data_path = dir.file("trials.csv");
    const std::string labels_path = dir.file("labels.csv");
    {
        std::ofstream d(data_path);
        d << "1,2,3\n4,5\n";
        std::ofstream l(labels_path);
        l << "0\n0\n";
    }
    try {
        import_csv_trials(data_path, labels_path, 1, 10.0);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}
