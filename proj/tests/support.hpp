#pragma once

// Generators and small fixtures shared by the test binaries.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "kinenc/pipeline.hpp"

namespace kinenc::testing {

inline SignalConfig small_config(int t_max = 40, int rho = 3) {
    SignalConfig c;
    c.t_max = t_max;
    c.rho = rho;
    return c;
}

/// Random velocity signal with a random effective length (at least `min_len`).
inline MotionSignal random_signal(Rng& rng, const SignalConfig& cfg, int min_len = 4, double scale = 100.0) {
    std::uniform_int_distribution<int> len(std::min(min_len, cfg.t_max), cfg.t_max);
    std::normal_distribution<double> n(0.0, scale);
    const int l = len(rng);
    std::vector<double> v(static_cast<std::size_t>(l * cfg.rho));
    for (auto& x : v) x = n(rng);
    return MotionSignal(cfg, std::move(v), l);
}

inline MotionSignal full_signal(Rng& rng, const SignalConfig& cfg, double scale = 100.0) {
    return random_signal(rng, cfg, cfg.t_max, scale);
}

inline std::vector<double> random_point(Rng& rng, int rho, double scale = 50.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> p(static_cast<std::size_t>(rho));
    for (auto& x : p) x = u(rng);
    return p;
}

/// Small synthetic dataset for fast unit tests.
inline std::vector<LabeledSample> small_dataset(std::uint64_t seed = 7, int n_enc = 12, int n_ne = 14) {
    auto cfg = synth_preset("small");
    cfg.n_encoded = n_enc;
    cfg.n_not_encoded = n_ne;
    cfg.seed = seed;
    return generate_synthetic(cfg);
}

inline TrainConfig fast_train_config() {
    TrainConfig tc;
    tc.epochs = 40;
    tc.hidden = 16;
    tc.patience = 0;
    tc.splits = 2;
    return tc;
}

/// Dataset, classifier and table built once per test binary.
struct Pipeline {
    PartitionedDataset part;
    EncoderModel model;
    BlendTable table;
};

inline const Pipeline& small_pipeline() {
    static const Pipeline p = [] {
        Pipeline q;
        q.part = partition(small_dataset(), 1);
        q.model = train(q.part, fast_train_config()).model;
        q.table = compute_table(q.part, BlendGrid(10), q.model);
        return q;
    }();
    return p;
}

/// Scratch directory removed on destruction.
struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/kinenc-test-XXXXXX";
        path = mkdtemp(tmpl);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return path + "/" + name; }
};

} // namespace kinenc::testing
