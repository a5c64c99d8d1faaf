#pragma once

// Labeled velocity datasets: partition by encoding level, prefix-uniqueness
// validation for online expansion, a synthetic reach-to-grasp generator and
// the line-delimited dataset file format.
//
// File format, one sample per line, comma separated:
//
//     id,label,dt,px,py,pz,v(1)x,v(1)y,v(1)z,...,v(L)x,v(L)y,v(L)z
//
// where L is the effective length (only measured samples are stored; the
// signal is zero-padded to t_max on load). Blank lines and lines starting
// with '#' are ignored.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kinenc/error.hpp"
#include "kinenc/random.hpp"
#include "kinenc/signals.hpp"
#include "kinenc/text_io.hpp"

namespace kinenc {

struct LabeledSample {
    std::string id;
    MotionSignal velocity;                 ///< mm/s
    std::vector<double> initial_position;  ///< mm, one entry per degree of freedom
    int encoding_level = 0;                ///< ground-truth label, 0 or 1

    int effective_length() const { return velocity.effective_length(); }
    MotionSignal positions() const { return integrate(velocity, initial_position); }

    bool operator==(const LabeledSample&) const = default;
};

class PartitionedDataset {
public:
    PartitionedDataset() = default;
    PartitionedDataset(std::vector<LabeledSample> all, std::vector<std::size_t> encoded,
                       std::vector<std::size_t> not_encoded, int e_des)
        : all_(std::move(all)), encoded_(std::move(encoded)), not_encoded_(std::move(not_encoded)), e_des_(e_des) {}

    const std::vector<LabeledSample>& all() const { return all_; }
    /// Indices into all() of samples whose level equals e_des.
    const std::vector<std::size_t>& encoded() const { return encoded_; }
    const std::vector<std::size_t>& not_encoded() const { return not_encoded_; }
    int e_des() const { return e_des_; }

    const LabeledSample& sample(std::size_t i) const { return all_[i]; }
    const LabeledSample& encoded_sample(std::size_t j) const { return all_[encoded_[j]]; }
    const LabeledSample& not_encoded_sample(std::size_t i) const { return all_[not_encoded_[i]]; }

    std::vector<const MotionSignal*> encoded_signals() const { return signals_of(encoded_); }
    std::vector<const MotionSignal*> not_encoded_signals() const { return signals_of(not_encoded_); }

private:
    std::vector<const MotionSignal*> signals_of(const std::vector<std::size_t>& idx) const {
        std::vector<const MotionSignal*> out;
        out.reserve(idx.size());
        for (auto i : idx) out.push_back(&all_[i].velocity);
        return out;
    }

    std::vector<LabeledSample> all_;
    std::vector<std::size_t> encoded_;
    std::vector<std::size_t> not_encoded_;
    int e_des_ = 1;
};

inline PartitionedDataset partition(std::vector<LabeledSample> samples, int e_des) {
    if (e_des != 0 && e_des != 1) throw DomainError("e_des must be 0 or 1");
    if (samples.empty()) throw TrivialPartitionError("cannot partition an empty dataset");
    std::vector<std::size_t> enc, ne;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const int level = samples[i].encoding_level;
        if (level != 0 && level != 1) throw DomainError("sample '" + samples[i].id + "' has an invalid encoding level");
        (level == e_des ? enc : ne).push_back(i);
    }
    if (enc.empty() || ne.empty())
        throw TrivialPartitionError("partition is trivial: " + std::to_string(enc.size()) + " encoded, " +
                                    std::to_string(ne.size()) + " not encoded");
    return PartitionedDataset(std::move(samples), std::move(enc), std::move(ne), e_des);
}

// ---------------------------------------------------------------------------
// Prefix uniqueness among the not-encoded samples (required by expansion)

inline constexpr double kPrefixQuantum = 1e-6;  // mm/s

struct PrefixCollision {
    std::size_t first;   ///< index into all()
    std::size_t second;  ///< index into all()
};

/// Empty result means the t0-prefixes of the not-encoded samples are pairwise
/// distinct after quantization.
inline std::vector<PrefixCollision> validate_prefix_uniqueness(const PartitionedDataset& part, int t0) {
    if (t0 < 1) throw DomainError("validate_prefix_uniqueness: t0 must be >= 1");
    std::map<std::vector<long long>, std::vector<std::size_t>> groups;
    for (auto idx : part.not_encoded()) {
        const auto& v = part.sample(idx).velocity;
        const int tau = std::min(t0, v.length());
        auto h = v.head(tau);
        std::vector<long long> key(h.size());
        std::transform(h.begin(), h.end(), key.begin(), [](double x) { return std::llround(x / kPrefixQuantum); });
        groups[std::move(key)].push_back(idx);
    }
    std::vector<PrefixCollision> out;
    for (const auto& [key, members] : groups)
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) out.push_back({members[a], members[b]});
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::pair(x.first, x.second) < std::pair(y.first, y.second);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic reach-to-grasp generator

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double draw(Rng& rng) const { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && lo <= hi; }
};

struct SynthConfig {
    int n_encoded = 197;
    int n_not_encoded = 261;
    SignalConfig signal{};
    Range amplitude{250.0, 350.0};    ///< mm
    Range duration{0.7, 1.0};         ///< s, not-encoded reach
    Range onset{0.21, 0.35};          ///< s at rest before movement onset
    double rest_tail = 0.10;          ///< s recorded after the movement stops
    double azimuth_spread = 0.5;      ///< rad, half-width around +x
    double elevation_spread = 0.15;   ///< rad
    Range lift{20.0, 40.0};           ///< mm, vertical excursion during the reach
    double peak_speed_scale = 0.7;    ///< encoded / not-encoded peak speed
    double duration_scale = 1.3;      ///< encoded / not-encoded duration
    int hesitation_min = 1;
    int hesitation_max = 2;
    double hesitation_depth = 0.3;    ///< fractional speed dip
    double hesitation_width = 0.08;   ///< dip width, fraction of the reach duration
    double corrective_duration = 0.3; ///< s, submovement that recovers lost distance
    double jitter_std = 0.5;          ///< mm/s, additive sensor noise
    /// Per-sample expression strength u in [0,1]: speed, duration and dip
    /// depth interpolate between the neutral reach (u = 0) and the full
    /// scales above (u = 1). Overlapping ranges make the classes overlap.
    Range encoded_intensity{0.4, 1.0};
    Range not_encoded_intensity{0.0, 0.15};
    std::uint64_t seed = 1;

    void validate() const {
        signal.validate();
        if (n_encoded < 1 || n_not_encoded < 1) throw ConfigError("synthetic: class counts must be >= 1");
        for (const Range* r : {&amplitude, &duration, &onset, &lift, &encoded_intensity, &not_encoded_intensity})
            if (!r->valid() || r->lo < 0.0) throw ConfigError("synthetic: degenerate or negative range");
        if (amplitude.lo <= 0.0 || duration.lo <= 0.0) throw ConfigError("synthetic: amplitude and duration must be positive");
        if (peak_speed_scale <= 0.0 || duration_scale <= 0.0 || hesitation_width <= 0.0 ||
            corrective_duration <= 0.0 || jitter_std < 0.0 || rest_tail < 0.0)
            throw ConfigError("synthetic: scales must be positive");
        if (hesitation_depth < 0.0 || hesitation_depth >= 1.0) throw ConfigError("synthetic: hesitation depth must be in [0,1)");
        if (hesitation_min < 0 || hesitation_max < hesitation_min) throw ConfigError("synthetic: bad hesitation count range");
        if (encoded_intensity.hi > 1.0 || not_encoded_intensity.hi > 1.0) throw ConfigError("synthetic: intensity must be in [0,1]");
        if (signal.rho != 3) throw ConfigError("synthetic: generator produces 3-D wrist velocities");
        const double longest = onset.hi +
                               std::max(duration.hi * duration_scale, 0.85 * duration.hi * duration_scale + corrective_duration) +
                               rest_tail;
        if (longest > signal.dt * signal.t_max)
            throw ConfigError("synthetic: longest movement does not fit in t_max samples");
    }
};

inline SynthConfig synth_preset(const std::string& name) {
    SynthConfig c;
    if (name == "paper-scale") return c;
    if (name == "small") {
        c.n_encoded = 18;
        c.n_not_encoded = 22;
        return c;
    }
    throw ConfigError("unknown generator preset '" + name + "' (expected paper-scale or small)");
}

/// Speed of a minimum-jerk point-to-point movement of amplitude `a` and
/// duration `d`, at time `t` after onset. Zero outside [0, d].
inline double min_jerk_speed(double a, double d, double t) {
    if (t <= 0.0 || t >= d) return 0.0;
    const double s = t / d;
    return a / d * 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

namespace detail {

inline LabeledSample synth_one(const SynthConfig& cfg, int level, const std::string& id, Rng& rng) {
    const auto& sc = cfg.signal;
    const double dt = sc.dt;
    const double amp = cfg.amplitude.draw(rng);
    const double dur_base = cfg.duration.draw(rng);
    const double onset = cfg.onset.draw(rng);
    const double az = std::uniform_real_distribution<double>(-cfg.azimuth_spread, cfg.azimuth_spread)(rng);
    const double el = std::uniform_real_distribution<double>(-cfg.elevation_spread, cfg.elevation_spread)(rng);
    const double lift = cfg.lift.draw(rng);
    std::normal_distribution<double> noise(0.0, 1.0);

    const double dir[3] = {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};

    const double u = (level == 1 ? cfg.encoded_intensity : cfg.not_encoded_intensity).draw(rng);
    const double dur_factor = 1.0 + (cfg.duration_scale - 1.0) * u;
    const double peak_factor = 1.0 + (cfg.peak_speed_scale - 1.0) * u;
    const double depth = cfg.hesitation_depth * u;
    const double dur = dur_base * dur_factor;
    const double main_amp = amp * peak_factor * dur_factor;
    const bool hesitant = u > 0.0 && main_amp < amp;

    std::vector<double> centers;
    if (hesitant) {
        const int n = std::uniform_int_distribution<int>(cfg.hesitation_min, cfg.hesitation_max)(rng);
        for (int i = 0; i < n; ++i) centers.push_back(std::uniform_real_distribution<double>(0.35, 0.8)(rng));
    }

    auto main_speed = [&](double t) {
        double s = min_jerk_speed(main_amp, dur, t);
        for (double c : centers) {
            const double z = (t / dur - c) / cfg.hesitation_width;
            s *= 1.0 - depth * std::exp(-0.5 * z * z);
        }
        return s;
    };

    // Distance not covered by the main (dipped) reach is recovered by a late
    // corrective submovement, so both classes travel the same amplitude.
    double corr_amp = 0.0, corr_start = 0.0;
    double total = dur;
    if (hesitant) {
        double covered = 0.0;
        const int steps = static_cast<int>(std::ceil(dur / dt));
        for (int i = 0; i < steps; ++i) covered += main_speed(i * dt) * dt;
        corr_amp = std::max(0.0, amp - covered);
        corr_start = 0.85 * dur;
        total = std::max(dur, corr_start + cfg.corrective_duration);
    }

    const int eff = std::min(sc.t_max, static_cast<int>(std::ceil((onset + total + cfg.rest_tail) / dt)));
    std::vector<double> flat(static_cast<std::size_t>(eff * 3));
    for (int i = 0; i < eff; ++i) {
        const double t = i * dt - onset;
        double speed = main_speed(t);
        if (hesitant) speed += min_jerk_speed(corr_amp, cfg.corrective_duration, t - corr_start);
        const double vz_lift = (t > 0.0 && t < dur) ? lift * std::numbers::pi / dur * std::sin(2.0 * std::numbers::pi * t / dur) : 0.0;
        for (int k = 0; k < 3; ++k) {
            double v = speed * dir[k] + (k == 2 ? vz_lift : 0.0);
            v += cfg.jitter_std * noise(rng);
            flat[static_cast<std::size_t>(i * 3 + k)] = v;
        }
    }

    LabeledSample s;
    s.id = id;
    s.encoding_level = level;
    s.velocity = MotionSignal(sc, std::move(flat), eff);
    std::uniform_real_distribution<double> start(-50.0, 50.0);
    s.initial_position = {start(rng), start(rng), start(rng)};
    return s;
}

} // namespace detail

/// Reach-to-grasp-like wrist velocities. Encoded samples (label 1) are
/// slower, longer and carry hesitation dips plus a corrective submovement.
/// Deterministic given cfg.seed.
inline std::vector<LabeledSample> generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    std::vector<int> labels(static_cast<std::size_t>(cfg.n_encoded), 1);
    labels.resize(static_cast<std::size_t>(cfg.n_encoded + cfg.n_not_encoded), 0);
    std::shuffle(labels.begin(), labels.end(), rng);

    std::vector<LabeledSample> out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "s%04zu", i);
        out.push_back(detail::synth_one(cfg, labels[i], id, rng));
    }
    return out;
}

// ---------------------------------------------------------------------------
// File I/O

inline std::string serialize(const std::vector<LabeledSample>& samples) {
    std::string out;
    for (const auto& s : samples) {
        out += s.id;
        out += ',';
        out += std::to_string(s.encoding_level);
        out += ',';
        out += text::format_real(s.velocity.config().dt);
        for (double p : s.initial_position) {
            out += ',';
            out += text::format_real(p);
        }
        for (double v : s.velocity.head(s.effective_length())) {
            out += ',';
            out += text::format_real(v);
        }
        out += '\n';
    }
    return out;
}

/// Parses dataset text. `cfg` supplies rho, t_max and delta_vel; dt is read per record.
inline std::vector<LabeledSample> parse_dataset(const std::string& content, const SignalConfig& cfg = {}) {
    cfg.validate();
    std::vector<LabeledSample> out;
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    const auto rho = static_cast<std::size_t>(cfg.rho);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = text::split(line, ',');
        if (f.size() < 3 + rho) throw ParseError("too few fields", lineno, "record");

        LabeledSample s;
        s.id = std::string(f[0]);
        if (s.id.empty()) throw ParseError("empty id", lineno, "id");

        long long label = 0;
        if (!text::parse_int(f[1], label) || (label != 0 && label != 1))
            throw ParseError("label must be 0 or 1", lineno, "label");
        s.encoding_level = static_cast<int>(label);

        SignalConfig sc = cfg;
        if (!text::parse_real(f[2], sc.dt) || !std::isfinite(sc.dt) || sc.dt <= 0.0)
            throw ParseError("dt must be a positive finite real", lineno, "dt");

        for (std::size_t k = 0; k < rho; ++k) {
            double p = 0.0;
            const std::string field = "initial_position[" + std::to_string(k) + "]";
            if (!text::parse_real(f[3 + k], p) || !std::isfinite(p)) throw ParseError("not a finite real", lineno, field);
            s.initial_position.push_back(p);
        }

        const std::size_t n_vals = f.size() - 3 - rho;
        if (n_vals == 0 || n_vals % rho != 0)
            throw ParseError("sample count is not a positive multiple of rho", lineno, "samples");
        if (n_vals / rho > static_cast<std::size_t>(cfg.t_max))
            throw ParseError("more samples than t_max", lineno, "samples");
        std::vector<double> flat(n_vals);
        for (std::size_t i = 0; i < n_vals; ++i) {
            if (!text::parse_real(f[3 + rho + i], flat[i]) || !std::isfinite(flat[i]))
                throw ParseError("not a finite real", lineno, "samples[" + std::to_string(i) + "]");
        }
        s.velocity = MotionSignal(sc, std::move(flat));
        out.push_back(std::move(s));
    }
    return out;
}

inline void save(const std::vector<LabeledSample>& samples, const std::string& path) {
    text::write_file(path, serialize(samples));
}

inline std::vector<LabeledSample> load(const std::string& path, const SignalConfig& cfg = {}) {
    return parse_dataset(text::read_file(path), cfg);
}

} // namespace kinenc
