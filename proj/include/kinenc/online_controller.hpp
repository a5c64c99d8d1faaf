#pragma once

// Streaming alteration. The human velocity arrives one sample at a time; at
// T0 the reference is selected from the nearest not-encoded dataset sample,
// and at T0, T0 + dT, T0 + 2 dT, ... the blending coefficient is refreshed
// from the table entry of the dataset sample whose prefix is nearest to the
// measured prefix.
//
// Timing: the coefficient computed when sample T_i arrives is applied to
// samples T_i + 1 ... T_{i+1}. Samples up to T0 pass through unchanged (no
// reference exists yet); the recorded coefficient there is 0.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinenc/blend_solver.hpp"
#include "kinenc/classifier.hpp"
#include "kinenc/dataset.hpp"
#include "kinenc/error.hpp"
#include "kinenc/signals.hpp"
#include "kinenc/text_io.hpp"

namespace kinenc {

struct OnlineSchedule {
    int t0 = 20;       ///< warm-up samples before the first decision
    int delta_t = 10;  ///< samples between coefficient updates

    void validate(int t_max) const {
        if (t0 < 1) throw ConfigError("schedule: t0 must be >= 1");
        if (delta_t < 2) throw ConfigError("schedule: delta_t must be >= 2");
        if (t0 + delta_t > t_max) throw ConfigError("schedule: t0 + delta_t exceeds the signal duration");
    }

    /// Update instants T0, T1, ... (1-based sample counts) not exceeding t_max.
    std::vector<int> instants(int t_max) const {
        std::vector<int> out;
        for (int t = t0; t <= t_max; t += delta_t) out.push_back(t);
        return out;
    }

    bool is_instant(int t) const { return t >= t0 && (t - t0) % delta_t == 0; }
};

struct SessionOptions {
    std::optional<double> forced_coefficient;  ///< debug: use this value at every update
};

struct SessionResult {
    MotionSignal v_h;
    MotionSignal v_a;
    MotionSignal p_h;
    MotionSignal p_a;
    std::size_t reference = 0;            ///< index into part.encoded()
    std::vector<double> coefficient;      ///< c(t) per sample, 0 during warm-up
    std::vector<double> history;          ///< 0, then the value set at each update
    std::vector<std::size_t> neighbors;   ///< eta_i per update, index into part.not_encoded()
    bool inexact_match = false;           ///< some measured prefix was not a dataset prefix
    Decision decision;
    TerminalInstant terminal;             ///< of v_h
    double terminal_gap = 0.0;            ///< |p_h - p_a| at the terminal instant of v_h [mm]
};

class OnlineSession {
public:
    OnlineSession(const PartitionedDataset& part, const BlendTable& table, const EncoderModel& model,
                  OnlineSchedule schedule, std::vector<double> p_h_initial, SessionOptions options = {})
        : part_(&part), table_(&table), model_(&model), schedule_(schedule), options_(options),
          p0_(std::move(p_h_initial)) {
        const auto& cfg = part.sample(0).velocity.config();
        cfg_ = cfg;
        schedule_.validate(cfg.t_max);
        if (p0_.size() != static_cast<std::size_t>(cfg.rho)) throw ShapeError("session: initial position has wrong size");
        if (options_.forced_coefficient && !(*options_.forced_coefficient >= 0.0 && *options_.forced_coefficient <= 1.0))
            throw DomainError("session: forced coefficient must be in [0,1]");
        check_table(table, part, model);
        const auto collisions = validate_prefix_uniqueness(part, schedule_.t0);
        if (!collisions.empty()) {
            std::string msg = "session: not-encoded samples share " + std::to_string(schedule_.t0) + "-prefixes:";
            for (const auto& c : collisions) msg += " (" + part.sample(c.first).id + ", " + part.sample(c.second).id + ")";
            throw ConfigError(msg);
        }
        ne_ = part.not_encoded_signals();
        enc_ = part.encoded_signals();
        history_.push_back(0.0);
    }

    int received() const { return t_; }
    bool finished() const { return t_ >= cfg_.t_max; }
    double coefficient() const { return c_; }
    const std::vector<double>& history() const { return history_; }
    bool reference_selected() const { return reference_.has_value(); }
    std::size_t reference() const { return reference_.value(); }

    /// Squared-difference terms evaluated by projections so far; lets callers
    /// check the per-sample cost contract.
    std::size_t distance_terms() const { return distance_terms_; }

    /// Consumes v_h(t) and returns v_a(t).
    std::vector<double> push(std::span<const double> v_h_t) {
        if (finished()) throw ProtocolError("session: push after the last sample");
        if (v_h_t.size() != static_cast<std::size_t>(cfg_.rho)) throw ShapeError("session: sample has wrong size");
        for (double x : v_h_t)
            if (!std::isfinite(x)) throw InvalidSignalError("session: non-finite sample");
        ++t_;
        vh_.insert(vh_.end(), v_h_t.begin(), v_h_t.end());

        std::vector<double> out(v_h_t.begin(), v_h_t.end());
        if (t_ > schedule_.t0) {
            auto vr = enc_[*reference_]->sample(t_ - 1);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = c_ * v_h_t[k] + (1.0 - c_) * vr[k];
        }
        coefficient_.push_back(t_ > schedule_.t0 ? c_ : 0.0);
        va_.insert(va_.end(), out.begin(), out.end());

        if (schedule_.is_instant(t_)) update();
        return out;
    }

    /// Ends the stream. While the reference still has weight, remaining
    /// samples up to its length are produced with the human at rest so the
    /// altered motion completes.
    SessionResult finish() {
        const int received = t_;
        if (received == 0) throw ProtocolError("session: finish before any sample");
        const int until = reference_ && c_ < 1.0 ? std::max(received, enc_[*reference_]->effective_length()) : received;
        const std::vector<double> rest(static_cast<std::size_t>(cfg_.rho), 0.0);
        while (t_ < until) push(rest);

        SessionResult r;
        r.v_h = MotionSignal(cfg_, vh_, received);
        r.v_a = MotionSignal(cfg_, va_, std::max(t_, 1));
        r.p_h = integrate(r.v_h, p0_);
        r.p_a = integrate(r.v_a, p0_);
        r.reference = reference_.value_or(0);
        r.coefficient = coefficient_;
        r.coefficient.resize(static_cast<std::size_t>(cfg_.t_max), coefficient_.empty() ? 0.0 : coefficient_.back());
        r.history = history_;
        r.neighbors = neighbors_;
        r.inexact_match = inexact_;
        r.decision = r.v_a.effective_length() >= 4 ? classify(*model_, r.v_a) : Decision{};
        r.terminal = terminal_instant(r.v_h);
        r.terminal_gap = std::sqrt(squared_distance(r.p_h.sample(r.terminal.instant - 1), r.p_a.sample(r.terminal.instant - 1)));
        return r;
    }

private:
    void update() {
        SignalPrefix psi(cfg_.rho, vh_);
        const auto phi = project_restricted(psi, ne_);
        distance_terms_ += ne_.size() * vh_.size();
        if (phi.distance > 0.0) inexact_ = true;
        // phi is the restriction of a set member; expansion recovers it.
        const auto eta = expand(restrict(*ne_[phi.index], t_), ne_);
        neighbors_.push_back(eta);

        if (!reference_) {
            auto full = [](const MotionSignal* s) { return s->values(); };
            reference_ = nearest(ne_[eta]->values(), enc_, full).index;
            distance_terms_ += enc_.size() * static_cast<std::size_t>(cfg_.t_max * cfg_.rho);
        }
        c_ = options_.forced_coefficient ? *options_.forced_coefficient : table_->at(eta, *reference_);
        history_.push_back(c_);
    }

    const PartitionedDataset* part_;
    const BlendTable* table_;
    const EncoderModel* model_;
    OnlineSchedule schedule_;
    SessionOptions options_;
    SignalConfig cfg_{};
    std::vector<double> p0_;
    std::vector<const MotionSignal*> ne_, enc_;

    int t_ = 0;
    double c_ = 0.0;
    std::optional<std::size_t> reference_;
    std::vector<double> vh_, va_;
    std::vector<double> coefficient_;
    std::vector<double> history_;
    std::vector<std::size_t> neighbors_;
    bool inexact_ = false;
    std::size_t distance_terms_ = 0;
};

inline OnlineSession start_session(const PartitionedDataset& part, const BlendTable& table, const EncoderModel& model,
                                   const OnlineSchedule& schedule, std::vector<double> p_h_initial,
                                   SessionOptions options = {}) {
    return OnlineSession(part, table, model, schedule, std::move(p_h_initial), options);
}

/// Streams the measured part of `v_h` through a fresh session.
inline SessionResult run_online(const MotionSignal& v_h, std::span<const double> p_h_initial, const PartitionedDataset& part,
                                const BlendTable& table, const EncoderModel& model, const OnlineSchedule& schedule,
                                SessionOptions options = {}) {
    OnlineSession s(part, table, model, schedule, std::vector<double>(p_h_initial.begin(), p_h_initial.end()), options);
    for (int t = 0; t < v_h.effective_length(); ++t) s.push(v_h.sample(t));
    return s.finish();
}

/// Non-causal replay of the coefficient assignment in which the value from
/// instant T_i covers samples T_{i-1} + 1 ... T_i (it needs the prefix up to
/// T_i before those samples are emitted). For comparison with the causal
/// controller only; returns c(t) for t = 1..T with the warm-up at 0.
inline std::vector<double> replay_lookahead_coefficients(const MotionSignal& v_h, const PartitionedDataset& part,
                                                         const BlendTable& table, const OnlineSchedule& schedule) {
    const int n = v_h.length();
    schedule.validate(n);
    const auto ne = part.not_encoded_signals();
    const auto enc = part.encoded_signals();
    const auto instants = schedule.instants(n);
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    std::optional<std::size_t> ref;
    for (std::size_t i = 0; i < instants.size(); ++i) {
        const int ti = instants[i];
        const auto phi = project_restricted(restrict(v_h, ti), ne);
        const auto eta = expand(restrict(*ne[phi.index], ti), ne);
        if (!ref) {
            ref = nearest(ne[eta]->values(), enc, [](const MotionSignal* s) { return s->values(); }).index;
            continue;  // instant T0 only selects the reference
        }
        const double value = table.at(eta, *ref);
        for (int t = instants[i - 1] + 1; t <= ti; ++t) c[static_cast<std::size_t>(t - 1)] = value;
        if (i + 1 == instants.size())
            for (int t = ti + 1; t <= n; ++t) c[static_cast<std::size_t>(t - 1)] = value;
    }
    return c;
}

/// t, vhx, vhy, vhz, vax, vay, vaz, c (t is 1-based).
inline std::string trace_csv(const SessionResult& r) {
    static constexpr const char* axes = "xyz";
    std::string out = "t";
    const int rho = r.v_h.rho();
    for (int k = 0; k < rho; ++k) out += std::string(",vh") + (k < 3 ? std::string(1, axes[k]) : std::to_string(k));
    for (int k = 0; k < rho; ++k) out += std::string(",va") + (k < 3 ? std::string(1, axes[k]) : std::to_string(k));
    out += ",c\n";
    for (int t = 0; t < r.v_h.length(); ++t) {
        out += std::to_string(t + 1);
        for (int k = 0; k < rho; ++k) out += ',' + text::format_real(r.v_h(t, k));
        for (int k = 0; k < rho; ++k) out += ',' + text::format_real(r.v_a(t, k));
        out += ',' + text::format_real(r.coefficient[static_cast<std::size_t>(t)]) + '\n';
    }
    return out;
}

} // namespace kinenc
