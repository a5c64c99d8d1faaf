#pragma once

// Core signal algebra: fixed-length multi-dimensional time series, the
// position/velocity pair, L2 distance, nearest-element projection onto a set,
// prefix restriction and its inverse within a prefix-unique set.
//
// Storage indices are 0-based. Time *instants* reported to callers
// (terminal instant, prefix lengths, schedule instants) are 1-based counts,
// so instant t refers to sample index t - 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kinenc/error.hpp"

namespace kinenc {

struct SignalConfig {
    int rho = 3;              ///< degrees of freedom
    int t_max = 200;          ///< duration T in samples
    double dt = 0.01;         ///< sampling time [s]
    double delta_vel = 10.0;  ///< rest threshold on speed [mm/s]

    void validate() const {
        if (rho < 1) throw ConfigError("rho must be >= 1");
        if (t_max < 2) throw ConfigError("t_max must be >= 2");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
        if (!(delta_vel > 0.0) || !std::isfinite(delta_vel)) throw ConfigError("delta_vel must be positive");
    }

    /// Signals are comparable when they have the same shape and rate.
    bool compatible(const SignalConfig& o) const { return rho == o.rho && t_max == o.t_max && dt == o.dt; }

    bool operator==(const SignalConfig&) const = default;
};

/// A length-T sequence of rho-vectors, stored time-major.
///
/// Acquisitions shorter than T are zero-padded; `effective_length()` records
/// how many samples were actually measured.
class MotionSignal {
public:
    MotionSignal() = default;

    explicit MotionSignal(const SignalConfig& cfg)
        : cfg_(cfg), values_(static_cast<std::size_t>(cfg.t_max * cfg.rho), 0.0), effective_length_(cfg.t_max) {
        cfg_.validate();
    }

    /// `flat` may hold fewer than T samples; the rest is zero-filled.
    /// `effective_length < 0` means "number of samples supplied".
    MotionSignal(const SignalConfig& cfg, std::vector<double> flat, int effective_length = -1) : cfg_(cfg) {
        cfg_.validate();
        const auto full = static_cast<std::size_t>(cfg.t_max * cfg.rho);
        if (flat.size() % static_cast<std::size_t>(cfg.rho) != 0)
            throw ShapeError("flat sample buffer is not a multiple of rho");
        if (flat.size() > full) throw ShapeError("signal longer than t_max");
        const int supplied = static_cast<int>(flat.size()) / cfg.rho;
        for (double x : flat)
            if (!std::isfinite(x)) throw InvalidSignalError("signal has a non-finite component");
        flat.resize(full, 0.0);
        values_ = std::move(flat);
        effective_length_ = effective_length < 0 ? supplied : effective_length;
        if (effective_length_ < 1 || effective_length_ > cfg.t_max)
            throw ShapeError("effective length out of range");
    }

    const SignalConfig& config() const { return cfg_; }
    int length() const { return cfg_.t_max; }
    int rho() const { return cfg_.rho; }
    int effective_length() const { return effective_length_; }

    std::span<const double> values() const { return values_; }

    /// First `tau` samples, flattened.
    std::span<const double> head(int tau) const {
        return std::span<const double>(values_).first(static_cast<std::size_t>(tau * cfg_.rho));
    }

    std::span<const double> sample(int i) const {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(i * cfg_.rho),
                                                        static_cast<std::size_t>(cfg_.rho));
    }

    double operator()(int i, int k) const { return values_[static_cast<std::size_t>(i * cfg_.rho + k)]; }

    bool operator==(const MotionSignal& o) const {
        return cfg_ == o.cfg_ && effective_length_ == o.effective_length_ && values_ == o.values_;
    }

private:
    SignalConfig cfg_{};
    std::vector<double> values_;
    int effective_length_ = 0;
};

/// The first `tau` samples of a signal.
class SignalPrefix {
public:
    SignalPrefix(int rho, std::vector<double> flat) : rho_(rho), values_(std::move(flat)) {
        if (rho < 1 || values_.empty() || values_.size() % static_cast<std::size_t>(rho) != 0)
            throw ShapeError("prefix buffer does not hold a whole number of samples");
    }

    int rho() const { return rho_; }
    int tau() const { return static_cast<int>(values_.size()) / rho_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> head(int tau) const {
        return std::span<const double>(values_).first(static_cast<std::size_t>(tau * rho_));
    }
    std::span<const double> sample(int i) const {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(i * rho_),
                                                        static_cast<std::size_t>(rho_));
    }

    bool operator==(const SignalPrefix&) const = default;

private:
    int rho_;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Norms and distances

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("distance between buffers of different length");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double norm(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

/// L2 distance over the whole (padded) duration.
inline double dist(const MotionSignal& x1, const MotionSignal& x2) {
    if (!x1.config().compatible(x2.config())) throw ShapeError("dist: signal configurations differ");
    return std::sqrt(squared_distance(x1.values(), x2.values()));
}

inline double dist(const SignalPrefix& x1, const SignalPrefix& x2) {
    if (x1.rho() != x2.rho() || x1.tau() != x2.tau()) throw ShapeError("dist: prefix shapes differ");
    return std::sqrt(squared_distance(x1.values(), x2.values()));
}

// ---------------------------------------------------------------------------
// Position / velocity

/// Forward difference; the final sample repeats the last difference.
inline MotionSignal differentiate(const MotionSignal& positions) {
    const auto& cfg = positions.config();
    const int n = cfg.t_max, r = cfg.rho;
    std::vector<double> v(static_cast<std::size_t>(n * r));
    for (int t = 0; t + 1 < n; ++t)
        for (int k = 0; k < r; ++k)
            v[static_cast<std::size_t>(t * r + k)] = (positions(t + 1, k) - positions(t, k)) / cfg.dt;
    for (int k = 0; k < r; ++k) v[static_cast<std::size_t>((n - 1) * r + k)] = v[static_cast<std::size_t>((n - 2) * r + k)];
    for (double x : v)
        if (!std::isfinite(x)) throw InvalidSignalError("differentiate: non-finite result");
    return MotionSignal(cfg, std::move(v), positions.effective_length());
}

/// Explicit Euler integration starting from `initial_position`.
inline MotionSignal integrate(const MotionSignal& velocity, std::span<const double> initial_position) {
    const auto& cfg = velocity.config();
    const int n = cfg.t_max, r = cfg.rho;
    if (initial_position.size() != static_cast<std::size_t>(r)) throw ShapeError("integrate: initial position has wrong size");
    std::vector<double> p(static_cast<std::size_t>(n * r));
    for (int k = 0; k < r; ++k) p[static_cast<std::size_t>(k)] = initial_position[static_cast<std::size_t>(k)];
    for (int t = 0; t + 1 < n; ++t)
        for (int k = 0; k < r; ++k)
            p[static_cast<std::size_t>((t + 1) * r + k)] = p[static_cast<std::size_t>(t * r + k)] + cfg.dt * velocity(t, k);
    return MotionSignal(cfg, std::move(p), velocity.effective_length());
}

// ---------------------------------------------------------------------------
// Terminal instant

struct TerminalInstant {
    int instant = 0;          ///< 1-based
    bool terminates = true;   ///< false when even the last sample is above threshold
};

inline TerminalInstant terminal_instant(const MotionSignal& v) {
    const int n = v.length();
    const double thr = v.config().delta_vel;
    int t = n;
    while (t >= 1 && norm(v.sample(t - 1)) <= thr) --t;
    if (t == n) return {n, false};
    return {t + 1, true};
}

// ---------------------------------------------------------------------------
// Projection

struct Projection {
    std::size_t index = 0;
    double distance = 0.0;
};

/// argmin over `set` of the distance between `x` and `view(element)`.
/// Ties resolve to the lowest index.
template <class Range, class View>
Projection nearest(std::span<const double> x, const Range& set, View view) {
    Projection best{0, std::numeric_limits<double>::infinity()};
    double best_sq = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    for (const auto& elem : set) {
        const double d = squared_distance(x, view(elem));
        if (d < best_sq) {
            best_sq = d;
            best.index = i;
        }
        ++i;
    }
    if (i == 0) throw DomainError("projection onto an empty set");
    best.distance = std::sqrt(best_sq);
    return best;
}

inline Projection project(const MotionSignal& x, const std::vector<MotionSignal>& set) {
    for (const auto& s : set)
        if (!s.config().compatible(x.config())) throw ShapeError("project: set element has a different configuration");
    return nearest(x.values(), set, [](const MotionSignal& s) { return s.values(); });
}

inline Projection project(const SignalPrefix& x, const std::vector<SignalPrefix>& set) {
    for (const auto& s : set)
        if (s.tau() != x.tau() || s.rho() != x.rho()) throw ShapeError("project: prefix lengths differ");
    return nearest(x.values(), set, [](const SignalPrefix& s) { return s.values(); });
}

/// Projection of a prefix onto the tau-restriction of a signal set, without
/// materializing the restricted set.
inline Projection project_restricted(const SignalPrefix& x, const std::vector<const MotionSignal*>& set) {
    const int tau = x.tau();
    for (const auto* s : set)
        if (s->rho() != x.rho() || s->length() < tau) throw ShapeError("project_restricted: incompatible set element");
    return nearest(x.values(), set, [tau](const MotionSignal* s) { return s->head(tau); });
}

// ---------------------------------------------------------------------------
// Restriction / expansion

inline SignalPrefix restrict(const MotionSignal& x, int tau) {
    if (tau < 1 || tau > x.length()) throw DomainError("restrict: tau out of range");
    auto h = x.head(tau);
    return SignalPrefix(x.rho(), std::vector<double>(h.begin(), h.end()));
}

inline SignalPrefix restrict(const SignalPrefix& x, int tau) {
    if (tau < 1 || tau > x.tau()) throw DomainError("restrict: tau out of range");
    auto h = x.head(tau);
    return SignalPrefix(x.rho(), std::vector<double>(h.begin(), h.end()));
}

/// The unique element of `set` whose restriction equals `prefix` (exact match).
inline std::size_t expand(const SignalPrefix& prefix, const std::vector<const MotionSignal*>& set) {
    const int tau = prefix.tau();
    std::size_t found = set.size();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto* s = set[i];
        if (s->rho() != prefix.rho() || s->length() < tau) continue;
        auto h = s->head(tau);
        if (std::equal(h.begin(), h.end(), prefix.values().begin())) {
            if (found != set.size())
                throw IllPosedExpansionError("expand: elements " + std::to_string(found) + " and " + std::to_string(i) +
                                             " share the same " + std::to_string(tau) + "-prefix");
            found = i;
        }
    }
    if (found == set.size()) throw NotFoundError("expand: no set element has this prefix");
    return found;
}

inline std::size_t expand(const SignalPrefix& prefix, const std::vector<MotionSignal>& set) {
    std::vector<const MotionSignal*> ptrs;
    ptrs.reserve(set.size());
    for (const auto& s : set) ptrs.push_back(&s);
    return expand(prefix, ptrs);
}

} // namespace kinenc
