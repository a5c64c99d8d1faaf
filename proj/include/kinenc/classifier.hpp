#pragma once

// Approximate encoding function: velocity signals are resampled to a fixed
// feature vector and scored by a 60-200-1 network with a sigmoid output. A
// clipping layer turns the score into Encoded / NotEncoded / Unclassified.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include "kinenc/dataset.hpp"
#include "kinenc/error.hpp"
#include "kinenc/nn.hpp"
#include "kinenc/parallel.hpp"
#include "kinenc/random.hpp"
#include "kinenc/signals.hpp"
#include "kinenc/text_io.hpp"

namespace kinenc {

inline constexpr int kPointsPerAxis = 20;

// ---------------------------------------------------------------------------
// Features

/// Natural cubic spline through the first `length` samples of each axis,
/// evaluated at kPointsPerAxis uniformly spaced points (first and last sample
/// included). Output is axis-major.
inline std::vector<double> featurize(std::span<const double> flat, int length, int rho) {
    if (length < 4) throw FeatureError("featurize needs at least 4 samples, got " + std::to_string(length));
    if (flat.size() < static_cast<std::size_t>(length * rho)) throw ShapeError("featurize: buffer shorter than length");
    static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)handler_off;

    const auto n = static_cast<std::size_t>(length);
    std::vector<double> xs(n), ys(n);
    std::iota(xs.begin(), xs.end(), 0.0);
    std::vector<double> out(static_cast<std::size_t>(kPointsPerAxis * rho));
    gsl_interp* interp = gsl_interp_alloc(gsl_interp_cspline, n);
    if (interp == nullptr) throw FeatureError("featurize: spline allocation failed");
    for (int k = 0; k < rho; ++k) {
        for (std::size_t i = 0; i < n; ++i) ys[i] = flat[i * static_cast<std::size_t>(rho) + static_cast<std::size_t>(k)];
        if (gsl_interp_init(interp, xs.data(), ys.data(), n) != GSL_SUCCESS) {
            gsl_interp_free(interp);
            throw FeatureError("featurize: spline construction failed");
        }
        for (int j = 0; j < kPointsPerAxis; ++j) {
            const double x = static_cast<double>(length - 1) * j / (kPointsPerAxis - 1);
            double y = 0.0;
            if (gsl_interp_eval_e(interp, xs.data(), ys.data(), x, nullptr, &y) != GSL_SUCCESS) {
                gsl_interp_free(interp);
                throw FeatureError("featurize: spline evaluation failed");
            }
            out[static_cast<std::size_t>(k * kPointsPerAxis + j)] = y;
        }
    }
    gsl_interp_free(interp);
    return out;
}

/// Features of a full signal, restricted to its effective length.
inline std::vector<double> featurize(const MotionSignal& v) { return featurize(v.values(), v.effective_length(), v.rho()); }

/// Features of a prefix, using every available sample.
inline std::vector<double> featurize(const SignalPrefix& v) { return featurize(v.values(), v.tau(), v.rho()); }

// ---------------------------------------------------------------------------
// Model and decisions

struct EncoderModel {
    nn::Mlp net;
    nn::Vector input_mean;   ///< features are standardized as (x - mean) .* scale
    nn::Vector input_scale;
    double lower_threshold = 0.1;
    double upper_threshold = 0.9;

    /// Zero weights, identity standardization.
    static EncoderModel zeros(std::vector<int> dims) {
        EncoderModel m;
        m.net = nn::Mlp(std::move(dims), nn::Output::Sigmoid);
        m.input_mean = nn::Vector::Zero(m.net.input_dim());
        m.input_scale = nn::Vector::Ones(m.net.input_dim());
        return m;
    }

    int input_dim() const { return net.input_dim(); }

    void validate() const {
        if (!(0.0 <= lower_threshold && lower_threshold < upper_threshold && upper_threshold <= 1.0))
            throw ConfigError("classifier thresholds must satisfy 0 <= lower < upper <= 1");
        if (net.output_dim() != 1 || net.output_activation() != nn::Output::Sigmoid)
            throw ShapeError("encoder network must have a single sigmoid output");
        if (input_mean.size() != input_dim() || input_scale.size() != input_dim())
            throw ShapeError("standardization vectors do not match the input layer");
    }

    nn::Matrix standardize(const nn::Matrix& features) const {
        return (features.colwise() - input_mean).array().colwise() * input_scale.array();
    }

    /// Scores for a batch of raw feature columns.
    nn::Vector scores(const nn::Matrix& features) const {
        if (features.rows() != input_dim()) throw ShapeError("feature dimension mismatch");
        return net.forward(standardize(features)).row(0).transpose();
    }

    bool operator==(const EncoderModel& o) const {
        return net == o.net && input_mean == o.input_mean && input_scale == o.input_scale &&
               lower_threshold == o.lower_threshold && upper_threshold == o.upper_threshold;
    }
};

/// Deterministic inference on one feature vector; value in [0, 1].
inline double forward(const EncoderModel& model, std::span<const double> features) {
    if (static_cast<int>(features.size()) != model.input_dim())
        throw ShapeError("forward: expected " + std::to_string(model.input_dim()) + " features, got " +
                         std::to_string(features.size()));
    for (double f : features)
        if (!std::isfinite(f)) throw InvalidSignalError("forward: non-finite feature");
    nn::Matrix x = Eigen::Map<const nn::Vector>(features.data(), static_cast<Eigen::Index>(features.size()));
    return model.scores(x)(0);
}

enum class DecisionKind { Encoded, NotEncoded, Unclassified };

struct Decision {
    DecisionKind kind = DecisionKind::Unclassified;
    double raw_score = 0.5;

    /// True when the decision states the encoding level `level`.
    bool states(int level) const {
        return (level == 1 && kind == DecisionKind::Encoded) || (level == 0 && kind == DecisionKind::NotEncoded);
    }
    /// Confidently states the opposite level.
    bool contradicts(int level) const { return states(1 - level); }
};

inline Decision decide(double score, double lower, double upper) {
    if (score > upper) return {DecisionKind::Encoded, score};
    if (score < lower) return {DecisionKind::NotEncoded, score};
    return {DecisionKind::Unclassified, score};
}

inline Decision decide(const EncoderModel& m, double score) { return decide(score, m.lower_threshold, m.upper_threshold); }

inline Decision classify(const EncoderModel& model, const MotionSignal& v) {
    return decide(model, forward(model, featurize(v)));
}

inline Decision classify(const EncoderModel& model, const SignalPrefix& v) {
    return decide(model, forward(model, featurize(v)));
}

inline const char* to_string(DecisionKind k) {
    switch (k) {
    case DecisionKind::Encoded: return "encoded";
    case DecisionKind::NotEncoded: return "not_encoded";
    case DecisionKind::Unclassified: return "unclassified";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Model file
//
//   kinenc-encoder 1
//   thresholds <lower> <upper>
//   input_mean <n> <values...>
//   input_scale <n> <values...>
//   network ... (see nn.hpp)

inline std::string serialize(const EncoderModel& m) {
    std::ostringstream out;
    out << "kinenc-encoder 1\n";
    out << "thresholds " << text::format_real(m.lower_threshold) << ' ' << text::format_real(m.upper_threshold) << '\n';
    out << "input_mean " << m.input_mean.size();
    for (Eigen::Index i = 0; i < m.input_mean.size(); ++i) out << ' ' << text::format_real(m.input_mean(i));
    out << "\ninput_scale " << m.input_scale.size();
    for (Eigen::Index i = 0; i < m.input_scale.size(); ++i) out << ' ' << text::format_real(m.input_scale(i));
    out << '\n';
    nn::write(out, m.net);
    return out.str();
}

inline EncoderModel parse_encoder(const std::string& content) {
    std::istringstream in(content);
    auto header = nn::detail::expect_line(in, "kinenc-encoder");
    if (header.size() != 2 || header[1] != "1") throw ParseError("unsupported encoder file version", 1, "version");
    EncoderModel m;
    auto th = nn::detail::expect_line(in, "thresholds");
    if (th.size() != 3) throw ParseError("thresholds record needs two values", 2, "thresholds");
    m.lower_threshold = nn::detail::to_real(th[1], "thresholds");
    m.upper_threshold = nn::detail::to_real(th[2], "thresholds");
    auto vec = [&](const std::string& tag) {
        auto t = nn::detail::expect_line(in, tag);
        if (t.size() < 2) throw ParseError("truncated record", 0, tag);
        const auto n = nn::detail::to_int(t[1], tag);
        if (n < 0 || t.size() != static_cast<std::size_t>(n) + 2) throw ParseError("record has wrong arity", 0, tag);
        nn::Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = nn::detail::to_real(t[2 + static_cast<std::size_t>(i)], tag);
        return v;
    };
    m.input_mean = vec("input_mean");
    m.input_scale = vec("input_scale");
    m.net = nn::read(in);
    m.validate();
    return m;
}

inline std::string fingerprint(const EncoderModel& m) { return text::fingerprint(serialize(m)); }

inline void save(const EncoderModel& m, const std::string& path) { text::write_file(path, serialize(m)); }

inline EncoderModel load_encoder(const std::string& path) { return parse_encoder(text::read_file(path)); }

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
    double learning_rate = 1e-3;
    double dropout_rate = 0.5;
    int epochs = 300;
    int batch_size = 32;
    std::uint64_t seed = 1;
    int splits = 5;
    double train_fraction = 0.7;
    int patience = 30;     ///< early stopping on validation loss; <= 0 disables
    int hidden = 200;
    double lower_threshold = 0.1;
    double upper_threshold = 0.9;
    int workers = 1;       ///< threads for cross-validation splits

    void validate() const {
        if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ConfigError("dropout_rate must be in [0,1)");
        if (epochs < 0) throw ConfigError("epochs must be >= 0");
        if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
        if (splits < 1) throw ConfigError("splits must be >= 1");
        if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction must be in (0,1)");
        if (hidden < 1) throw ConfigError("hidden must be >= 1");
        if (!(0.0 <= lower_threshold && lower_threshold < upper_threshold && upper_threshold <= 1.0))
            throw ConfigError("thresholds must satisfy 0 <= lower < upper <= 1");
    }
};

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = std::nan("");
    double train_acc = 0.0;
    double val_acc = std::nan("");
};

struct TrainResult {
    EncoderModel model;
    std::vector<EpochMetrics> curve;
    int best_epoch = 0;  ///< epoch whose weights were returned (0 = initial)
};

/// Labeled feature matrix, one sample per column.
struct FeatureSet {
    nn::Matrix x;
    nn::Vector y;

    static FeatureSet from(const std::vector<const LabeledSample*>& samples) {
        FeatureSet fs;
        if (samples.empty()) return fs;
        const auto first = featurize(samples.front()->velocity);
        fs.x.resize(static_cast<Eigen::Index>(first.size()), static_cast<Eigen::Index>(samples.size()));
        fs.y.resize(static_cast<Eigen::Index>(samples.size()));
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto f = i == 0 ? first : featurize(samples[i]->velocity);
            fs.x.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const nn::Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
            fs.y(static_cast<Eigen::Index>(i)) = samples[i]->encoding_level;
        }
        return fs;
    }

    Eigen::Index size() const { return x.cols(); }
};

namespace detail {

inline double bce(const nn::Vector& p, const nn::Vector& y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double q = std::clamp(p(i), 1e-12, 1.0 - 1e-12);
        s -= y(i) * std::log(q) + (1.0 - y(i)) * std::log(1.0 - q);
    }
    return p.size() > 0 ? s / static_cast<double>(p.size()) : 0.0;
}

inline double accuracy(const nn::Vector& p, const nn::Vector& y) {
    if (p.size() == 0) return 0.0;
    Eigen::Index ok = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) ok += ((p(i) > 0.5) == (y(i) > 0.5));
    return static_cast<double>(ok) / static_cast<double>(p.size());
}

} // namespace detail

/// Binary cross-entropy of the model on a feature set (no dropout).
inline double loss(const EncoderModel& m, const FeatureSet& fs) { return detail::bce(m.scores(fs.x), fs.y); }

/// Gradient of the mean BCE loss w.r.t. every network parameter (no dropout).
inline nn::Gradients loss_gradient(const EncoderModel& m, const FeatureSet& fs) {
    Rng unused(0);
    const auto tape = m.net.forward_train(m.standardize(fs.x), 0.0, unused);
    nn::Matrix delta = (tape.output.row(0).transpose() - fs.y).transpose() / static_cast<double>(fs.size());
    return m.net.backward(tape, delta);
}

/// Trains on `train`; when `val` is non-empty, early-stops on its loss and
/// returns the best weights.
inline TrainResult fit(const FeatureSet& train, const FeatureSet& val, const TrainConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (train.size() == 0) throw ConfigError("fit: empty training set");
    Rng rng(seed);
    const int in_dim = static_cast<int>(train.x.rows());

    EncoderModel model;
    model.net = nn::Mlp::xavier({in_dim, cfg.hidden, 1}, nn::Output::Sigmoid, rng);
    model.lower_threshold = cfg.lower_threshold;
    model.upper_threshold = cfg.upper_threshold;
    // One scale for every feature: rest-period features carry only sensor
    // noise and must not be amplified to unit variance.
    model.input_mean = train.x.rowwise().mean();
    const double var = (train.x.colwise() - model.input_mean).array().square().mean();
    model.input_scale = nn::Vector::Constant(in_dim, 1.0 / std::max(std::sqrt(var), 1e-6));

    TrainResult result{model, {}, 0};
    if (cfg.epochs == 0) return result;

    const bool has_val = val.size() > 0;
    const nn::Matrix xs = model.standardize(train.x);
    nn::Adam adam(model.net, cfg.learning_rate);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(train.size()));
    std::iota(order.begin(), order.end(), 0);
    double best_val = std::numeric_limits<double>::infinity();

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const auto b = static_cast<Eigen::Index>(end - start);
            nn::Matrix xb(xs.rows(), b);
            nn::Vector yb(b);
            for (Eigen::Index i = 0; i < b; ++i) {
                xb.col(i) = xs.col(order[start + static_cast<std::size_t>(i)]);
                yb(i) = train.y(order[start + static_cast<std::size_t>(i)]);
            }
            const auto tape = model.net.forward_train(xb, cfg.dropout_rate, rng);
            nn::Matrix delta = (tape.output.row(0).transpose() - yb).transpose() / static_cast<double>(b);
            adam.step(model.net, model.net.backward(tape, delta));
        }

        EpochMetrics em;
        em.epoch = epoch;
        const nn::Vector p = model.scores(train.x);
        em.train_loss = detail::bce(p, train.y);
        em.train_acc = detail::accuracy(p, train.y);
        if (!std::isfinite(em.train_loss) || !model.net.all_finite()) throw TrainingError("classifier training diverged", epoch);
        if (has_val) {
            const nn::Vector pv = model.scores(val.x);
            em.val_loss = detail::bce(pv, val.y);
            em.val_acc = detail::accuracy(pv, val.y);
        }
        result.curve.push_back(em);

        if (!has_val || cfg.patience <= 0) {
            result.model = model;
            result.best_epoch = epoch;
            continue;
        }
        if (em.val_loss < best_val) {
            best_val = em.val_loss;
            result.model = model;
            result.best_epoch = epoch;
        } else if (epoch - result.best_epoch >= cfg.patience) {
            break;
        }
    }
    return result;
}

/// Trains on every sample of the partition (no validation, no early stopping).
inline TrainResult train(const PartitionedDataset& part, const TrainConfig& cfg) {
    std::vector<const LabeledSample*> all;
    for (const auto& s : part.all()) all.push_back(&s);
    if (part.encoded().empty() || part.not_encoded().empty()) throw TrivialPartitionError("train: trivial partition");
    return fit(FeatureSet::from(all), FeatureSet{}, cfg, derive_seed(cfg.seed, "classifier"));
}

// ---------------------------------------------------------------------------
// Repeated stratified hold-out validation

struct SplitMetrics {
    int split = 0;
    double acc_encoded = 0.0;                ///< correct decisions on D_edes validation samples
    double acc_not_encoded = 0.0;
    double misclassified_encoded = 0.0;      ///< confidently wrong on D_edes validation samples
    double misclassified_not_encoded = 0.0;
    double unclassified_rate = 0.0;          ///< over all validation samples
    double accuracy = 0.0;                   ///< correct decisions over all validation samples
};

/// Decision-level metrics on a labeled subset of the partition.
inline SplitMetrics evaluate_decisions(const EncoderModel& m, const PartitionedDataset& part,
                                       const std::vector<std::size_t>& val_encoded,
                                       const std::vector<std::size_t>& val_not_encoded) {
    SplitMetrics sm;
    std::size_t unclassified = 0;
    auto tally = [&](const std::vector<std::size_t>& idx, double& acc, double& wrong) {
        std::size_t ok = 0, bad = 0;
        for (auto i : idx) {
            const auto& s = part.sample(i);
            const auto d = classify(m, s.velocity);
            if (d.states(s.encoding_level)) ++ok;
            else if (d.contradicts(s.encoding_level)) ++bad;
            else ++unclassified;
        }
        const double n = static_cast<double>(std::max<std::size_t>(idx.size(), 1));
        acc = static_cast<double>(ok) / n;
        wrong = static_cast<double>(bad) / n;
        return ok;
    };
    const auto ok_e = tally(val_encoded, sm.acc_encoded, sm.misclassified_encoded);
    const auto ok_n = tally(val_not_encoded, sm.acc_not_encoded, sm.misclassified_not_encoded);
    const double total = static_cast<double>(std::max<std::size_t>(val_encoded.size() + val_not_encoded.size(), 1));
    sm.unclassified_rate = static_cast<double>(unclassified) / total;
    sm.accuracy = static_cast<double>(ok_e + ok_n) / total;
    return sm;
}

struct CrossValidation {
    std::vector<SplitMetrics> splits;
    std::vector<std::vector<EpochMetrics>> curves;  ///< one per split
    int best_split = 0;
    EncoderModel best_model;
    std::vector<std::size_t> val_encoded;      ///< indices into part.all(), best split
    std::vector<std::size_t> val_not_encoded;

    SplitMetrics mean() const {
        SplitMetrics m;
        m.split = -1;
        for (const auto& s : splits) {
            m.acc_encoded += s.acc_encoded;
            m.acc_not_encoded += s.acc_not_encoded;
            m.misclassified_encoded += s.misclassified_encoded;
            m.misclassified_not_encoded += s.misclassified_not_encoded;
            m.unclassified_rate += s.unclassified_rate;
            m.accuracy += s.accuracy;
        }
        const double n = static_cast<double>(std::max<std::size_t>(splits.size(), 1));
        m.acc_encoded /= n;
        m.acc_not_encoded /= n;
        m.misclassified_encoded /= n;
        m.misclassified_not_encoded /= n;
        m.unclassified_rate /= n;
        m.accuracy /= n;
        return m;
    }

    /// Per-epoch average over the splits that reached that epoch.
    std::vector<EpochMetrics> mean_curve() const {
        std::size_t longest = 0;
        for (const auto& c : curves) longest = std::max(longest, c.size());
        std::vector<EpochMetrics> out;
        for (std::size_t e = 0; e < longest; ++e) {
            EpochMetrics m;
            m.epoch = static_cast<int>(e + 1);
            m.val_loss = m.val_acc = 0.0;
            int n = 0;
            for (const auto& c : curves) {
                if (e >= c.size()) continue;
                m.train_loss += c[e].train_loss;
                m.val_loss += c[e].val_loss;
                m.train_acc += c[e].train_acc;
                m.val_acc += c[e].val_acc;
                ++n;
            }
            m.train_loss /= n;
            m.val_loss /= n;
            m.train_acc /= n;
            m.val_acc /= n;
            out.push_back(m);
        }
        return out;
    }
};

/// `splits` independent stratified random train/validation splits.
inline CrossValidation cross_validate(const PartitionedDataset& part, const TrainConfig& cfg) {
    cfg.validate();
    const auto n_enc = part.encoded().size(), n_ne = part.not_encoded().size();
    if (n_enc < static_cast<std::size_t>(cfg.splits) || n_ne < static_cast<std::size_t>(cfg.splits) || n_enc < 2 || n_ne < 2)
        throw ConfigError("cross_validate: each class needs at least max(2, splits) samples");

    auto val_count = [&](std::size_t n) {
        auto k = static_cast<std::size_t>(std::llround((1.0 - cfg.train_fraction) * static_cast<double>(n)));
        return std::clamp<std::size_t>(k, 1, n - 1);
    };

    struct SplitOut {
        SplitMetrics metrics;
        TrainResult result;
        std::vector<std::size_t> val_e, val_n;
    };
    std::vector<SplitOut> outs(static_cast<std::size_t>(cfg.splits));

    parallel_for(outs.size(), cfg.workers, [&](std::size_t s) {
        Rng rng(derive_seed(cfg.seed, "cv-split-" + std::to_string(s)));
        auto enc = part.encoded();
        auto ne = part.not_encoded();
        std::shuffle(enc.begin(), enc.end(), rng);
        std::shuffle(ne.begin(), ne.end(), rng);
        const auto ve = val_count(enc.size()), vn = val_count(ne.size());
        SplitOut& o = outs[s];
        o.val_e.assign(enc.begin(), enc.begin() + static_cast<std::ptrdiff_t>(ve));
        o.val_n.assign(ne.begin(), ne.begin() + static_cast<std::ptrdiff_t>(vn));
        std::sort(o.val_e.begin(), o.val_e.end());
        std::sort(o.val_n.begin(), o.val_n.end());

        std::vector<const LabeledSample*> tr, va;
        for (std::size_t i = ve; i < enc.size(); ++i) tr.push_back(&part.sample(enc[i]));
        for (std::size_t i = vn; i < ne.size(); ++i) tr.push_back(&part.sample(ne[i]));
        for (auto i : o.val_e) va.push_back(&part.sample(i));
        for (auto i : o.val_n) va.push_back(&part.sample(i));

        o.result = fit(FeatureSet::from(tr), FeatureSet::from(va), cfg, derive_seed(cfg.seed, "cv-train-" + std::to_string(s)));
        o.metrics = evaluate_decisions(o.result.model, part, o.val_e, o.val_n);
        o.metrics.split = static_cast<int>(s);
    });

    CrossValidation cv;
    for (std::size_t s = 0; s < outs.size(); ++s) {
        cv.splits.push_back(outs[s].metrics);
        cv.curves.push_back(outs[s].result.curve);
        if (outs[s].metrics.accuracy > outs[static_cast<std::size_t>(cv.best_split)].metrics.accuracy)
            cv.best_split = static_cast<int>(s);
    }
    auto& best = outs[static_cast<std::size_t>(cv.best_split)];
    cv.best_model = best.result.model;
    cv.val_encoded = best.val_e;
    cv.val_not_encoded = best.val_n;
    return cv;
}

inline std::string curves_csv(const std::vector<EpochMetrics>& curve) {
    std::string out = "epoch,train_loss,val_loss,train_acc,val_acc\n";
    auto fmt = [](double v) { return std::isfinite(v) ? text::format_real(v) : std::string(); };
    for (const auto& e : curve)
        out += std::to_string(e.epoch) + ',' + fmt(e.train_loss) + ',' + fmt(e.val_loss) + ',' + fmt(e.train_acc) + ',' +
               fmt(e.val_acc) + '\n';
    return out;
}

} // namespace kinenc
