#pragma once

// Convex blending of a human signal with a dataset reference, the exhaustive
// restricted solution table over (not-encoded, encoded) dataset pairs, and
// the offline approximate solution built on top of it.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kinenc/classifier.hpp"
#include "kinenc/dataset.hpp"
#include "kinenc/error.hpp"
#include "kinenc/parallel.hpp"
#include "kinenc/signals.hpp"
#include "kinenc/text_io.hpp"

namespace kinenc {

/// Uniform grid {0, 1/n, 2/n, ..., 1} over the blending coefficient.
class BlendGrid {
public:
    explicit BlendGrid(int intervals = 50) : intervals_(intervals) {
        if (intervals < 1) throw ConfigError("blend grid needs at least one interval");
    }

    int intervals() const { return intervals_; }
    int size() const { return intervals_ + 1; }
    double step() const { return 1.0 / intervals_; }

    /// Value at index k, computed as k/n so grid points are exact.
    double value(int k) const {
        if (k < 0 || k > intervals_) throw DomainError("blend grid index out of range");
        return static_cast<double>(k) / intervals_;
    }

    std::vector<double> values() const {
        std::vector<double> v;
        for (int k = 0; k <= intervals_; ++k) v.push_back(value(k));
        return v;
    }

    bool operator==(const BlendGrid&) const = default;

private:
    int intervals_;
};

/// Effective length of a blend: covers every input with nonzero weight.
inline int blend_length(const MotionSignal& v_h, const MotionSignal& v_r, double c) {
    if (c == 1.0) return v_h.effective_length();
    if (c == 0.0) return v_r.effective_length();
    return std::max(v_h.effective_length(), v_r.effective_length());
}

/// v_a = c v_h + (1 - c) v_r, sample by sample.
inline MotionSignal blend(const MotionSignal& v_h, const MotionSignal& v_r, double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("blend: coefficient must be in [0,1]");
    if (!v_h.config().compatible(v_r.config())) throw ShapeError("blend: signal configurations differ");
    auto a = v_h.values();
    auto b = v_r.values();
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i] + (1.0 - c) * b[i];
    return MotionSignal(v_h.config(), std::move(out), blend_length(v_h, v_r, c));
}

/// Restricted solution function: for every (not-encoded i, encoded j) pair,
/// the grid index of the first coefficient, scanning down from 1, whose
/// blend the classifier labels with the desired level; 0 if none.
struct BlendTable {
    int e_des = 1;
    BlendGrid grid{};
    std::string classifier_fingerprint;
    std::vector<std::string> not_encoded_ids;  ///< rows
    std::vector<std::string> encoded_ids;      ///< columns
    std::vector<int> index;                    ///< row-major grid indices
    std::vector<int> full_scan_index;          ///< verification mode only: largest index over the whole grid, -1 if none

    std::size_t rows() const { return not_encoded_ids.size(); }
    std::size_t cols() const { return encoded_ids.size(); }
    int index_at(std::size_t i, std::size_t j) const { return index[i * cols() + j]; }
    double at(std::size_t i, std::size_t j) const { return grid.value(index_at(i, j)); }

    bool operator==(const BlendTable&) const = default;
};

namespace detail {

/// Classifier scores of blend(v_ne, v_r, c) for every grid value, computed
/// from the first-layer response of each endpoint. Featurization and input
/// standardization are affine in the signal, so the first hidden layer's
/// pre-activation of a blend is the same convex combination of the
/// endpoints' pre-activations. The grid ends use each endpoint over its own
/// effective length (see blend_length).
inline nn::Vector blend_scores(const EncoderModel& model, const MotionSignal& v_ne, const MotionSignal& v_r,
                               const BlendGrid& grid) {
    const int len = std::max(v_ne.effective_length(), v_r.effective_length());
    const std::vector<std::vector<double>> feats = {
        featurize(v_ne.values(), len, v_ne.rho()), featurize(v_r.values(), len, v_r.rho()), featurize(v_ne),
        featurize(v_r)};
    const auto dim = static_cast<Eigen::Index>(feats[0].size());
    if (dim != model.input_dim()) throw ShapeError("blend table: feature size does not match classifier input");
    nn::Matrix x(dim, 4);
    for (Eigen::Index j = 0; j < 4; ++j) x.col(j) = Eigen::Map<const nn::Vector>(feats[static_cast<std::size_t>(j)].data(), dim);
    const auto& first = model.net.layers().front();
    const nn::Matrix a = first.weight * model.standardize(x);

    const int n = grid.size();
    nn::Matrix pre(a.rows(), n);
    for (int k = 0; k < n; ++k) {
        const double c = grid.value(k);
        if (c == 1.0) pre.col(k) = a.col(2) + first.bias;
        else if (c == 0.0) pre.col(k) = a.col(3) + first.bias;
        else pre.col(k) = c * a.col(0) + (1.0 - c) * a.col(1) + first.bias;
    }
    return model.net.forward_from(0, pre).row(0).transpose();
}

} // namespace detail

struct TableOptions {
    int workers = 1;
    bool verify = false;  ///< also record the full-grid maximum per entry
};

inline BlendTable compute_table(const PartitionedDataset& part, const BlendGrid& grid, const EncoderModel& model,
                                const TableOptions& opt = {}) {
    model.validate();
    BlendTable t;
    t.e_des = part.e_des();
    t.grid = grid;
    t.classifier_fingerprint = fingerprint(model);
    for (auto i : part.not_encoded()) t.not_encoded_ids.push_back(part.sample(i).id);
    for (auto j : part.encoded()) t.encoded_ids.push_back(part.sample(j).id);
    t.index.assign(t.rows() * t.cols(), 0);
    if (opt.verify) t.full_scan_index.assign(t.rows() * t.cols(), -1);

    parallel_for(t.rows(), opt.workers, [&](std::size_t i) {
        const auto& v_ne = part.not_encoded_sample(i).velocity;
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const auto scores = detail::blend_scores(model, v_ne, part.encoded_sample(j).velocity, grid);
            int k = grid.intervals();
            while (k > 0 && !decide(model, scores(k)).states(t.e_des)) --k;
            t.index[i * t.cols() + j] = k;
            if (opt.verify) {
                int best = -1;
                for (int q = 0; q < grid.size(); ++q)
                    if (decide(model, scores(q)).states(t.e_des)) best = q;
                t.full_scan_index[i * t.cols() + j] = best;
            }
        }
    });
    return t;
}

/// Throws if the table was not built from this partition and classifier.
inline void check_table(const BlendTable& t, const PartitionedDataset& part, const EncoderModel& model) {
    if (t.classifier_fingerprint != fingerprint(model))
        throw StaleArtifactError("blend table was built with a different classifier (fingerprint " +
                                 t.classifier_fingerprint + ", current " + fingerprint(model) + ")");
    if (t.e_des != part.e_des() || t.rows() != part.not_encoded().size() || t.cols() != part.encoded().size())
        throw StaleArtifactError("blend table does not match the dataset partition");
    for (std::size_t i = 0; i < t.rows(); ++i)
        if (t.not_encoded_ids[i] != part.not_encoded_sample(i).id) throw StaleArtifactError("blend table row ids do not match the dataset");
    for (std::size_t j = 0; j < t.cols(); ++j)
        if (t.encoded_ids[j] != part.encoded_sample(j).id) throw StaleArtifactError("blend table column ids do not match the dataset");
}

struct OfflineSolution {
    double c_hat = 0.0;
    std::size_t reference = 0;  ///< index into part.encoded()
    std::size_t neighbor = 0;   ///< index into part.not_encoded()
    MotionSignal v_r;
    MotionSignal v_a;
    Decision decision;
};

/// Approximate solution for an already-acquired human signal: reference by
/// projection onto the encoded side, coefficient looked up at the nearest
/// not-encoded sample.
inline OfflineSolution solve_offline(const MotionSignal& v_h, const PartitionedDataset& part, const BlendTable& table,
                                     const EncoderModel& model) {
    check_table(table, part, model);
    const auto enc = part.encoded_signals();
    const auto ne = part.not_encoded_signals();
    auto full = [](const MotionSignal* s) { return s->values(); };
    OfflineSolution sol;
    sol.reference = nearest(v_h.values(), enc, full).index;
    sol.neighbor = nearest(v_h.values(), ne, full).index;
    sol.c_hat = table.at(sol.neighbor, sol.reference);
    sol.v_r = *enc[sol.reference];
    sol.v_a = blend(v_h, sol.v_r, sol.c_hat);
    sol.decision = classify(model, sol.v_a);
    return sol;
}

// ---------------------------------------------------------------------------
// Table file
//
//   kinenc-table 1
//   e_des <0|1>
//   grid <intervals>
//   classifier <fingerprint>
//   not_encoded <n> <ids...>
//   encoded <m> <ids...>
//   row <i> <m grid indices>        (n lines)

inline std::string serialize(const BlendTable& t) {
    std::ostringstream out;
    out << "kinenc-table 1\n";
    out << "e_des " << t.e_des << '\n';
    out << "grid " << t.grid.intervals() << '\n';
    out << "classifier " << t.classifier_fingerprint << '\n';
    out << "not_encoded " << t.rows();
    for (const auto& id : t.not_encoded_ids) out << ' ' << id;
    out << "\nencoded " << t.cols();
    for (const auto& id : t.encoded_ids) out << ' ' << id;
    out << '\n';
    for (std::size_t i = 0; i < t.rows(); ++i) {
        out << "row " << i;
        for (std::size_t j = 0; j < t.cols(); ++j) out << ' ' << t.index_at(i, j);
        out << '\n';
    }
    return out.str();
}

inline BlendTable parse_table(const std::string& content) {
    std::istringstream in(content);
    using nn::detail::expect_line;
    using nn::detail::to_int;
    BlendTable t;
    auto h = expect_line(in, "kinenc-table");
    if (h.size() != 2 || h[1] != "1") throw ParseError("unsupported table version", 1, "version");
    auto e = expect_line(in, "e_des");
    if (e.size() != 2) throw ParseError("bad e_des record", 2, "e_des");
    t.e_des = static_cast<int>(to_int(e[1], "e_des"));
    if (t.e_des != 0 && t.e_des != 1) throw ParseError("e_des must be 0 or 1", 2, "e_des");
    auto g = expect_line(in, "grid");
    if (g.size() != 2) throw ParseError("bad grid record", 3, "grid");
    t.grid = BlendGrid(static_cast<int>(to_int(g[1], "grid")));
    auto c = expect_line(in, "classifier");
    if (c.size() != 2) throw ParseError("bad classifier record", 4, "classifier");
    t.classifier_fingerprint = c[1];
    auto ids = [&](const std::string& tag, std::size_t line) {
        auto r = expect_line(in, tag);
        if (r.size() < 2) throw ParseError("truncated id list", line, tag);
        const auto n = static_cast<std::size_t>(to_int(r[1], tag));
        if (r.size() != n + 2) throw ParseError("id count does not match", line, tag);
        return std::vector<std::string>(r.begin() + 2, r.end());
    };
    t.not_encoded_ids = ids("not_encoded", 5);
    t.encoded_ids = ids("encoded", 6);
    t.index.reserve(t.rows() * t.cols());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        auto r = expect_line(in, "row");
        if (r.size() != t.cols() + 2 || static_cast<std::size_t>(to_int(r[1], "row")) != i)
            throw ParseError("malformed row " + std::to_string(i), 7 + i, "row");
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const auto k = to_int(r[2 + j], "row");
            if (k < 0 || k > t.grid.intervals()) throw ParseError("grid index out of range", 7 + i, "row");
            t.index.push_back(static_cast<int>(k));
        }
    }
    return t;
}

inline void save(const BlendTable& t, const std::string& path) { text::write_file(path, serialize(t)); }
inline BlendTable load_table(const std::string& path) { return parse_table(text::read_file(path)); }

/// Coefficient matrix for heatmaps: one row per not-encoded sample, one
/// column per encoded sample.
inline std::string table_csv(const BlendTable& t) {
    std::string out = "not_encoded_id";
    for (const auto& id : t.encoded_ids) out += ',' + id;
    out += '\n';
    for (std::size_t i = 0; i < t.rows(); ++i) {
        out += t.not_encoded_ids[i];
        for (std::size_t j = 0; j < t.cols(); ++j) out += ',' + text::format_real(t.at(i, j));
        out += '\n';
    }
    return out;
}

} // namespace kinenc
