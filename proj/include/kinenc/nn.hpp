#pragma once

// Minimal fully connected network shared by the encoding classifier and the
// Q-network: ReLU hidden layers, sigmoid or linear output, inverted dropout on
// hidden units during training, backpropagation and Adam.
//
// Batches are column-major: one sample per column.

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kinenc/error.hpp"
#include "kinenc/random.hpp"
#include "kinenc/text_io.hpp"

namespace kinenc::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Output { Sigmoid, Linear };

struct DenseLayer {
    Matrix weight;  ///< out x in
    Vector bias;    ///< out
};

struct Gradients {
    std::vector<Matrix> weight;
    std::vector<Vector> bias;
};

/// Activations recorded by a training forward pass.
struct Tape {
    std::vector<Matrix> inputs;  ///< input to each layer (post-activation, post-dropout)
    std::vector<Matrix> masks;   ///< dropout mask per hidden layer (already scaled)
    std::vector<Matrix> pre;     ///< pre-activation per layer
    Matrix output;
};

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

class Mlp {
public:
    Mlp() = default;

    /// Zero-initialized network with layer sizes `dims` (input first).
    Mlp(std::vector<int> dims, Output out) : dims_(std::move(dims)), out_(out) {
        if (dims_.size() < 2) throw ShapeError("network needs at least an input and an output layer");
        for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
            if (dims_[l] < 1 || dims_[l + 1] < 1) throw ShapeError("layer sizes must be positive");
            layers_.push_back({Matrix::Zero(dims_[l + 1], dims_[l]), Vector::Zero(dims_[l + 1])});
        }
    }

    /// Xavier-uniform weights, zero biases.
    static Mlp xavier(std::vector<int> dims, Output out, Rng& rng) {
        Mlp m(std::move(dims), out);
        for (auto& layer : m.layers_) {
            const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.rows() + layer.weight.cols()));
            std::uniform_real_distribution<double> u(-limit, limit);
            for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
                for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) layer.weight(i, j) = u(rng);
        }
        return m;
    }

    const std::vector<int>& dims() const { return dims_; }
    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }
    Output output_activation() const { return out_; }
    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    /// Inference; dropout is never applied here.
    Matrix forward(const Matrix& x) const {
        if (x.rows() != input_dim()) throw ShapeError("network input has " + std::to_string(x.rows()) +
                                                      " rows, expected " + std::to_string(input_dim()));
        Matrix a = x;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            Matrix z = (layers_[l].weight * a).colwise() + layers_[l].bias;
            a = is_last(l) ? activate_output(z) : z.cwiseMax(0.0);
        }
        return a;
    }

    Vector forward(const Vector& x) const { return forward(Matrix(x)).col(0); }

    /// Continues inference from the pre-activation of layer `layer`.
    Matrix forward_from(std::size_t layer, const Matrix& pre_activation) const {
        Matrix a = is_last(layer) ? activate_output(pre_activation) : Matrix(pre_activation.cwiseMax(0.0));
        for (std::size_t l = layer + 1; l < layers_.size(); ++l) {
            Matrix z = (layers_[l].weight * a).colwise() + layers_[l].bias;
            a = is_last(l) ? activate_output(z) : z.cwiseMax(0.0);
        }
        return a;
    }

    /// Training forward pass. `dropout` is the drop probability on hidden units.
    Tape forward_train(const Matrix& x, double dropout, Rng& rng) const {
        if (x.rows() != input_dim()) throw ShapeError("network input has wrong dimension");
        Tape tape;
        Matrix a = x;
        std::bernoulli_distribution keep(1.0 - dropout);
        const double scale = dropout > 0.0 ? 1.0 / (1.0 - dropout) : 1.0;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            tape.inputs.push_back(a);
            Matrix z = (layers_[l].weight * a).colwise() + layers_[l].bias;
            tape.pre.push_back(z);
            if (is_last(l)) {
                a = activate_output(z);
            } else {
                a = z.cwiseMax(0.0);
                Matrix mask = Matrix::Constant(a.rows(), a.cols(), 1.0);
                if (dropout > 0.0)
                    for (Eigen::Index j = 0; j < mask.cols(); ++j)
                        for (Eigen::Index i = 0; i < mask.rows(); ++i) mask(i, j) = keep(rng) ? scale : 0.0;
                a = a.cwiseProduct(mask);
                tape.masks.push_back(std::move(mask));
            }
        }
        tape.output = a;
        return tape;
    }

    /// Backpropagates `delta`, the loss gradient w.r.t. the output layer's
    /// pre-activation (one column per sample).
    Gradients backward(const Tape& tape, Matrix delta) const {
        Gradients g;
        g.weight.resize(layers_.size());
        g.bias.resize(layers_.size());
        for (std::size_t l = layers_.size(); l-- > 0;) {
            g.weight[l] = delta * tape.inputs[l].transpose();
            g.bias[l] = delta.rowwise().sum();
            if (l == 0) break;
            Matrix up = layers_[l].weight.transpose() * delta;
            const Matrix& z = tape.pre[l - 1];
            const Matrix& mask = tape.masks[l - 1];
            delta = up.cwiseProduct(mask).cwiseProduct((z.array() > 0.0).cast<double>().matrix());
        }
        return g;
    }

    bool all_finite() const {
        for (const auto& l : layers_)
            if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
        return true;
    }

    bool operator==(const Mlp& o) const {
        if (dims_ != o.dims_ || out_ != o.out_) return false;
        for (std::size_t l = 0; l < layers_.size(); ++l)
            if (layers_[l].weight != o.layers_[l].weight || layers_[l].bias != o.layers_[l].bias) return false;
        return true;
    }

private:
    bool is_last(std::size_t l) const { return l + 1 == layers_.size(); }

    Matrix activate_output(const Matrix& z) const {
        if (out_ == Output::Linear) return z;
        return z.unaryExpr([](double v) { return sigmoid(v); });
    }

    std::vector<int> dims_;
    Output out_ = Output::Linear;
    std::vector<DenseLayer> layers_;
};

class Adam {
public:
    Adam() = default;
    Adam(const Mlp& net, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(learning_rate), b1_(beta1), b2_(beta2), eps_(eps) {
        for (const auto& l : net.layers()) {
            mw_.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
            vw_.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
            mb_.push_back(Vector::Zero(l.bias.size()));
            vb_.push_back(Vector::Zero(l.bias.size()));
        }
    }

    void step(Mlp& net, const Gradients& g) {
        ++t_;
        const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
        auto& layers = net.layers();
        for (std::size_t l = 0; l < layers.size(); ++l) {
            update(layers[l].weight, g.weight[l], mw_[l], vw_[l], c1, c2);
            update(layers[l].bias, g.bias[l], mb_[l], vb_[l], c1, c2);
        }
    }

    long steps() const { return t_; }

private:
    template <class P, class G>
    void update(P& p, const G& g, P& m, P& v, double c1, double c2) {
        m = b1_ * m + (1.0 - b1_) * g;
        v = b2_ * v + (1.0 - b2_) * g.cwiseProduct(g);
        p.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    }

    double lr_ = 1e-3, b1_ = 0.9, b2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    std::vector<Matrix> mw_, vw_;
    std::vector<Vector> mb_, vb_;
};

// ---------------------------------------------------------------------------
// Text serialization:
//
//   network <n_layers+1> <dim0> <dim1> ... <sigmoid|linear>
//   weight <l> <rows> <cols> <row-major values...>
//   bias <l> <size> <values...>

inline void write(std::ostream& out, const Mlp& net) {
    out << "network " << net.dims().size();
    for (int d : net.dims()) out << ' ' << d;
    out << ' ' << (net.output_activation() == Output::Sigmoid ? "sigmoid" : "linear") << '\n';
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        const auto& L = net.layers()[l];
        out << "weight " << l << ' ' << L.weight.rows() << ' ' << L.weight.cols();
        for (Eigen::Index i = 0; i < L.weight.rows(); ++i)
            for (Eigen::Index j = 0; j < L.weight.cols(); ++j) out << ' ' << text::format_real(L.weight(i, j));
        out << '\n';
        out << "bias " << l << ' ' << L.bias.size();
        for (Eigen::Index i = 0; i < L.bias.size(); ++i) out << ' ' << text::format_real(L.bias(i));
        out << '\n';
    }
}

namespace detail {

inline std::vector<std::string> expect_line(std::istream& in, const std::string& tag) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("unexpected end of file", 0, tag);
    auto t = text::tokens(line);
    if (t.empty() || t[0] != tag) throw ParseError("expected '" + tag + "' record", 0, tag);
    return t;
}

inline long long to_int(const std::string& s, const std::string& field) {
    long long v = 0;
    if (!text::parse_int(s, v)) throw ParseError("not an integer: '" + s + "'", 0, field);
    return v;
}

inline double to_real(const std::string& s, const std::string& field) {
    double v = 0.0;
    if (!text::parse_real(s, v) || !std::isfinite(v)) throw ParseError("not a finite real: '" + s + "'", 0, field);
    return v;
}

} // namespace detail

inline Mlp read(std::istream& in) {
    auto t = detail::expect_line(in, "network");
    if (t.size() < 3) throw ParseError("truncated network record", 0, "network");
    const auto n = static_cast<std::size_t>(detail::to_int(t[1], "network"));
    if (t.size() != n + 3) throw ParseError("network record has wrong arity", 0, "network");
    std::vector<int> dims;
    for (std::size_t i = 0; i < n; ++i) dims.push_back(static_cast<int>(detail::to_int(t[2 + i], "network")));
    Output out;
    if (t.back() == "sigmoid") out = Output::Sigmoid;
    else if (t.back() == "linear") out = Output::Linear;
    else throw ParseError("unknown output activation", 0, "network");
    Mlp net(dims, out);
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        auto& L = net.layers()[l];
        auto w = detail::expect_line(in, "weight");
        if (w.size() != 4 + static_cast<std::size_t>(L.weight.size()) ||
            detail::to_int(w[2], "weight") != L.weight.rows() || detail::to_int(w[3], "weight") != L.weight.cols())
            throw ParseError("weight record does not match layer shape", 0, "weight");
        std::size_t k = 4;
        for (Eigen::Index i = 0; i < L.weight.rows(); ++i)
            for (Eigen::Index j = 0; j < L.weight.cols(); ++j) L.weight(i, j) = detail::to_real(w[k++], "weight");
        auto b = detail::expect_line(in, "bias");
        if (b.size() != 3 + static_cast<std::size_t>(L.bias.size()))
            throw ParseError("bias record does not match layer shape", 0, "bias");
        for (Eigen::Index i = 0; i < L.bias.size(); ++i) L.bias(i) = detail::to_real(b[3 + static_cast<std::size_t>(i)], "bias");
    }
    return net;
}

} // namespace kinenc::nn
