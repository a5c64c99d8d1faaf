#pragma once

// Terminal-position correction on top of the blended alteration. A DQN picks,
// per axis, whether to add the feedback term k_u (p_h - p_a) to the nominal
// altered velocity so the altered hand ends where the human hand ends.

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "kinenc/blend_solver.hpp"
#include "kinenc/error.hpp"
#include "kinenc/nn.hpp"
#include "kinenc/online_controller.hpp"
#include "kinenc/parallel.hpp"
#include "kinenc/random.hpp"
#include "kinenc/signals.hpp"
#include "kinenc/text_io.hpp"

namespace kinenc {

struct CorrectionConfig {
    double k_u = 10.0;        ///< s^-1
    double delta_pos = 20.0;  ///< mm
    double k_r = 0.01;
    double k_alpha = 10.0;
    double r_in = 100.0;
    double r_exit = -1000.0;
    double gamma = 0.99;

    void validate() const {
        if (!(k_u > 0.0) || !std::isfinite(k_u)) throw ConfigError("correction: k_u must be positive");
        if (!(delta_pos > 0.0) || !std::isfinite(delta_pos)) throw ConfigError("correction: delta_pos must be positive");
        if (!(k_r > 0.0) || !(k_alpha > 0.0)) throw ConfigError("correction: k_r and k_alpha must be positive");
        if (!(r_exit < 0.0 && 0.0 < r_in)) throw ConfigError("correction: need r_exit < 0 < r_in");
        if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("correction: gamma must be in [0,1]");
    }

    bool operator==(const CorrectionConfig&) const = default;
};

inline int action_count(int rho) {
    if (rho < 1 || rho > 16) throw DomainError("action space: rho out of range");
    return 1 << rho;
}

/// Bit k of the index switches the correction on for axis k.
inline std::vector<int> decode_action(int index, int rho) {
    if (index < 0 || index >= action_count(rho))
        throw DomainError("action index " + std::to_string(index) + " outside [0, " + std::to_string(action_count(rho)) + ")");
    std::vector<int> alpha(static_cast<std::size_t>(rho));
    for (int k = 0; k < rho; ++k) alpha[static_cast<std::size_t>(k)] = (index >> k) & 1;
    return alpha;
}

/// Terminal-condition part of the reward.
inline double condition_reward(bool g, bool g_prev, const CorrectionConfig& cfg) {
    if (g) return cfg.r_in;
    if (g_prev) return cfg.r_exit;
    return 0.0;
}

inline double reward(std::span<const double> p_h, std::span<const double> p_a, std::span<const int> alpha, bool g,
                     bool g_prev, const CorrectionConfig& cfg) {
    if (p_h.size() != p_a.size()) throw ShapeError("reward: position sizes differ");
    const double gap = std::sqrt(squared_distance(p_h, p_a));
    int amax = 0;
    for (int a : alpha) amax = std::max(amax, a != 0 ? 1 : 0);
    return -cfg.k_r * gap - cfg.k_alpha * amax + condition_reward(g, g_prev, cfg);
}

// ---------------------------------------------------------------------------
// Episodes

/// One human signal with the nominal altered velocity produced for it.
struct EpisodeSpec {
    std::string id;
    MotionSignal v_h;
    MotionSignal nominal;  ///< blended v_a without correction
    std::vector<double> p0;

    /// Steps simulated: up to the nominal motion's end, never short of the
    /// terminal instant of v_h.
    int horizon() const {
        const int t_term = terminal_instant(v_h).instant;
        return std::clamp(std::max(nominal.effective_length(), t_term - 1), 1, v_h.length());
    }
};

inline EpisodeSpec episode_from(const std::string& id, const SessionResult& r, std::span<const double> p0) {
    return {id, r.v_h, r.v_a, std::vector<double>(p0.begin(), p0.end())};
}

struct StepRecord {
    int action = 0;
    double reward = 0.0;
    double gap = 0.0;  ///< after the step [mm]
    bool inside = false;
};

/// Rewards r(1..H); r(t) is earned for the position reached after step t.
struct EpisodeTrace {
    std::vector<StepRecord> steps;
    int t_star = 0;   ///< reward index of the terminal instant of v_h
    bool complete = false;
    bool terminal_satisfied = false;
};

class CorrectionEnv {
public:
    CorrectionEnv(const EpisodeSpec& spec, const CorrectionConfig& cfg) : spec_(&spec), cfg_(cfg) {
        cfg_.validate();
        rho_ = spec.v_h.rho();
        if (!spec.v_h.config().compatible(spec.nominal.config())) throw ShapeError("env: signal configurations differ");
        if (spec.p0.size() != static_cast<std::size_t>(rho_)) throw ShapeError("env: initial position has wrong size");
        horizon_ = spec.horizon();
        const auto r = static_cast<std::size_t>(rho_);
        p_h_.assign(static_cast<std::size_t>(horizon_ + 1) * r, 0.0);
        p_a_ = p_h_;
        std::copy(spec.p0.begin(), spec.p0.end(), p_h_.begin());
        std::copy(spec.p0.begin(), spec.p0.end(), p_a_.begin());
        const auto nominal = spec.nominal.values();
        v_a_.assign(nominal.begin(), nominal.end());
        trace_.t_star = terminal_instant(spec.v_h).instant - 1;
    }

    int rho() const { return rho_; }
    int horizon() const { return horizon_; }
    int time() const { return t_; }
    bool done() const { return t_ >= horizon_; }
    const EpisodeTrace& trace() const { return trace_; }

    /// [p_h; p_a; v_h; nominal v_a] at the current step, in mm and mm/s.
    std::vector<double> state() const {
        std::vector<double> xi;
        xi.reserve(static_cast<std::size_t>(4 * rho_));
        const int t = std::min(t_, horizon_);
        const auto t_row = [&](const std::vector<double>& v) { return v.begin() + static_cast<std::ptrdiff_t>(t * rho_); };
        xi.insert(xi.end(), t_row(p_h_), t_row(p_h_) + rho_);
        xi.insert(xi.end(), t_row(p_a_), t_row(p_a_) + rho_);
        const int s = std::min(t, spec_->v_h.length() - 1);
        const auto vh = spec_->v_h.sample(s);
        const auto va = spec_->nominal.sample(s);
        xi.insert(xi.end(), vh.begin(), vh.end());
        xi.insert(xi.end(), va.begin(), va.end());
        return xi;
    }

    struct Step {
        std::vector<double> state;
        double reward;
        bool done;
    };

    Step step(int action) {
        if (done()) throw ProtocolError("env: step after the episode ended");
        const auto alpha = decode_action(action, rho_);
        const auto r = static_cast<std::size_t>(rho_);
        const auto t = static_cast<std::size_t>(t_);
        const double dt = spec_->v_h.config().dt;
        for (std::size_t k = 0; k < r; ++k) {
            if (alpha[k]) v_a_[t * r + k] += cfg_.k_u * (p_h_[t * r + k] - p_a_[t * r + k]);
            p_h_[(t + 1) * r + k] = p_h_[t * r + k] + dt * spec_->v_h(t_, static_cast<int>(k));
            p_a_[(t + 1) * r + k] = p_a_[t * r + k] + dt * v_a_[t * r + k];
        }
        ++t_;
        const std::span<const double> ph(p_h_.data() + t * r + r, r), pa(p_a_.data() + t * r + r, r);
        const double gap = std::sqrt(squared_distance(ph, pa));
        const bool inside = gap <= cfg_.delta_pos;
        const double rew = reward(ph, pa, alpha, inside, g_prev_, cfg_);
        g_prev_ = inside;
        trace_.steps.push_back({action, rew, gap, inside});
        if (t_ == trace_.t_star) trace_.terminal_satisfied = inside;
        if (done()) {
            trace_.complete = true;
            if (trace_.t_star == 0) trace_.terminal_satisfied = true;
        }
        return {state(), rew, done()};
    }

    /// Altered velocity with the corrections applied so far.
    MotionSignal altered_velocity() const {
        return MotionSignal(spec_->nominal.config(), v_a_, std::max(spec_->nominal.effective_length(), std::max(t_, 1)));
    }

private:
    const EpisodeSpec* spec_;
    CorrectionConfig cfg_;
    int rho_ = 3;
    int horizon_ = 0;
    int t_ = 0;
    bool g_prev_ = true;  // p_a(0) = p_h(0)
    std::vector<double> p_h_, p_a_, v_a_;
    EpisodeTrace trace_;
};

/// Σ_{t=1}^{H} γ^t r(t).
inline double discounted_return(const EpisodeTrace& trace, double gamma) {
    double sum = 0.0, w = 1.0;
    for (const auto& s : trace.steps) {
        w *= gamma;
        sum += w * s.reward;
    }
    return sum;
}

struct Guarantee {
    double reward_sum = 0.0;
    double bound_sigma = 0.0;
    bool implies_constraint = false;
};

/// Largest discounted return any trace of this horizon can collect while
/// missing the ball at t_star: a dynamic program over the in/out sequence
/// using the per-step reward ceilings (r_in inside, r_exit - k_r delta on an
/// exit, -k_r delta outside).
inline double violation_bound(int horizon, int t_star, const CorrectionConfig& cfg) {
    if (t_star < 1 || t_star > horizon) return -std::numeric_limits<double>::infinity();
    const double ninf = -std::numeric_limits<double>::infinity();
    double in = 0.0, out = ninf, w = 1.0;
    for (int t = 1; t <= horizon; ++t) {
        w *= cfg.gamma;
        const double stay_out = -cfg.k_r * cfg.delta_pos;
        const double next_out = std::max(in + w * (cfg.r_exit + stay_out), out + w * stay_out);
        const double next_in = t == t_star ? ninf : std::max(in, out) + w * cfg.r_in;
        in = next_in;
        out = next_out;
    }
    const double bound = std::max(in, out);
    return bound + 1e-9 * (std::abs(bound) + 1.0);
}

inline Guarantee check_guarantee(const EpisodeTrace& trace, const CorrectionConfig& cfg) {
    if (!trace.complete) throw ProtocolError("check_guarantee: episode trace is incomplete");
    Guarantee g;
    g.reward_sum = discounted_return(trace, cfg.gamma);
    g.bound_sigma = violation_bound(static_cast<int>(trace.steps.size()), trace.t_star, cfg);
    g.implies_constraint = g.reward_sum > g.bound_sigma;
    return g;
}

// ---------------------------------------------------------------------------
// Agent

inline constexpr double kStateScale = 1e-3;  // mm -> m, mm/s -> m/s
inline constexpr double kGapScale = 0.05;    // 1/mm, 20 mm -> 1

/// Q-network input: [p_h - p_a; p_a; v_h; v_a], gap in units of 20 mm, the
/// rest in m and m/s.
inline nn::Vector network_input(std::span<const double> state) {
    const auto n = static_cast<Eigen::Index>(state.size());
    const Eigen::Index rho = n / 4;
    nn::Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = state[static_cast<std::size_t>(i)] * kStateScale;
    for (Eigen::Index k = 0; k < rho; ++k)
        x(k) = (state[static_cast<std::size_t>(k)] - state[static_cast<std::size_t>(rho + k)]) * kGapScale;
    return x;
}

struct AgentModel {
    int rho = 3;
    CorrectionConfig correction;
    nn::Mlp q;
    nn::Mlp target;
    double epsilon = 1.0;

    int actions() const { return action_count(rho); }

    int greedy(std::span<const double> state) const {
        const nn::Vector v = q.forward(network_input(state));
        Eigen::Index best = 0;
        for (Eigen::Index a = 1; a < v.size(); ++a)
            if (v(a) > v(best)) best = a;
        return static_cast<int>(best);
    }

    bool operator==(const AgentModel& o) const {
        return rho == o.rho && correction == o.correction && q == o.q && target == o.target && epsilon == o.epsilon;
    }
};

struct AgentTrainConfig {
    int episodes = 1100;
    int hidden = 128;
    double learning_rate = 1e-3;
    int batch = 64;
    std::size_t replay_capacity = 50000;
    std::size_t learning_starts = 1000;
    double epsilon_start = 1.0;
    double epsilon_decay = 0.995;
    double epsilon_min = 0.05;
    double reward_scale = 0.01;  ///< applied to rewards inside the TD targets only
    double huber_delta = 1.0;
    int train_every = 1;
    std::uint64_t seed = 1;

    void validate() const {
        if (episodes < 0) throw ConfigError("agent: episodes must be >= 0");
        if (hidden < 1 || batch < 1 || train_every < 1) throw ConfigError("agent: hidden, batch and train_every must be positive");
        if (!(learning_rate > 0.0)) throw ConfigError("agent: learning rate must be positive");
        if (replay_capacity < static_cast<std::size_t>(batch)) throw ConfigError("agent: replay buffer smaller than a batch");
        if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0) || !(epsilon_min >= 0.0 && epsilon_min <= 1.0) ||
            !(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
            throw ConfigError("agent: exploration parameters out of range");
        if (!(reward_scale > 0.0) || !(huber_delta > 0.0)) throw ConfigError("agent: reward scale and huber delta must be positive");
    }
};

struct TrainingLogRow {
    int episode = 0;
    double cumulative_discounted_reward = 0.0;
    double epsilon = 0.0;
    double moving_avg_100 = 0.0;
};

struct AgentTrainResult {
    AgentModel agent;
    std::vector<TrainingLogRow> log;
};

class ReplayBuffer {
public:
    struct Transition {
        nn::Vector state;
        int action;
        double reward;
        nn::Vector next;
        bool done;
    };

    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw ConfigError("replay buffer capacity must be positive");
    }

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }

    void push(Transition t) {
        if (items_.size() < capacity_) {
            items_.push_back(std::move(t));
        } else {
            items_[next_] = std::move(t);
            next_ = (next_ + 1) % capacity_;
        }
    }

    const Transition& operator[](std::size_t i) const { return items_[i]; }

    std::vector<std::size_t> sample(std::size_t n, Rng& rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
        std::vector<std::size_t> out(n);
        for (auto& i : out) i = pick(rng);
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

namespace detail {

inline double huber_grad(double d, double delta) { return std::clamp(d, -delta, delta); }

/// One DQN step on a minibatch; returns the mean Huber loss.
inline double dqn_update(AgentModel& agent, nn::Adam& opt, const ReplayBuffer& buffer, const std::vector<std::size_t>& idx,
                         const AgentTrainConfig& tc, Rng& rng) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    const auto dim = static_cast<Eigen::Index>(agent.q.input_dim());
    nn::Matrix s(dim, n), s2(dim, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& tr = buffer[idx[static_cast<std::size_t>(j)]];
        s.col(j) = tr.state;
        s2.col(j) = tr.next;
    }
    const nn::Matrix q_next = agent.target.forward(s2);
    const auto tape = agent.q.forward_train(s, 0.0, rng);
    nn::Matrix delta = nn::Matrix::Zero(tape.output.rows(), n);
    double loss = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& tr = buffer[idx[static_cast<std::size_t>(j)]];
        double y = tc.reward_scale * tr.reward;
        if (!tr.done) y += agent.correction.gamma * q_next.col(j).maxCoeff();
        const double d = tape.output(tr.action, j) - y;
        const double a = std::abs(d);
        loss += a <= tc.huber_delta ? 0.5 * d * d : tc.huber_delta * (a - 0.5 * tc.huber_delta);
        delta(tr.action, j) = huber_grad(d, tc.huber_delta) / static_cast<double>(n);
    }
    opt.step(agent.q, agent.q.backward(tape, delta));
    return loss / static_cast<double>(n);
}

} // namespace detail

inline AgentModel make_agent(int rho, const CorrectionConfig& cfg, int hidden, Rng& rng) {
    AgentModel a;
    a.rho = rho;
    a.correction = cfg;
    a.q = nn::Mlp::xavier({4 * rho, hidden, hidden, action_count(rho)}, nn::Output::Linear, rng);
    a.target = a.q;
    return a;
}

/// Trains on episodes drawn uniformly from `episodes`.
inline AgentTrainResult train_agent(const std::vector<EpisodeSpec>& episodes, const CorrectionConfig& cfg,
                                    const AgentTrainConfig& tc) {
    cfg.validate();
    tc.validate();
    if (episodes.empty()) throw ConfigError("train_agent: no training episodes");
    const int rho = episodes.front().v_h.rho();
    auto init_rng = make_rng(tc.seed, "agent-init");
    auto order_rng = make_rng(tc.seed, "agent-episodes");
    auto explore_rng = make_rng(tc.seed, "agent-explore");
    auto replay_rng = make_rng(tc.seed, "agent-replay");

    AgentTrainResult res;
    res.agent = make_agent(rho, cfg, tc.hidden, init_rng);
    auto& agent = res.agent;
    nn::Adam opt(agent.q, tc.learning_rate);
    ReplayBuffer buffer(tc.replay_capacity);
    std::uniform_int_distribution<std::size_t> pick_episode(0, episodes.size() - 1);
    std::uniform_int_distribution<int> pick_action(0, agent.actions() - 1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    double epsilon = tc.epsilon_start;
    std::deque<double> window;
    double window_sum = 0.0;
    long steps = 0;
    for (int e = 0; e < tc.episodes; ++e) {
        const auto& spec = episodes[pick_episode(order_rng)];
        CorrectionEnv env(spec, cfg);
        auto state = env.state();
        while (!env.done()) {
            const int action = u01(explore_rng) < epsilon ? pick_action(explore_rng) : agent.greedy(state);
            auto step = env.step(action);
            buffer.push({network_input(state), action, step.reward, network_input(step.state), step.done});
            state = std::move(step.state);
            ++steps;
            if (buffer.size() >= std::max<std::size_t>(tc.learning_starts, static_cast<std::size_t>(tc.batch)) &&
                steps % tc.train_every == 0) {
                const double loss = detail::dqn_update(agent, opt, buffer, buffer.sample(static_cast<std::size_t>(tc.batch), replay_rng),
                                                       tc, replay_rng);
                if (!std::isfinite(loss) || !agent.q.all_finite())
                    throw TrainingError("Q-network diverged (non-finite loss or weights)", e + 1);
            }
        }
        agent.target = agent.q;

        const double ret = discounted_return(env.trace(), cfg.gamma);
        window.push_back(ret);
        window_sum += ret;
        if (window.size() > 100) {
            window_sum -= window.front();
            window.pop_front();
        }
        res.log.push_back({e + 1, ret, epsilon, window_sum / static_cast<double>(window.size())});
        epsilon = std::max(tc.epsilon_min, epsilon * tc.epsilon_decay);
    }
    agent.epsilon = epsilon;
    return res;
}

/// Nominal trajectories come from the causal online controller, or from the
/// frozen offline coefficient.
enum class NominalSource { Online, Offline };

inline EpisodeSpec make_episode(const LabeledSample& s, const PartitionedDataset& part, const BlendTable& table,
                                const EncoderModel& model, const OnlineSchedule& schedule, NominalSource source) {
    if (source == NominalSource::Online) {
        const auto r = run_online(s.velocity, s.initial_position, part, table, model, schedule);
        return episode_from(s.id, r, s.initial_position);
    }
    const auto off = solve_offline(s.velocity, part, table, model);
    return {s.id, s.velocity, off.v_a, s.initial_position};
}

inline std::vector<EpisodeSpec> make_episodes(const std::vector<std::size_t>& samples, const PartitionedDataset& part,
                                              const BlendTable& table, const EncoderModel& model,
                                              const OnlineSchedule& schedule, NominalSource source, int workers = 1) {
    std::vector<EpisodeSpec> out(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t i) {
        out[i] = make_episode(part.sample(samples[i]), part, table, model, schedule, source);
    });
    return out;
}

struct CorrectedOutcome {
    EpisodeTrace trace;
    Guarantee guarantee;
    MotionSignal v_a;
    MotionSignal p_a;
    double terminal_gap = 0.0;  ///< at the terminal instant of v_h [mm]
};

/// Greedy rollout of a trained agent.
inline CorrectedOutcome run_corrected(const AgentModel& agent, const EpisodeSpec& spec) {
    if (spec.v_h.rho() != agent.rho) throw ShapeError("agent was trained for a different dimension");
    CorrectionEnv env(spec, agent.correction);
    while (!env.done()) env.step(agent.greedy(env.state()));
    CorrectedOutcome out;
    out.trace = env.trace();
    out.guarantee = check_guarantee(out.trace, agent.correction);
    out.v_a = env.altered_velocity();
    out.p_a = integrate(out.v_a, spec.p0);
    const auto p_h = integrate(spec.v_h, spec.p0);
    const int t = terminal_instant(spec.v_h).instant - 1;
    out.terminal_gap = std::sqrt(squared_distance(p_h.sample(t), out.p_a.sample(t)));
    return out;
}

// ---------------------------------------------------------------------------
// Agent file:
//
//   kinenc-agent 1
//   actions <2^rho> rho <rho>
//   correction <k_u> <delta_pos> <k_r> <k_alpha> <r_in> <r_exit> <gamma>
//   epsilon <value>
//   q  + network records
//   target + network records

inline std::string serialize(const AgentModel& a) {
    std::ostringstream out;
    const auto& c = a.correction;
    out << "kinenc-agent 1\n";
    out << "actions " << a.actions() << " rho " << a.rho << '\n';
    out << "correction";
    for (double v : {c.k_u, c.delta_pos, c.k_r, c.k_alpha, c.r_in, c.r_exit, c.gamma}) out << ' ' << text::format_real(v);
    out << '\n';
    out << "epsilon " << text::format_real(a.epsilon) << '\n';
    out << "q\n";
    nn::write(out, a.q);
    out << "target\n";
    nn::write(out, a.target);
    return out.str();
}

inline AgentModel parse_agent(const std::string& content) {
    std::istringstream in(content);
    const auto head = nn::detail::expect_line(in, "kinenc-agent");
    if (head.size() != 2 || head[1] != "1") throw ParseError("unsupported agent file version", 1, "kinenc-agent");
    AgentModel a;
    const auto act = nn::detail::expect_line(in, "actions");
    if (act.size() != 4 || act[2] != "rho") throw ParseError("malformed actions record", 2, "actions");
    a.rho = static_cast<int>(nn::detail::to_int(act[3], "rho"));
    if (a.rho < 1 || a.rho > 16 || nn::detail::to_int(act[1], "actions") != action_count(a.rho))
        throw ParseError("action count does not match rho", 2, "actions");
    const auto c = nn::detail::expect_line(in, "correction");
    if (c.size() != 8) throw ParseError("correction record needs 7 values", 3, "correction");
    auto& k = a.correction;
    double* fields[] = {&k.k_u, &k.delta_pos, &k.k_r, &k.k_alpha, &k.r_in, &k.r_exit, &k.gamma};
    for (std::size_t i = 0; i < 7; ++i) *fields[i] = nn::detail::to_real(c[i + 1], "correction");
    const auto eps = nn::detail::expect_line(in, "epsilon");
    if (eps.size() != 2) throw ParseError("malformed epsilon record", 4, "epsilon");
    a.epsilon = nn::detail::to_real(eps[1], "epsilon");
    nn::detail::expect_line(in, "q");
    a.q = nn::read(in);
    nn::detail::expect_line(in, "target");
    a.target = nn::read(in);
    for (const auto* net : {&a.q, &a.target})
        if (net->input_dim() != 4 * a.rho || net->output_dim() != a.actions())
            throw ParseError("Q-network shape does not match the action space", 0, "network");
    try {
        k.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), 3, "correction");
    }
    return a;
}

inline void save(const AgentModel& a, const std::string& path) { text::write_file(path, serialize(a)); }
inline AgentModel load_agent(const std::string& path) { return parse_agent(text::read_file(path)); }

/// episode, cumulative_discounted_reward, epsilon, moving_avg_100
inline std::string training_log_csv(const std::vector<TrainingLogRow>& log) {
    std::string out = "episode,cumulative_discounted_reward,epsilon,moving_avg_100\n";
    for (const auto& r : log)
        out += std::to_string(r.episode) + ',' + text::format_real(r.cumulative_discounted_reward) + ',' +
               text::format_real(r.epsilon) + ',' + text::format_real(r.moving_avg_100) + '\n';
    return out;
}

} // namespace kinenc
