#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace kinenc;
using kinenc::testing::small_pipeline;
using kinenc::testing::TempDir;

namespace {

// Exhaustive search over every in/out sequence that is out at t_star, scoring
// each step with the largest reward the outcome allows.
double brute_bound(int horizon, int t_star, const CorrectionConfig& c) {
    double best = -INFINITY;
    for (unsigned mask = 0; mask < (1u << horizon); ++mask) {
        if ((mask >> (t_star - 1)) & 1u) continue;
        double sum = 0.0;
        bool prev = true;
        for (int t = 1; t <= horizon; ++t) {
            const bool in = (mask >> (t - 1)) & 1u;
            double r = in ? c.r_in : -c.k_r * c.delta_pos + (prev ? c.r_exit : 0.0);
            sum += std::pow(c.gamma, t) * r;
            prev = in;
        }
        best = std::max(best, sum);
    }
    return best;
}

EpisodeSpec constant_spec(int len, std::vector<double> v_h, std::vector<double> v_nom) {
    SignalConfig cfg;
    std::vector<double> h, a;
    for (int t = 0; t < len; ++t) {
        h.insert(h.end(), v_h.begin(), v_h.end());
        a.insert(a.end(), v_nom.begin(), v_nom.end());
    }
    return {"c", MotionSignal(cfg, h), MotionSignal(cfg, a), {0.0, 0.0, 0.0}};
}

EpisodeTrace rollout(const EpisodeSpec& spec, const CorrectionConfig& cfg, int action) {
    CorrectionEnv env(spec, cfg);
    while (!env.done()) env.step(action);
    return env.trace();
}

} // namespace

TEST(Actions, DecodeExamples) {
    EXPECT_EQ(action_count(3), 8);
    EXPECT_EQ(decode_action(0, 3), (std::vector<int>{0, 0, 0}));
    EXPECT_EQ(decode_action(7, 3), (std::vector<int>{1, 1, 1}));
    EXPECT_EQ(decode_action(5, 3), (std::vector<int>{1, 0, 1}));
    EXPECT_EQ(decode_action(2, 3), (std::vector<int>{0, 1, 0}));
    EXPECT_THROW(decode_action(8, 3), DomainError);
    EXPECT_THROW(decode_action(-1, 3), DomainError);
    EXPECT_THROW(action_count(0), DomainError);
}

TEST(Reward, Examples) {
    const CorrectionConfig c;
    const std::vector<double> o{0, 0, 0};
    const std::vector<int> on{1, 0, 0}, off{0, 0, 0};
    EXPECT_NEAR(reward(o, std::vector<double>{100, 0, 0}, on, false, false, c), -11.0, 1e-12);
    EXPECT_EQ(reward(o, o, off, true, true, c), c.r_in);
    EXPECT_EQ(reward(o, o, off, true, false, c), c.r_in);
    EXPECT_NEAR(reward(o, std::vector<double>{0, 30, 0}, off, false, true, c), -0.3 + c.r_exit, 1e-12);
    EXPECT_THROW(reward(o, std::vector<double>{0, 0}, off, true, true, c), ShapeError);
}

TEST(Reward, DecomposesIntoGapEffortAndCondition) {
    Rng rng(3);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    std::bernoulli_distribution coin(0.5);
    const CorrectionConfig c;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> ph{u(rng), u(rng), u(rng)}, pa{u(rng), u(rng), u(rng)};
        std::vector<int> alpha{coin(rng), coin(rng), coin(rng)};
        const bool g = coin(rng), gp = coin(rng);
        const double gap = std::hypot(ph[0] - pa[0], ph[1] - pa[1], ph[2] - pa[2]);
        const bool any = alpha[0] || alpha[1] || alpha[2];
        const double cond = g ? c.r_in : (gp ? c.r_exit : 0.0);
        ASSERT_NEAR(reward(ph, pa, alpha, g, gp, c), -c.k_r * gap - (any ? c.k_alpha : 0.0) + cond, 1e-9);
    }
}

TEST(CorrectionConfig, Validation) {
    CorrectionConfig c;
    EXPECT_NO_THROW(c.validate());
    c.k_u = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.r_exit = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.gamma = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Env, NoCorrectionIsBitIdenticalToTheNominalBlend) {
    const auto& p = small_pipeline();
    for (std::size_t i = 0; i < p.part.not_encoded().size(); ++i) {
        const auto spec = make_episode(p.part.not_encoded_sample(i), p.part, p.table, p.model, {}, NominalSource::Online);
        CorrectionEnv env(spec, {});
        while (!env.done()) env.step(0);
        const auto v = env.altered_velocity();
        const auto a = v.values(), b = spec.nominal.values();
        ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
        const auto pa = integrate(v, spec.p0), pn = integrate(spec.nominal, spec.p0);
        EXPECT_TRUE(std::equal(pa.values().begin(), pa.values().end(), pn.values().begin()));
        // Gap recorded by the env matches the integrated positions.
        const auto ph = integrate(spec.v_h, spec.p0);
        const int t = env.horizon();
        EXPECT_NEAR(env.trace().steps.back().gap, std::sqrt(squared_distance(ph.sample(t), pa.sample(t))), 1e-9);
    }
}

TEST(Env, CorrectionContractsTheGap) {
    const auto spec = constant_spec(60, {0, 0, 0}, {100, 0, 0});
    const CorrectionConfig c;
    const auto free = rollout(spec, c, 0), held = rollout(spec, c, 7);
    EXPECT_EQ(free.steps.size(), 60u);
    EXPECT_NEAR(free.steps.back().gap, 60.0, 1e-9);
    // gap(t+1) = 0.9 gap(t) + 1 has fixed point 10 mm.
    double e = 0.0;
    for (const auto& s : held.steps) {
        e = 0.9 * e + 1.0;
        EXPECT_NEAR(s.gap, e, 1e-9);
    }
    EXPECT_LT(held.steps.back().gap, 10.0);
}

TEST(Env, HorizonAndTerminalIndex) {
    const auto spec = constant_spec(60, {0, 0, 0}, {100, 0, 0});
    EXPECT_EQ(spec.horizon(), 60);
    const auto t = rollout(spec, {}, 0);
    EXPECT_EQ(t.t_star, 0);
    EXPECT_TRUE(t.complete);
    EXPECT_TRUE(t.terminal_satisfied);
    EXPECT_EQ(check_guarantee(t, {}).bound_sigma, -INFINITY);

    // A human who never stops: the horizon reaches the step before t_term = T.
    const auto moving = constant_spec(200, {50, 0, 0}, {1, 1, 1});
    EpisodeSpec shorter{"m", moving.v_h, MotionSignal(SignalConfig{}, std::vector<double>(30, 1.0)), {0, 0, 0}};
    EXPECT_EQ(shorter.horizon(), 199);
    const auto tr = rollout(shorter, {}, 0);
    EXPECT_EQ(tr.t_star, 199);
    EXPECT_EQ(tr.steps.size(), 199u);
}

TEST(Env, StateLayoutAndProtocol) {
    const auto spec = constant_spec(5, {1, 2, 3}, {4, 5, 6});
    CorrectionEnv env(spec, {});
    EXPECT_EQ(env.state(), (std::vector<double>{0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6}));
    env.step(0);
    const auto s = env.state();
    EXPECT_NEAR(s[0], 0.01, 1e-15);
    EXPECT_NEAR(s[3], 0.04, 1e-15);
    while (!env.done()) env.step(3);
    EXPECT_THROW(env.step(0), ProtocolError);
    EpisodeTrace partial;
    EXPECT_THROW(check_guarantee(partial, {}), ProtocolError);
}

TEST(Env, NetworkInputLeadsWithTheScaledGap) {
    const std::vector<double> state{120, 50, 0, 100, 50, 10, 300, 0, -200, 1000, 0, 0};
    const auto x = network_input(state);
    ASSERT_EQ(x.size(), 12);
    const std::vector<double> want{1.0, 0.0, -0.5, 0.1, 0.05, 0.01, 0.3, 0.0, -0.2, 1.0, 0.0, 0.0};
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(x(i), want[static_cast<std::size_t>(i)], 1e-15) << i;
}

TEST(Guarantee, AlwaysInsideGivesTheGeometricSum) {
    const CorrectionConfig c;
    EpisodeTrace t;
    t.t_star = 5;
    t.complete = true;
    double expected = 0.0;
    for (int s = 1; s <= 12; ++s) {
        t.steps.push_back({0, c.r_in, 0.0, true});
        expected += std::pow(c.gamma, s) * c.r_in;
    }
    EXPECT_NEAR(discounted_return(t, c.gamma), expected, 1e-9);
    const auto g = check_guarantee(t, c);
    EXPECT_TRUE(g.implies_constraint);
    EXPECT_GT(g.reward_sum, g.bound_sigma);
}

TEST(Guarantee, BoundMatchesExhaustiveSearch) {
    CorrectionConfig c;
    for (double gamma : {0.5, 0.9, 0.99, 1.0}) {
        c.gamma = gamma;
        for (int h = 1; h <= 12; ++h)
            for (int ts = 1; ts <= h; ++ts) {
                const double want = brute_bound(h, ts, c);
                const double got = violation_bound(h, ts, c);
                ASSERT_GE(got, want);
                ASSERT_NEAR(got, want, 1e-8 * (std::abs(want) + 1.0)) << h << " " << ts << " " << gamma;
            }
    }
    EXPECT_EQ(violation_bound(10, 0, c), -INFINITY);
    EXPECT_EQ(violation_bound(10, 11, c), -INFINITY);
}

TEST(Guarantee, NeverCertifiesAViolatingTrace) {
    Rng rng(77);
    std::uniform_int_distribution<int> len(1, 60);
    std::uniform_real_distribution<double> near(0.0, 20.0), far(20.0 + 1e-9, 400.0);
    std::bernoulli_distribution coin(0.5), mostly_in(0.9);
    CorrectionConfig c;
    for (int trial = 0; trial < 10000; ++trial) {
        const int h = len(rng);
        EpisodeTrace tr;
        tr.t_star = std::uniform_int_distribution<int>(1, h)(rng);
        tr.complete = true;
        bool prev = true;
        const std::vector<double> o{0, 0, 0};
        for (int t = 1; t <= h; ++t) {
            const bool in = t != tr.t_star && mostly_in(rng);
            const double gap = in ? near(rng) : far(rng);
            const std::vector<int> alpha{coin(rng) && coin(rng), 0, 0};
            const double r = reward(o, std::vector<double>{gap, 0, 0}, alpha, in, prev, c);
            tr.steps.push_back({alpha[0], r, gap, in});
            prev = in;
        }
        tr.terminal_satisfied = false;
        ASSERT_FALSE(check_guarantee(tr, c).implies_constraint) << "trial " << trial;
    }
}

TEST(Guarantee, SoundOnRandomPolicies) {
    const auto& p = small_pipeline();
    Rng rng(5);
    std::uniform_int_distribution<int> act(0, 7);
    for (std::size_t i = 0; i < p.part.not_encoded().size(); ++i) {
        const auto spec = make_episode(p.part.not_encoded_sample(i), p.part, p.table, p.model, {}, NominalSource::Online);
        for (int rep = 0; rep < 5; ++rep) {
            CorrectionEnv env(spec, {});
            while (!env.done()) env.step(rep == 0 ? 0 : act(rng));
            const auto g = check_guarantee(env.trace(), {});
            if (g.implies_constraint) {
                EXPECT_TRUE(env.trace().terminal_satisfied);
            }
        }
    }
}

TEST(ReplayBuffer, RingOverwritesOldest) {
    ReplayBuffer b(3);
    for (int i = 0; i < 5; ++i) b.push({nn::Vector::Zero(1), i, 0.0, nn::Vector::Zero(1), false});
    EXPECT_EQ(b.size(), 3u);
    EXPECT_EQ(b[0].action, 3);
    EXPECT_EQ(b[1].action, 4);
    EXPECT_EQ(b[2].action, 2);
    Rng rng(1);
    for (auto i : b.sample(100, rng)) EXPECT_LT(i, 3u);
    EXPECT_THROW(ReplayBuffer(0), ConfigError);
}

TEST(Agent, GreedyBreaksTiesLow) {
    Rng rng(1);
    auto a = make_agent(3, {}, 4, rng);
    for (auto& l : a.q.layers()) {
        l.weight.setZero();
        l.bias.setZero();
    }
    EXPECT_EQ(a.greedy(std::vector<double>(12, 1.0)), 0);
    a.q.layers().back().bias(5) = 1.0;
    EXPECT_EQ(a.greedy(std::vector<double>(12, 1.0)), 5);
}

TEST(Agent, ShortTrainingIsDeterministicAndRoundTrips) {
    const auto& p = small_pipeline();
    const auto episodes = make_episodes(p.part.not_encoded(), p.part, p.table, p.model, {}, NominalSource::Online);
    AgentTrainConfig tc;
    tc.episodes = 4;
    tc.hidden = 8;
    tc.batch = 16;
    tc.learning_starts = 100;
    const auto a = train_agent(episodes, {}, tc);
    const auto b = train_agent(episodes, {}, tc);
    EXPECT_EQ(a.agent, b.agent);
    ASSERT_EQ(a.log.size(), 4u);
    EXPECT_EQ(a.log[0].epsilon, 1.0);
    EXPECT_NEAR(a.log[3].epsilon, std::pow(0.995, 3), 1e-15);
    EXPECT_NEAR(a.agent.epsilon, std::pow(0.995, 4), 1e-15);
    EXPECT_EQ(a.agent.q, a.agent.target);

    TempDir dir;
    save(a.agent, dir.file("agent.txt"));
    EXPECT_EQ(load_agent(dir.file("agent.txt")), a.agent);
    const auto csv = training_log_csv(a.log);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "episode,cumulative_discounted_reward,epsilon,moving_avg_100");

    const auto out = run_corrected(a.agent, episodes[0]);
    EXPECT_TRUE(out.trace.complete);
    EXPECT_EQ(out.guarantee.reward_sum, discounted_return(out.trace, a.agent.correction.gamma));

    auto text = serialize(a.agent);
    text.replace(text.find("actions 8"), 9, "actions 9");
    EXPECT_THROW(parse_agent(text), ParseError);
    EXPECT_THROW(train_agent({}, {}, tc), ConfigError);
}
