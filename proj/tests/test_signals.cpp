#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace kinenc;
using kinenc::testing::full_signal;
using kinenc::testing::random_signal;
using kinenc::testing::small_config;

namespace {

SignalConfig one_dof(int t_max) {
    SignalConfig c;
    c.rho = 1;
    c.t_max = t_max;
    return c;
}

// Brute-force nearest neighbor over plain vectors, written independently of
// the library's projection.
std::size_t brute_nearest(const std::vector<double>& x, const std::vector<std::vector<double>>& set) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < set.size(); ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) d += (x[k] - set[i][k]) * (x[k] - set[i][k]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

} // namespace

TEST(SignalConfig, RejectsInvalidFields) {
    SignalConfig c;
    EXPECT_NO_THROW(c.validate());
    c.rho = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.t_max = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.delta_vel = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(MotionSignal, ZeroPadsShortAcquisitions) {
    const auto cfg = small_config(10, 2);
    MotionSignal s(cfg, {1, 2, 3, 4});
    EXPECT_EQ(s.length(), 10);
    EXPECT_EQ(s.effective_length(), 2);
    EXPECT_EQ(s.values().size(), 20u);
    EXPECT_EQ(s(1, 1), 4.0);
    for (int t = 2; t < 10; ++t) EXPECT_EQ(s(t, 0), 0.0);
}

TEST(MotionSignal, RejectsNonFiniteAndBadShapes) {
    const auto cfg = small_config(4, 1);
    EXPECT_THROW(MotionSignal(cfg, {1.0, NAN}), InvalidSignalError);
    EXPECT_THROW(MotionSignal(cfg, {1.0, INFINITY}), InvalidSignalError);
    EXPECT_THROW(MotionSignal(cfg, {1, 2, 3, 4, 5}), ShapeError);
    EXPECT_THROW(MotionSignal(small_config(4, 2), {1, 2, 3}), ShapeError);
    EXPECT_THROW(MotionSignal(cfg, {1.0}, 5), ShapeError);
}

TEST(Differentiate, HandExample) {
    const MotionSignal p(one_dof(3), {0, 1, 2});
    const auto v = differentiate(p);
    for (int t = 0; t < 3; ++t) EXPECT_NEAR(v(t, 0), 100.0, 1e-9);
}

TEST(Differentiate, ConstantPositionGivesZeroVelocity) {
    const MotionSignal p(small_config(8), std::vector<double>(24, 7.5));
    const auto v = differentiate(p);
    for (double x : v.values()) EXPECT_EQ(x, 0.0);
}

TEST(Differentiate, RejectsOverflow) {
    const MotionSignal p(one_dof(2), {-1e308, 1e308});
    EXPECT_THROW(differentiate(p), InvalidSignalError);
}

TEST(Integrate, HandExamples) {
    const auto p = integrate(MotionSignal(one_dof(2), {100, 0}), std::vector<double>{0.0});
    EXPECT_EQ(p(0, 0), 0.0);
    EXPECT_NEAR(p(1, 0), 1.0, 1e-12);

    const auto q = integrate(MotionSignal(small_config(5)), std::vector<double>{5, 5, 5});
    for (double x : q.values()) EXPECT_EQ(x, 5.0);
    EXPECT_THROW(integrate(MotionSignal(small_config(5)), std::vector<double>{5, 5}), ShapeError);
}

TEST(Integrate, RoundTripWithDifferentiate) {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = full_signal(rng, small_config(30), 300.0);
        const auto back = integrate(differentiate(p), p.sample(0));
        for (std::size_t i = 0; i < p.values().size(); ++i) ASSERT_NEAR(back.values()[i], p.values()[i], 1e-9);
    }
}

TEST(Dist, HandExampleAndAxioms) {
    SignalConfig cfg = small_config(2, 2);
    EXPECT_DOUBLE_EQ(dist(MotionSignal(cfg, {3, 0, 0, 4}), MotionSignal(cfg, {0, 0, 0, 0})), 5.0);

    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = full_signal(rng, small_config(12));
        const auto b = full_signal(rng, small_config(12));
        const auto c = full_signal(rng, small_config(12));
        EXPECT_EQ(dist(a, a), 0.0);
        EXPECT_EQ(dist(a, b), dist(b, a));
        EXPECT_LE(dist(a, c), dist(a, b) + dist(b, c) + 1e-12);
    }
}

TEST(Dist, ConfigMismatchIsShapeError) {
    EXPECT_THROW(dist(MotionSignal(small_config(4)), MotionSignal(small_config(5))), ShapeError);
}

TEST(Project, HandExample) {
    const auto cfg = small_config(2, 2);
    const std::vector<MotionSignal> set = {MotionSignal(cfg, {1, 0, 0, 0}), MotionSignal(cfg, {0, 1, 0, 0})};
    const auto p = project(MotionSignal(cfg, {0.9, 0.1, 0, 0}), set);
    EXPECT_EQ(p.index, 0u);
    EXPECT_NEAR(p.distance, std::sqrt(0.02), 1e-12);
}

TEST(Project, MemberProjectsToItselfAndTiesGoLow) {
    Rng rng(5);
    std::vector<MotionSignal> set;
    for (int i = 0; i < 10; ++i) set.push_back(full_signal(rng, small_config(6)));
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto p = project(set[i], set);
        EXPECT_EQ(p.index, i);
        EXPECT_EQ(p.distance, 0.0);
    }
    const auto x = full_signal(rng, small_config(6));
    const auto before = project(x, set);
    set.push_back(set[before.index]);
    EXPECT_EQ(project(x, set).index, before.index);
}

TEST(Project, EmptySetIsDomainError) {
    EXPECT_THROW(project(MotionSignal(small_config(3)), std::vector<MotionSignal>{}), DomainError);
}

TEST(Project, MatchesBruteForceOracle) {
    Rng rng(17);
    std::uniform_int_distribution<int> len(2, 50), size(1, 50);
    for (int trial = 0; trial < 100; ++trial) {
        const auto cfg = small_config(len(rng));
        std::vector<MotionSignal> set;
        std::vector<std::vector<double>> raw;
        const int n = size(rng);
        for (int i = 0; i < n; ++i) {
            set.push_back(random_signal(rng, cfg, 1));
            raw.push_back(to_vec(set.back().values()));
        }
        const auto x = random_signal(rng, cfg, 1);
        ASSERT_EQ(project(x, set).index, brute_nearest(to_vec(x.values()), raw));

        const int tau = std::uniform_int_distribution<int>(1, cfg.t_max)(rng);
        std::vector<const MotionSignal*> ptrs;
        std::vector<std::vector<double>> heads;
        for (const auto& s : set) {
            ptrs.push_back(&s);
            heads.push_back(to_vec(s.head(tau)));
        }
        const auto prefix = restrict(x, tau);
        ASSERT_EQ(project_restricted(prefix, ptrs).index, brute_nearest(to_vec(prefix.values()), heads));
    }
}

TEST(TerminalInstant, Examples) {
    SignalConfig cfg = one_dof(4);
    EXPECT_EQ(terminal_instant(MotionSignal(cfg, {1, 2, 3, 0})).instant, 1);
    const auto t = terminal_instant(MotionSignal(cfg, {50, 50, 5, 5}));
    EXPECT_EQ(t.instant, 3);
    EXPECT_TRUE(t.terminates);
    const auto last = terminal_instant(MotionSignal(cfg, {50, 50, 50, 5}));
    EXPECT_EQ(last.instant, 4);
    EXPECT_TRUE(last.terminates);
    const auto never = terminal_instant(MotionSignal(cfg, {50, 50, 50, 50}));
    EXPECT_EQ(never.instant, 4);
    EXPECT_FALSE(never.terminates);
}

TEST(TerminalInstant, MonotoneUnderSuffixZeroing) {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto cfg = small_config(25);
        auto v = to_vec(full_signal(rng, cfg, 20.0).values());
        int prev = terminal_instant(MotionSignal(cfg, v)).instant;
        for (int t = cfg.t_max - 1; t >= 0; --t) {
            for (int k = 0; k < cfg.rho; ++k) v[static_cast<std::size_t>(t * cfg.rho + k)] = 0.0;
            const int now = terminal_instant(MotionSignal(cfg, v)).instant;
            ASSERT_LE(now, prev);
            prev = now;
        }
        EXPECT_EQ(prev, 1);
    }
}

TEST(Restrict, FullFirstAndNested) {
    Rng rng(2);
    const auto x = full_signal(rng, small_config(9));
    EXPECT_EQ(to_vec(restrict(x, 9).values()), to_vec(x.values()));
    EXPECT_EQ(to_vec(restrict(x, 1).values()), to_vec(x.sample(0)));
    for (int tau = 1; tau <= 9; ++tau)
        for (int inner = 1; inner <= tau; ++inner)
            EXPECT_EQ(to_vec(restrict(restrict(x, tau), inner).values()), to_vec(restrict(x, inner).values()));
    EXPECT_THROW(restrict(x, 0), DomainError);
    EXPECT_THROW(restrict(x, 10), DomainError);
}

TEST(Expand, RecoversEveryMemberOfAPrefixUniqueSet) {
    Rng rng(31);
    std::vector<MotionSignal> set;
    for (int i = 0; i < 20; ++i) set.push_back(full_signal(rng, small_config(15)));
    for (int tau : {1, 5, 15})
        for (std::size_t i = 0; i < set.size(); ++i) EXPECT_EQ(expand(restrict(set[i], tau), set), i);
}

TEST(Expand, NotFoundAndIllPosed) {
    Rng rng(37);
    std::vector<MotionSignal> set;
    for (int i = 0; i < 4; ++i) set.push_back(full_signal(rng, small_config(6)));
    EXPECT_THROW(expand(restrict(full_signal(rng, small_config(6)), 3), set), NotFoundError);

    auto twin = to_vec(set[1].values());
    twin.back() += 1.0;  // same 3-prefix, different tail
    set.emplace_back(small_config(6), twin);
    EXPECT_THROW(expand(restrict(set[1], 3), set), IllPosedExpansionError);
    EXPECT_EQ(expand(restrict(set[1], 6), set), 1u);
}
