#include <gtest/gtest.h>

#include "support.hpp"

using namespace kinenc;
using kinenc::testing::small_pipeline;
using kinenc::testing::TempDir;

TEST(Config, DefaultsThenFileThenFlags) {
    RunConfig cfg;
    EXPECT_EQ(cfg.classifier.epochs, 300);
    EXPECT_EQ(cfg.correction.k_u, 10.0);
    apply_config_text(cfg, "# comment\n[classifier]\nepochs = 12\nlr=0.01\n\n[online]\nt0 = 25\n[run]\nseed=9\n");
    EXPECT_EQ(cfg.classifier.epochs, 12);
    EXPECT_EQ(cfg.classifier.learning_rate, 0.01);
    EXPECT_EQ(cfg.schedule.t0, 25);
    EXPECT_EQ(cfg.seed, 9u);
    apply_setting(cfg, "classifier.epochs", "3");
    EXPECT_EQ(cfg.classifier.epochs, 3);
    EXPECT_EQ(cfg.classifier.learning_rate, 0.01);
}

TEST(Config, ErrorsAreConfigErrors) {
    RunConfig cfg;
    EXPECT_THROW(apply_setting(cfg, "classifier.nope", "1"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "classifier.epochs", "many"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "correction.k_u", "nan"), ConfigError);
    EXPECT_THROW(apply_config_text(cfg, "[classifier\nepochs=1\n"), ConfigError);
    EXPECT_THROW(apply_config_text(cfg, "epochs\n"), ConfigError);
    EXPECT_THROW(apply_config_file(cfg, "/nonexistent/x.ini"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "agent.nominal", "sideways"), ConfigError);
    cfg.schedule.t0 = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.forced_c = 2.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, EveryKeyRoundTripsThroughItsGetter) {
    RunConfig cfg;
    cfg.n_encoded = 5;
    cfg.forced_c = 0.25;
    for (const auto& s : settings()) {
        RunConfig other;
        const auto v = s.get(cfg);
        if (v == "-") continue;
        s.set(other, v);
        EXPECT_EQ(s.get(other), v) << s.key;
    }
    const auto dump = dump_config(cfg);
    EXPECT_EQ(dump.find("paths."), std::string::npos);
    EXPECT_EQ(dump.find("run.workers"), std::string::npos);
    EXPECT_NE(dump.find("correction.k_u=10\n"), std::string::npos);
}

TEST(Config, DerivedSeedsDifferPerStage) {
    RunConfig cfg;
    EXPECT_NE(cfg.synth_config().seed, cfg.classifier_config().seed);
    EXPECT_NE(cfg.classifier_config().seed, cfg.agent_config().seed);
    auto other = cfg;
    other.seed = 2;
    EXPECT_NE(other.synth_config().seed, cfg.synth_config().seed);
    EXPECT_EQ(RunConfig{}.synth_config().seed, cfg.synth_config().seed);
}

TEST(Paths, DefaultsLiveUnderTheOutputDirectory) {
    Paths p;
    p.out_dir = "o";
    EXPECT_EQ(p.dataset_path(), "o/dataset.csv");
    EXPECT_EQ(p.agent_path(), "o/agent.txt");
    p.model = "m.txt";
    EXPECT_EQ(p.model_path(), "m.txt");
}

TEST(Split, RoundTripAndLookup) {
    const auto part = partition(kinenc::testing::small_dataset(), 1);
    CrossValidation cv;
    cv.val_encoded = {part.encoded()[0]};
    cv.val_not_encoded = {part.not_encoded()[1], part.not_encoded()[2]};
    const auto s = parse_split(split_csv(part, cv, "dh", "cf"));
    EXPECT_EQ(s.dataset_hash, "dh");
    EXPECT_EQ(s.classifier_fingerprint, "cf");
    EXPECT_EQ(s.validation.size(), 3u);
    EXPECT_EQ(s.train.size(), part.all().size() - 3);
    EXPECT_EQ(not_encoded_among(part, s.validation), (std::vector<std::size_t>{part.not_encoded()[1], part.not_encoded()[2]}));
    EXPECT_THROW(not_encoded_among(part, {"ghost"}), StaleArtifactError);
    EXPECT_THROW(parse_split("id,role\na,test\n"), ParseError);
}

TEST(Mode, Names) {
    for (auto m : {Mode::Offline, Mode::Online, Mode::OnlineRl}) EXPECT_EQ(parse_mode(to_string(m)), m);
    EXPECT_THROW(parse_mode("batch"), ConfigError);
}

TEST(Evaluate, ForcedOneLeavesEveryHumanSignalUnchanged) {
    const auto& p = small_pipeline();
    for (auto mode : {Mode::Offline, Mode::Online}) {
        EvaluationInputs in{&p.part, &p.table, &p.model, nullptr, {}, 1.0};
        const auto alts = alter_all(p.part.not_encoded(), mode, in, 2);
        for (const auto& a : alts) {
            EXPECT_EQ(a.v_a, a.v_h);
            EXPECT_EQ(a.terminal_gap, 0.0);
        }
        const auto rep = summarize(mode, alts, 1, 20.0);
        EXPECT_EQ(rep.constraint_rate, 1.0);
    }
}

TEST(Evaluate, ReportCountsMatchRows) {
    const auto& p = small_pipeline();
    EvaluationInputs in{&p.part, &p.table, &p.model, nullptr, {}, std::nullopt};
    EXPECT_THROW(alter(p.part.not_encoded_sample(0), Mode::OnlineRl, in), ConfigError);
    EXPECT_THROW(evaluate({}, Mode::Online, in, 20.0), ConfigError);
    const auto rep = evaluate(p.part.not_encoded(), Mode::Online, in, 20.0, 1);
    ASSERT_EQ(rep.rows.size(), 14u);
    std::size_t ok = 0, success = 0;
    for (const auto& r : rep.rows) {
        ok += r.constraint_ok;
        success += r.decision.states(1);
        EXPECT_EQ(r.constraint_ok, r.terminal_gap <= 20.0);
    }
    EXPECT_DOUBLE_EQ(rep.constraint_rate, ok / 14.0);
    EXPECT_DOUBLE_EQ(rep.success_rate, success / 14.0);
    EXPECT_EQ(evaluate(p.part.not_encoded(), Mode::Online, in, 20.0, 3).rows.size(), 14u);

    const auto csv = report_csv(rep, {{"dataset_hash", "abc"}});
    EXPECT_NE(csv.find("# mode=online\n"), std::string::npos);
    EXPECT_NE(csv.find("# dataset_hash=abc\n"), std::string::npos);
    EXPECT_NE(csv.find("id,decision,score,c_final,terminal_gap,constraint_ok\n"), std::string::npos);

    const auto trace = alteration_trace_csv(alter(p.part.not_encoded_sample(0), Mode::Online, in));
    EXPECT_EQ(trace.substr(0, trace.find('\n')), "t,vhx,vhy,vhz,vax,vay,vaz,phx,phy,phz,pax,pay,paz,c,action");
}

TEST(Evaluate, OfflineUsesTheTableCoefficient) {
    const auto& p = small_pipeline();
    EvaluationInputs in{&p.part, &p.table, &p.model, nullptr, {}, std::nullopt};
    for (std::size_t i = 0; i < p.part.not_encoded().size(); ++i) {
        const auto a = alter(p.part.not_encoded_sample(i), Mode::Offline, in);
        const auto sol = solve_offline(a.v_h, p.part, p.table, p.model);
        EXPECT_EQ(a.v_a, sol.v_a);
        EXPECT_EQ(a.coefficient.back(), sol.c_hat);
    }
}
