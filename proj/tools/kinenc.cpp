// kinenc command-line driver.
//
//   kinenc gen-data | train-classifier | build-table | alter | train-agent | evaluate
//
// Settings come from built-in defaults, then --config FILE, then --<section>.<key>
// flags. Exit codes: 0 ok, 2 config, 3 data, 4 stale artifact, 5 I/O,
// 6 domain, 7 protocol, 8 training, 1 anything else.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kinenc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace kinenc;

namespace {

struct Loaded {
    std::string dataset_hash;
    PartitionedDataset part;
};

Loaded load_dataset(const RunConfig& cfg) {
    const auto path = cfg.paths.dataset_path();
    const auto content = text::read_file(path);
    return {text::fingerprint(content), partition(parse_dataset(content, cfg.synth_config().signal), cfg.e_des)};
}

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.paths.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.paths.out_dir + "': " + ec.message());
}

void write_output(const std::string& path, const std::string& content) {
    text::write_file(path, content);
    std::cout << "  wrote " << path << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

SplitAssignment load_checked_split(const RunConfig& cfg, const Loaded& data, const EncoderModel& model) {
    auto split = load_split(cfg.paths.split_path());
    if (split.dataset_hash != data.dataset_hash)
        throw StaleArtifactError("split file " + cfg.paths.split_path() + " was written for a different dataset");
    if (split.classifier_fingerprint != fingerprint(model))
        throw StaleArtifactError("classifier " + cfg.paths.model_path() + " does not match the one recorded in " +
                                 cfg.paths.split_path() + " (retrain or restore the matching model)");
    return split;
}

BlendTable load_checked_table(const RunConfig& cfg, const Loaded& data, const EncoderModel& model) {
    auto table = load_table(cfg.paths.table_path());
    check_table(table, data.part, model);
    return table;
}

// ---------------------------------------------------------------------------

int cmd_gen_data(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto samples = generate_synthetic(cfg.synth_config());
    std::size_t encoded = 0;
    for (const auto& s : samples) encoded += s.encoding_level == cfg.e_des;
    std::cout << "generated " << samples.size() << " samples: " << encoded << " with level " << cfg.e_des << ", "
              << samples.size() - encoded << " without\n";
    write_output(cfg.paths.dataset_path(), serialize(samples));
    return 0;
}

int cmd_train_classifier(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto data = load_dataset(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const auto cv = cross_validate(data.part, cfg.classifier_config());
    const auto m = cv.mean();
    std::cout << "cross-validation over " << cv.splits.size() << " splits (" << fmt(seconds_since(t0), 1) << " s)\n"
              << "  acc_encoded " << fmt(m.acc_encoded) << "  acc_not_encoded " << fmt(m.acc_not_encoded)
              << "  misclassified " << fmt(m.misclassified_encoded) << '/' << fmt(m.misclassified_not_encoded)
              << "  unclassified " << fmt(m.unclassified_rate) << '\n'
              << "  deployed model from split " << cv.best_split << '\n';
    save(cv.best_model, cfg.paths.model_path());
    std::cout << "  wrote " << cfg.paths.model_path() << '\n';
    write_output(cfg.paths.split_path(), split_csv(data.part, cv, data.dataset_hash, fingerprint(cv.best_model)));
    write_output(cfg.paths.output("classifier_metrics.csv"), metrics_csv(cv));
    write_output(cfg.paths.output("classifier_curve_mean.csv"), curves_csv(cv.mean_curve()));
    for (std::size_t k = 0; k < cv.curves.size(); ++k)
        write_output(cfg.paths.output("classifier_curve_split" + std::to_string(k) + ".csv"), curves_csv(cv.curves[k]));
    return 0;
}

int cmd_build_table(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto data = load_dataset(cfg);
    const auto model = load_encoder(cfg.paths.model_path());
    load_checked_split(cfg, data, model);
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = compute_table(data.part, BlendGrid(cfg.grid_intervals), model, {cfg.workers, false});
    std::size_t none = 0;
    double sum = 0.0;
    for (int k : table.index) {
        none += k == 0;
        sum += table.grid.value(k);
    }
    std::cout << "table " << table.rows() << " x " << table.cols() << " (" << fmt(seconds_since(t0), 1) << " s)\n"
              << "  mean c " << fmt(sum / static_cast<double>(table.index.size())) << ", entries at c = 0: " << none << '\n';
    save(table, cfg.paths.table_path());
    std::cout << "  wrote " << cfg.paths.table_path() << '\n';
    write_output(cfg.paths.output("table.csv"), table_csv(table));
    return 0;
}

int cmd_alter(const RunConfig& cfg, const std::string& id, const std::string& mode_name, std::string output) {
    ensure_out_dir(cfg);
    const auto mode = parse_mode(mode_name);
    const auto data = load_dataset(cfg);
    const auto model = load_encoder(cfg.paths.model_path());
    const auto table = load_checked_table(cfg, data, model);
    std::optional<AgentModel> agent;
    if (mode == Mode::OnlineRl) agent = load_agent(cfg.paths.agent_path());
    const LabeledSample* sample = nullptr;
    for (const auto& s : data.part.all())
        if (s.id == id) sample = &s;
    if (!sample) throw ConfigError("no sample with id '" + id + "' in " + cfg.paths.dataset_path());
    EvaluationInputs in{&data.part, &table, &model, agent ? &*agent : nullptr, cfg.schedule, cfg.forced_c};
    const auto a = alter(*sample, mode, in);
    std::cout << id << " (" << to_string(mode) << "): decision " << to_string(a.decision.kind) << " (score "
              << fmt(a.decision.raw_score, 4) << "), final c " << fmt(a.coefficient.back(), 2) << ", terminal gap "
              << fmt(a.terminal_gap, 1) << " mm\n";
    if (output.empty()) output = cfg.paths.output("alter_" + id + ".csv");
    write_output(output, alteration_trace_csv(a));
    return 0;
}

int cmd_train_agent(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto data = load_dataset(cfg);
    const auto model = load_encoder(cfg.paths.model_path());
    const auto split = load_checked_split(cfg, data, model);
    const auto table = load_checked_table(cfg, data, model);
    const auto train = not_encoded_among(data.part, split.train);
    if (train.empty()) throw ConfigError("training split has no not-encoded samples");
    const auto episodes = make_episodes(train, data.part, table, model, cfg.schedule, cfg.nominal, cfg.workers);
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = train_agent(episodes, cfg.correction, cfg.agent_config());
    std::cout << "trained on " << episodes.size() << " signals for " << res.log.size() << " episodes ("
              << fmt(seconds_since(t0), 1) << " s)\n";
    if (!res.log.empty())
        std::cout << "  final 100-episode average return " << fmt(res.log.back().moving_avg_100, 1) << ", epsilon "
                  << fmt(res.agent.epsilon) << '\n';
    save(res.agent, cfg.paths.agent_path());
    std::cout << "  wrote " << cfg.paths.agent_path() << '\n';
    write_output(cfg.paths.output("agent_log.csv"), training_log_csv(res.log));
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& mode_name, bool traces) {
    ensure_out_dir(cfg);
    const auto mode = parse_mode(mode_name);
    const auto data = load_dataset(cfg);
    const auto model = load_encoder(cfg.paths.model_path());
    const auto split = load_checked_split(cfg, data, model);
    const auto table = load_checked_table(cfg, data, model);
    std::optional<AgentModel> agent;
    if (mode == Mode::OnlineRl) agent = load_agent(cfg.paths.agent_path());
    const auto val = not_encoded_among(data.part, split.validation);
    if (val.empty()) throw ConfigError("validation split has no not-encoded samples");

    EvaluationInputs in{&data.part, &table, &model, agent ? &*agent : nullptr, cfg.schedule, cfg.forced_c};
    const auto alts = alter_all(val, mode, in, cfg.workers);
    const auto rep = summarize(mode, alts, data.part.e_des(), cfg.correction.delta_pos);

    ReportHeader header = {{"config_hash", text::fingerprint(dump_config(cfg))},
                           {"dataset_hash", data.dataset_hash},
                           {"classifier", fingerprint(model)},
                           {"table", text::fingerprint(serialize(table))}};
    if (agent) header.emplace_back("agent", text::fingerprint(serialize(*agent)));
    if (cfg.forced_c) header.emplace_back("forced_c", text::format_real(*cfg.forced_c));

    std::string suffix = mode_name == "online+rl" ? "online_rl" : mode_name;
    std::cout << "evaluated " << rep.n_samples << " validation signals (" << to_string(mode) << ")\n"
              << "  success_rate " << fmt(rep.success_rate) << "  constraint_rate " << fmt(rep.constraint_rate)
              << "  unclassified_rate " << fmt(rep.unclassified_rate) << '\n';
    if (mode == Mode::OnlineRl) std::cout << "  guarantee counterexamples " << rep.guarantee_counterexamples << '\n';
    write_output(cfg.paths.output("report_" + suffix + ".csv"), report_csv(rep, header));
    if (traces) {
        const auto dir = cfg.paths.output("traces_" + suffix);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create trace directory '" + dir + "': " + ec.message());
        for (const auto& a : alts) text::write_file(dir + "/" + a.id + ".csv", alteration_trace_csv(a));
        std::cout << "  wrote " << alts.size() << " traces to " << dir << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinenc: alter hand-motion velocity signals so a classifier reads a desired encoding level"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "INI config file; flags override its values")->check(CLI::ExistingFile);
    const auto& keys = settings();
    std::vector<std::string> flag_values(keys.size());
    std::vector<CLI::Option*> flag_options;
    for (std::size_t i = 0; i < keys.size(); ++i)
        flag_options.push_back(app.add_option("--" + keys[i].key, flag_values[i], keys[i].help)->group("Settings"));

    auto* gen = app.add_subcommand("gen-data", "generate the synthetic labeled dataset");
    auto* trc = app.add_subcommand("train-classifier", "cross-validate the encoding classifier and keep the best split");
    auto* tab = app.add_subcommand("build-table", "compute the blending coefficient table");
    auto* alt = app.add_subcommand("alter", "alter one dataset signal and write its trace");
    auto* tra = app.add_subcommand("train-agent", "train the terminal-position correction agent");
    auto* evl = app.add_subcommand("evaluate", "alter every validation signal and write a report");

    std::string alter_id, alter_mode = "online", alter_out, eval_mode = "online";
    alt->add_option("--id", alter_id, "sample id from the dataset")->required();
    alt->add_option("--mode", alter_mode, "offline, online or online+rl")->capture_default_str();
    alt->add_option("--output", alter_out, "trace CSV (default <out>/alter_<id>.csv)");
    evl->add_option("--mode", eval_mode, "offline, online or online+rl")->capture_default_str();
    bool no_traces = false;
    evl->add_flag("--no-traces", no_traces, "skip the per-sample trace CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorCategory::Config);
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (flag_options[i]->count() > 0) apply_setting(cfg, keys[i].key, flag_values[i]);
        cfg.validate();

        if (gen->parsed()) return cmd_gen_data(cfg);
        if (trc->parsed()) return cmd_train_classifier(cfg);
        if (tab->parsed()) return cmd_build_table(cfg);
        if (alt->parsed()) return cmd_alter(cfg, alter_id, alter_mode, alter_out);
        if (tra->parsed()) return cmd_train_agent(cfg);
        if (evl->parsed()) return cmd_evaluate(cfg, eval_mode, !no_traces);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
