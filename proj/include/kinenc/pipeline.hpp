#pragma once

// Run configuration, artifact bookkeeping and batch evaluation shared by the
// command-line driver and the acceptance suite.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kinenc/blend_solver.hpp"
#include "kinenc/classifier.hpp"
#include "kinenc/dataset.hpp"
#include "kinenc/error.hpp"
#include "kinenc/online_controller.hpp"
#include "kinenc/parallel.hpp"
#include "kinenc/random.hpp"
#include "kinenc/rl_correction.hpp"
#include "kinenc/signals.hpp"
#include "kinenc/text_io.hpp"

namespace kinenc {

struct Paths {
    std::string out_dir = "run";
    std::string dataset, model, split, table, agent;

    std::string dataset_path() const { return pick(dataset, "dataset.csv"); }
    std::string model_path() const { return pick(model, "encoder.txt"); }
    std::string split_path() const { return pick(split, "split.csv"); }
    std::string table_path() const { return pick(table, "table.txt"); }
    std::string agent_path() const { return pick(agent, "agent.txt"); }
    std::string output(const std::string& name) const { return out_dir + "/" + name; }

private:
    std::string pick(const std::string& p, const char* name) const { return p.empty() ? output(name) : p; }
};

struct RunConfig {
    Paths paths;
    std::uint64_t seed = 1;
    int e_des = 1;
    int workers = 1;
    std::string preset = "paper-scale";
    std::optional<int> n_encoded, n_not_encoded;
    TrainConfig classifier;
    int grid_intervals = 50;
    OnlineSchedule schedule;
    CorrectionConfig correction;
    AgentTrainConfig agent;
    NominalSource nominal = NominalSource::Online;
    std::optional<double> forced_c;

    SynthConfig synth_config() const {
        auto s = synth_preset(preset);
        if (n_encoded) s.n_encoded = *n_encoded;
        if (n_not_encoded) s.n_not_encoded = *n_not_encoded;
        s.seed = derive_seed(seed, "data");
        return s;
    }

    TrainConfig classifier_config() const {
        auto c = classifier;
        c.seed = derive_seed(seed, "classifier");
        c.workers = workers;
        return c;
    }

    AgentTrainConfig agent_config() const {
        auto a = agent;
        a.seed = derive_seed(seed, "agent");
        return a;
    }

    void validate() const {
        if (e_des != 0 && e_des != 1) throw ConfigError("run.e_des must be 0 or 1");
        if (grid_intervals < 1) throw ConfigError("table.intervals must be >= 1");
        if (forced_c && !(*forced_c >= 0.0 && *forced_c <= 1.0)) throw ConfigError("evaluate.force_c must be in [0,1]");
        synth_config().validate();
        classifier.validate();
        schedule.validate(synth_config().signal.t_max);
        correction.validate();
        agent.validate();
    }
};

// ---------------------------------------------------------------------------
// Settings registry: every configurable key, shared by the config file and
// the command-line flags (--<section>.<key>).

struct Setting {
    std::string key;
    std::string help;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

namespace detail {

inline double setting_real(const std::string& key, const std::string& v) {
    double x = 0.0;
    if (!text::parse_real(v, x) || !std::isfinite(x)) throw ConfigError(key + ": expected a real number, got '" + v + "'");
    return x;
}

inline long long setting_int(const std::string& key, const std::string& v) {
    long long x = 0;
    if (!text::parse_int(v, x)) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return x;
}

template <class T>
Setting real_setting(std::string key, std::string help, T RunConfig::*group, double T::*field) {
    return {key, std::move(help),
            [group, field, key](RunConfig& c, const std::string& v) { (c.*group).*field = setting_real(key, v); },
            [group, field](const RunConfig& c) { return text::format_real((c.*group).*field); }};
}

template <class T, class I>
Setting int_setting(std::string key, std::string help, T RunConfig::*group, I T::*field) {
    return {key, std::move(help),
            [group, field, key](RunConfig& c, const std::string& v) {
                const auto x = setting_int(key, v);
                if (x < 0) throw ConfigError(key + ": must be >= 0");
                (c.*group).*field = static_cast<I>(x);
            },
            [group, field](const RunConfig& c) { return std::to_string((c.*group).*field); }};
}

inline Setting path_setting(std::string key, std::string help, std::string Paths::*field) {
    return {key, std::move(help), [field](RunConfig& c, const std::string& v) { c.paths.*field = v; },
            [field](const RunConfig& c) { return c.paths.*field; }};
}

} // namespace detail

inline const std::vector<Setting>& settings() {
    using namespace detail;
    using R = RunConfig;
    static const std::vector<Setting> all = [] {
        std::vector<Setting> s;
        s.push_back(path_setting("paths.out", "output directory for artifacts and reports", &Paths::out_dir));
        s.push_back(path_setting("paths.dataset", "dataset file (default <out>/dataset.csv)", &Paths::dataset));
        s.push_back(path_setting("paths.model", "classifier file (default <out>/encoder.txt)", &Paths::model));
        s.push_back(path_setting("paths.split", "validation split file (default <out>/split.csv)", &Paths::split));
        s.push_back(path_setting("paths.table", "blend table file (default <out>/table.txt)", &Paths::table));
        s.push_back(path_setting("paths.agent", "agent file (default <out>/agent.txt)", &Paths::agent));
        s.push_back({"run.seed", "root seed for every stochastic stage",
                     [](R& c, const std::string& v) {
                         const auto x = setting_int("run.seed", v);
                         if (x < 0) throw ConfigError("run.seed: must be >= 0");
                         c.seed = static_cast<std::uint64_t>(x);
                     },
                     [](const R& c) { return std::to_string(c.seed); }});
        s.push_back({"run.e_des", "desired encoding level (0 or 1)",
                     [](R& c, const std::string& v) { c.e_des = static_cast<int>(setting_int("run.e_des", v)); },
                     [](const R& c) { return std::to_string(c.e_des); }});
        s.push_back({"run.workers", "worker threads (0 = all cores)",
                     [](R& c, const std::string& v) { c.workers = static_cast<int>(setting_int("run.workers", v)); },
                     [](const R&) { return std::string("-"); }});
        s.push_back({"data.preset", "synthetic preset: paper-scale or small",
                     [](R& c, const std::string& v) {
                         synth_preset(v);
                         c.preset = v;
                     },
                     [](const R& c) { return c.preset; }});
        s.push_back({"data.n_encoded", "override the encoded sample count",
                     [](R& c, const std::string& v) { c.n_encoded = static_cast<int>(setting_int("data.n_encoded", v)); },
                     [](const R& c) { return c.n_encoded ? std::to_string(*c.n_encoded) : std::string("-"); }});
        s.push_back({"data.n_not_encoded", "override the not-encoded sample count",
                     [](R& c, const std::string& v) { c.n_not_encoded = static_cast<int>(setting_int("data.n_not_encoded", v)); },
                     [](const R& c) { return c.n_not_encoded ? std::to_string(*c.n_not_encoded) : std::string("-"); }});
        s.push_back(real_setting("classifier.lr", "Adam learning rate", &R::classifier, &TrainConfig::learning_rate));
        s.push_back(real_setting("classifier.dropout", "dropout rate on hidden units", &R::classifier, &TrainConfig::dropout_rate));
        s.push_back(int_setting("classifier.epochs", "maximum epochs", &R::classifier, &TrainConfig::epochs));
        s.push_back(int_setting("classifier.batch", "minibatch size", &R::classifier, &TrainConfig::batch_size));
        s.push_back(int_setting("classifier.splits", "random train/validation splits", &R::classifier, &TrainConfig::splits));
        s.push_back(real_setting("classifier.train_fraction", "training share of each split", &R::classifier, &TrainConfig::train_fraction));
        s.push_back(int_setting("classifier.patience", "early-stopping patience in epochs (0 = off)", &R::classifier, &TrainConfig::patience));
        s.push_back(int_setting("classifier.hidden", "hidden units", &R::classifier, &TrainConfig::hidden));
        s.push_back(real_setting("classifier.lower", "lower clipping threshold", &R::classifier, &TrainConfig::lower_threshold));
        s.push_back(real_setting("classifier.upper", "upper clipping threshold", &R::classifier, &TrainConfig::upper_threshold));
        s.push_back({"table.intervals", "blend grid intervals (grid has intervals + 1 points)",
                     [](R& c, const std::string& v) { c.grid_intervals = static_cast<int>(setting_int("table.intervals", v)); },
                     [](const R& c) { return std::to_string(c.grid_intervals); }});
        s.push_back(int_setting("online.t0", "warm-up samples before the first update", &R::schedule, &OnlineSchedule::t0));
        s.push_back(int_setting("online.delta_t", "samples between coefficient updates", &R::schedule, &OnlineSchedule::delta_t));
        s.push_back(real_setting("correction.k_u", "feedback gain [1/s]", &R::correction, &CorrectionConfig::k_u));
        s.push_back(real_setting("correction.delta_pos", "terminal position tolerance [mm]", &R::correction, &CorrectionConfig::delta_pos));
        s.push_back(real_setting("correction.k_r", "gap penalty weight", &R::correction, &CorrectionConfig::k_r));
        s.push_back(real_setting("correction.k_alpha", "action penalty weight", &R::correction, &CorrectionConfig::k_alpha));
        s.push_back(real_setting("correction.r_in", "reward inside the tolerance ball", &R::correction, &CorrectionConfig::r_in));
        s.push_back(real_setting("correction.r_exit", "reward on leaving the ball", &R::correction, &CorrectionConfig::r_exit));
        s.push_back(real_setting("correction.gamma", "discount factor", &R::correction, &CorrectionConfig::gamma));
        s.push_back(int_setting("agent.episodes", "training episodes", &R::agent, &AgentTrainConfig::episodes));
        s.push_back(int_setting("agent.hidden", "units per hidden layer", &R::agent, &AgentTrainConfig::hidden));
        s.push_back(real_setting("agent.lr", "Adam learning rate", &R::agent, &AgentTrainConfig::learning_rate));
        s.push_back(int_setting("agent.batch", "replay minibatch size", &R::agent, &AgentTrainConfig::batch));
        s.push_back(int_setting("agent.replay", "replay buffer capacity", &R::agent, &AgentTrainConfig::replay_capacity));
        s.push_back(int_setting("agent.learning_starts", "transitions collected before learning", &R::agent, &AgentTrainConfig::learning_starts));
        s.push_back(real_setting("agent.epsilon_start", "initial exploration rate", &R::agent, &AgentTrainConfig::epsilon_start));
        s.push_back(real_setting("agent.epsilon_decay", "per-episode exploration decay", &R::agent, &AgentTrainConfig::epsilon_decay));
        s.push_back(real_setting("agent.epsilon_min", "exploration floor", &R::agent, &AgentTrainConfig::epsilon_min));
        s.push_back(real_setting("agent.reward_scale", "reward scale inside TD targets", &R::agent, &AgentTrainConfig::reward_scale));
        s.push_back(int_setting("agent.train_every", "environment steps per gradient step", &R::agent, &AgentTrainConfig::train_every));
        s.push_back({"agent.nominal", "nominal trajectory for episodes: online or offline",
                     [](R& c, const std::string& v) {
                         if (v == "online") c.nominal = NominalSource::Online;
                         else if (v == "offline") c.nominal = NominalSource::Offline;
                         else throw ConfigError("agent.nominal: expected online or offline, got '" + v + "'");
                     },
                     [](const R& c) { return std::string(c.nominal == NominalSource::Online ? "online" : "offline"); }});
        s.push_back({"evaluate.force_c", "debug: use this coefficient everywhere",
                     [](R& c, const std::string& v) { c.forced_c = setting_real("evaluate.force_c", v); },
                     [](const R& c) { return c.forced_c ? text::format_real(*c.forced_c) : std::string("-"); }});
        return s;
    }();
    return all;
}

inline const Setting& find_setting(const std::string& key) {
    for (const auto& s : settings())
        if (s.key == key) return s;
    throw ConfigError("unknown configuration key '" + key + "'");
}

inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    find_setting(key).set(cfg, value);
}

/// INI-style file: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Keys before any section must be written as section.key.
inline void apply_config_text(RunConfig& cfg, const std::string& content) {
    std::istringstream in(content);
    std::string line, section;
    std::size_t n = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++n;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config line " + std::to_string(n) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        try {
            apply_setting(cfg, section.empty() ? key : section + "." + key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(n) + ": " + e.what());
        }
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    try {
        apply_config_text(cfg, text::read_file(path));
    } catch (const IoError& e) {
        throw ConfigError(std::string("cannot read config file: ") + e.what());
    }
}

/// Canonical `key=value` listing; its fingerprint identifies the run
/// configuration in reports. Paths and thread counts are left out.
inline std::string dump_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& s : settings()) {
        if (s.key.rfind("paths.", 0) == 0 || s.key == "run.workers") continue;
        out += s.key + '=' + s.get(cfg) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation split file: `# dataset=<hash>` and `# classifier=<fingerprint>`
// header lines, then id,role with role in {train, validation}.

struct SplitAssignment {
    std::string dataset_hash;
    std::string classifier_fingerprint;
    std::vector<std::string> train, validation;
};

inline std::string split_csv(const PartitionedDataset& part, const CrossValidation& cv, const std::string& dataset_hash,
                             const std::string& classifier_fingerprint) {
    std::vector<bool> val(part.all().size(), false);
    for (auto i : cv.val_encoded) val[i] = true;
    for (auto i : cv.val_not_encoded) val[i] = true;
    std::string out = "# dataset=" + dataset_hash + "\n# classifier=" + classifier_fingerprint + "\nid,role\n";
    for (std::size_t i = 0; i < part.all().size(); ++i) out += part.sample(i).id + (val[i] ? ",validation\n" : ",train\n");
    return out;
}

inline SplitAssignment parse_split(const std::string& content) {
    SplitAssignment s;
    std::istringstream in(content);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# dataset=", 0) == 0) {
            s.dataset_hash = line.substr(10);
            continue;
        }
        if (line.rfind("# classifier=", 0) == 0) {
            s.classifier_fingerprint = line.substr(13);
            continue;
        }
        if (line.empty() || line[0] == '#' || line == "id,role") continue;
        const auto f = text::split(line, ',');
        if (f.size() != 2) throw ParseError("expected id,role", n, "role");
        if (f[1] == "train") s.train.emplace_back(f[0]);
        else if (f[1] == "validation") s.validation.emplace_back(f[0]);
        else throw ParseError("role must be train or validation", n, "role");
    }
    return s;
}

inline SplitAssignment load_split(const std::string& path) { return parse_split(text::read_file(path)); }

/// Not-encoded samples among `ids`, as indices into part.all(), in dataset order.
inline std::vector<std::size_t> not_encoded_among(const PartitionedDataset& part, const std::vector<std::string>& ids) {
    std::unordered_map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < part.all().size(); ++i) where.emplace(part.sample(i).id, i);
    std::vector<bool> chosen(part.all().size(), false);
    for (const auto& id : ids) {
        const auto it = where.find(id);
        if (it == where.end()) throw StaleArtifactError("split file names sample '" + id + "' which is not in the dataset");
        chosen[it->second] = true;
    }
    std::vector<std::size_t> out;
    for (auto i : part.not_encoded())
        if (chosen[i]) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

enum class Mode { Offline, Online, OnlineRl };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::Offline: return "offline";
        case Mode::Online: return "online";
        case Mode::OnlineRl: return "online+rl";
    }
    return "?";
}

inline Mode parse_mode(const std::string& s) {
    if (s == "offline") return Mode::Offline;
    if (s == "online") return Mode::Online;
    if (s == "online+rl") return Mode::OnlineRl;
    throw ConfigError("unknown mode '" + s + "' (expected offline, online or online+rl)");
}

/// One altered signal with everything needed for its report row and trace.
struct Alteration {
    std::string id;
    MotionSignal v_h, v_a, p_h, p_a;
    std::vector<double> coefficient;  ///< per sample
    Decision decision;
    TerminalInstant terminal;
    double terminal_gap = 0.0;
    std::optional<Guarantee> guarantee;
    std::vector<int> actions;  ///< online+rl only, per step
};

struct EvaluationInputs {
    const PartitionedDataset* part = nullptr;
    const BlendTable* table = nullptr;
    const EncoderModel* model = nullptr;
    const AgentModel* agent = nullptr;  ///< required for online+rl
    OnlineSchedule schedule;
    std::optional<double> forced_c;
};

inline Alteration alter(const LabeledSample& s, Mode mode, const EvaluationInputs& in) {
    const auto& part = *in.part;
    Alteration a;
    a.id = s.id;
    a.v_h = s.velocity;
    if (mode == Mode::Offline) {
        const auto sol = solve_offline(s.velocity, part, *in.table, *in.model);
        const double c = in.forced_c.value_or(sol.c_hat);
        a.v_a = in.forced_c ? blend(s.velocity, sol.v_r, c) : sol.v_a;
        a.coefficient.assign(static_cast<std::size_t>(s.velocity.length()), c);
    } else {
        SessionOptions opt;
        opt.forced_coefficient = in.forced_c;
        const auto r = run_online(s.velocity, s.initial_position, part, *in.table, *in.model, in.schedule, opt);
        a.v_a = r.v_a;
        a.coefficient = r.coefficient;
        if (mode == Mode::OnlineRl) {
            if (!in.agent) throw ConfigError("online+rl evaluation needs a trained agent");
            const auto spec = episode_from(s.id, r, s.initial_position);
            auto out = run_corrected(*in.agent, spec);
            a.v_a = out.v_a;
            a.guarantee = out.guarantee;
            for (const auto& st : out.trace.steps) a.actions.push_back(st.action);
        }
    }
    a.p_h = integrate(a.v_h, s.initial_position);
    a.p_a = integrate(a.v_a, s.initial_position);
    a.decision = classify(*in.model, a.v_a);
    a.terminal = terminal_instant(a.v_h);
    const int t = a.terminal.instant - 1;
    a.terminal_gap = std::sqrt(squared_distance(a.p_h.sample(t), a.p_a.sample(t)));
    return a;
}

struct EvaluationRow {
    std::string id;
    Decision decision;
    double c_final = 0.0;
    double terminal_gap = 0.0;
    bool constraint_ok = false;
    std::optional<Guarantee> guarantee;
};

struct EvaluationReport {
    Mode mode = Mode::Online;
    std::size_t n_samples = 0;
    double success_rate = 0.0;
    double constraint_rate = 0.0;
    double unclassified_rate = 0.0;
    std::size_t guarantee_counterexamples = 0;  ///< reward_sum > bound_sigma but constraint violated
    std::vector<EvaluationRow> rows;
};

inline EvaluationReport summarize(Mode mode, const std::vector<Alteration>& alts, int e_des, double delta_pos) {
    EvaluationReport rep;
    rep.mode = mode;
    rep.n_samples = alts.size();
    std::size_t success = 0, constraint = 0, unclassified = 0;
    for (const auto& a : alts) {
        EvaluationRow row;
        row.id = a.id;
        row.decision = a.decision;
        row.c_final = a.coefficient.empty() ? 0.0 : a.coefficient.back();
        row.terminal_gap = a.terminal_gap;
        row.constraint_ok = a.terminal_gap <= delta_pos;
        row.guarantee = a.guarantee;
        success += a.decision.states(e_des);
        constraint += row.constraint_ok;
        unclassified += a.decision.kind == DecisionKind::Unclassified;
        if (a.guarantee && a.guarantee->implies_constraint && !row.constraint_ok) ++rep.guarantee_counterexamples;
        rep.rows.push_back(std::move(row));
    }
    const double n = static_cast<double>(std::max<std::size_t>(alts.size(), 1));
    rep.success_rate = static_cast<double>(success) / n;
    rep.constraint_rate = static_cast<double>(constraint) / n;
    rep.unclassified_rate = static_cast<double>(unclassified) / n;
    return rep;
}

/// Alters every listed sample (indices into part.all()).
inline std::vector<Alteration> alter_all(const std::vector<std::size_t>& samples, Mode mode, const EvaluationInputs& in,
                                         int workers) {
    if (samples.empty()) throw ConfigError("evaluation set is empty");
    std::vector<Alteration> out(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t i) { out[i] = alter(in.part->sample(samples[i]), mode, in); });
    return out;
}

inline EvaluationReport evaluate(const std::vector<std::size_t>& samples, Mode mode, const EvaluationInputs& in,
                                 double delta_pos, int workers = 1) {
    return summarize(mode, alter_all(samples, mode, in, workers), in.part->e_des(), delta_pos);
}

using ReportHeader = std::vector<std::pair<std::string, std::string>>;

/// `# key=value` header lines, then one CSV row per sample.
inline std::string report_csv(const EvaluationReport& r, const ReportHeader& extra = {}) {
    std::string out;
    out += "# mode=" + std::string(to_string(r.mode)) + '\n';
    out += "# n_samples=" + std::to_string(r.n_samples) + '\n';
    out += "# success_rate=" + text::format_real(r.success_rate) + '\n';
    out += "# constraint_rate=" + text::format_real(r.constraint_rate) + '\n';
    out += "# unclassified_rate=" + text::format_real(r.unclassified_rate) + '\n';
    if (r.mode == Mode::OnlineRl) out += "# guarantee_counterexamples=" + std::to_string(r.guarantee_counterexamples) + '\n';
    for (const auto& [k, v] : extra) out += "# " + k + '=' + v + '\n';
    out += "id,decision,score,c_final,terminal_gap,constraint_ok";
    const bool rl = r.mode == Mode::OnlineRl;
    if (rl) out += ",reward_sum,bound_sigma,implies_constraint";
    out += '\n';
    for (const auto& row : r.rows) {
        out += row.id + ',' + to_string(row.decision.kind) + ',' + text::format_real(row.decision.raw_score) + ',' +
               text::format_real(row.c_final) + ',' + text::format_real(row.terminal_gap) + ',' +
               (row.constraint_ok ? "1" : "0");
        if (rl) {
            const auto g = row.guarantee.value_or(Guarantee{});
            out += ',' + text::format_real(g.reward_sum) + ',' + text::format_real(g.bound_sigma) + ',' +
                   (g.implies_constraint ? "1" : "0");
        }
        out += '\n';
    }
    return out;
}

/// Per-sample trace: velocities, positions, coefficient and (online+rl) action.
inline std::string alteration_trace_csv(const Alteration& a) {
    const int rho = a.v_h.rho();
    static constexpr const char* axes = "xyz";
    auto axis = [](int k) { return k < 3 ? std::string(1, axes[k]) : std::to_string(k); };
    std::string out = "t";
    for (const char* name : {"vh", "va", "ph", "pa"})
        for (int k = 0; k < rho; ++k) out += std::string(",") + name + axis(k);
    out += ",c,action\n";
    for (int t = 0; t < a.v_h.length(); ++t) {
        out += std::to_string(t + 1);
        for (const auto* s : {&a.v_h, &a.v_a, &a.p_h, &a.p_a})
            for (int k = 0; k < rho; ++k) out += ',' + text::format_real((*s)(t, k));
        out += ',' + text::format_real(a.coefficient[static_cast<std::size_t>(t)]);
        out += ',' + (static_cast<std::size_t>(t) < a.actions.size() ? std::to_string(a.actions[static_cast<std::size_t>(t)]) : std::string());
        out += '\n';
    }
    return out;
}

/// split, acc_encoded, acc_not_encoded, misclassified_encoded,
/// misclassified_not_encoded, unclassified_rate, accuracy; last row is the mean.
inline std::string metrics_csv(const CrossValidation& cv) {
    std::string out = "split,acc_encoded,acc_not_encoded,misclassified_encoded,misclassified_not_encoded,unclassified_rate,accuracy\n";
    auto row = [&](const std::string& name, const SplitMetrics& m) {
        out += name;
        for (double v : {m.acc_encoded, m.acc_not_encoded, m.misclassified_encoded, m.misclassified_not_encoded,
                         m.unclassified_rate, m.accuracy})
            out += ',' + text::format_real(v);
        out += '\n';
    };
    for (const auto& s : cv.splits) row(std::to_string(s.split), s);
    row("mean", cv.mean());
    return out;
}

} // namespace kinenc
