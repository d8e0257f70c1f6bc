// conflictforge: synthesize contradiction benchmarks and evaluate chat LLMs
// as context validators over retrieved document sets.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conflictforge/annotations.hpp"
#include "conflictforge/conflictgen.hpp"
#include "conflictforge/corpus.hpp"
#include "conflictforge/dataset_io.hpp"
#include "conflictforge/errors.hpp"
#include "conflictforge/llmgateway.hpp"
#include "conflictforge/promptkit.hpp"
#include "conflictforge/scoring.hpp"
#include "conflictforge/validator.hpp"

namespace cf = conflictforge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRecoverable = 1;  // shortfall / partial / violations
constexpr int kExitUsage = 2;        // bad flags, config, unreadable input

struct CommonOptions {
    std::string config_path;
    std::string templates_dir = "templates";
    std::string backend = "mock";
    std::string endpoint;
    std::string mock_script;
    std::string cache_dir;
    std::string model = "mock";
    int concurrency = 1;
    int max_retries = 3;
    int rate_limit = 0;
    int max_tokens = 1024;
    std::uint64_t seed = 0;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw cf::ConfigError("cannot open config file: " + path);
    json cfg = json::parse(in, nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object())
        throw cf::ConfigError("config file is not a JSON object: " + path);
    return cfg;
}

std::string api_key_from_env() {
    const char* key = std::getenv("CONFLICTFORGE_API_KEY");
    return key ? key : "";
}

std::shared_ptr<cf::gateway::Gateway> make_gateway(const CommonOptions& common) {
    std::shared_ptr<cf::gateway::TextBackend> backend;
    if (common.backend == "mock") {
        backend = common.mock_script.empty()
                      ? cf::gateway::MockBackend::algorithm_script()
                      : cf::gateway::MockBackend::from_file(common.mock_script);
    } else if (common.backend == "http") {
        if (common.endpoint.empty())
            throw cf::ConfigError("http backend needs --endpoint");
        backend = std::make_shared<cf::gateway::HttpBackend>(common.endpoint,
                                                             api_key_from_env());
    } else {
        throw cf::ConfigError("unknown backend: " + common.backend);
    }

    cf::gateway::GatewayOptions options;
    options.max_retries = common.max_retries;
    options.rate_limit_per_second = common.rate_limit;
    options.max_in_flight = common.concurrency;
    if (!common.cache_dir.empty()) {
        options.cache = cf::gateway::CacheMode::disk;
        options.cache_dir = common.cache_dir;
    }
    return std::make_shared<cf::gateway::Gateway>(backend, options);
}

json provenance_json(const cf::promptkit::PromptLibrary& lib,
                     std::uint64_t master_seed) {
    return json{{"tool_version", std::string(cf::kToolVersion)},
                {"master_seed", master_seed},
                {"prompts_hash", lib.digest()}};
}

std::string pct2(std::size_t part, std::size_t whole) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f",
                  whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) /
                                         static_cast<double>(whole));
    return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// --- generate ---------------------------------------------------------------

int cmd_generate(const CommonOptions& common, const json& cfg,
                 const std::string& corpus_path, std::size_t limit,
                 const std::string& out_path,
                 cf::conflictgen::AssembleOptions assemble) {
    const auto lib = cf::promptkit::PromptLibrary::load(common.templates_dir);
    auto gw = make_gateway(common);

    auto loaded = cf::corpus::load_corpus(
        corpus_path,
        limit ? std::optional<std::size_t>(limit) : std::nullopt);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";

    if (cfg.contains("mix")) {
        const auto& mix = cfg["mix"];
        if (mix.contains("lengths"))
            assemble.mix.lengths = mix["lengths"].get<std::vector<int>>();
        if (mix.contains("importance")) {
            assemble.mix.importance.clear();
            for (const auto& v : mix["importance"])
                assemble.mix.importance.push_back(
                    cf::importance_from_string(v.get<std::string>()));
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto result = cf::conflictgen::assemble_dataset(loaded.documents, assemble,
                                                    *gw, lib);
    const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();

    cf::dataset_io::write_dataset(out_path, result.samples);

    std::map<std::string, std::size_t> emitted;
    for (const auto& s : result.samples) emitted[to_string(s.label.kind)]++;
    const std::size_t total = result.samples.size();

    json shortfalls = json::array();
    for (const auto& s : result.shortfalls)
        shortfalls.push_back({{"kind", to_string(s.kind)},
                              {"sample_index", s.sample_index},
                              {"reason", s.reason}});

    json summary = {
        {"dataset", out_path},
        {"corpus", {{"path", corpus_path},
                    {"loaded", loaded.documents.size()},
                    {"skipped", loaded.skipped()}}},
        {"requested",
         {{"none", assemble.counts.none},
          {"self", assemble.counts.self},
          {"pair", assemble.counts.pair},
          {"conditional", assemble.counts.conditional}}},
        {"emitted",
         {{"total", total},
          {"none", emitted["none"]},
          {"self", emitted["self"]},
          {"pair", emitted["pair"]},
          {"conditional", emitted["conditional"]}}},
        {"percentages",
         {{"none", pct2(emitted["none"], total)},
          {"self", pct2(emitted["self"], total)},
          {"pair", pct2(emitted["pair"], total)},
          {"conditional", pct2(emitted["conditional"], total)}}},
        {"shortfalls", std::move(shortfalls)},
        {"elapsed_ms", elapsed_ms},
        {"prompt_manifest", lib.manifest()},
        {"provenance", provenance_json(lib, assemble.master_seed)},
    };
    {
        std::ofstream out(out_path + ".summary.json", std::ios::binary);
        out << summary.dump(2) << "\n";
    }

    std::cout << "kind         count   pct\n";
    for (const char* kind : {"none", "self", "pair", "conditional"})
        std::printf("%-12s %5zu  %6s\n", kind, emitted[kind],
                    pct2(emitted[kind], total).c_str());
    std::printf("%-12s %5zu  100.00\n", "total", total);
    if (!result.shortfalls.empty()) {
        std::cout << result.shortfalls.size()
                  << " sample(s) could not be generated; see "
                  << out_path + ".summary.json" << "\n";
        return kExitRecoverable;
    }
    return kExitOk;
}

// --- validate ----------------------------------------------------------------

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.')
            c = '_';
    return s;
}

int cmd_validate(const CommonOptions& common, const std::string& dataset_path,
                 const std::string& task_arg, const std::string& strategy_arg,
                 int repeats, const std::string& out_dir) {
    const auto lib = cf::promptkit::PromptLibrary::load(common.templates_dir);
    auto gw = make_gateway(common);
    const auto dataset = cf::dataset_io::read_dataset(dataset_path);

    std::vector<cf::Task> tasks;
    if (task_arg == "all") {
        tasks = {cf::Task::detect, cf::Task::type_predict,
                 cf::Task::segment_guided, cf::Task::segment_blind};
    } else {
        for (const auto& t : split_csv(task_arg))
            tasks.push_back(cf::task_from_string(t));
    }

    std::filesystem::create_directories(out_dir);
    for (cf::Task task : tasks) {
        for (int r = 0; r < repeats; ++r) {
            cf::validator::TaskSpec spec;
            spec.task = task;
            spec.model = common.model;
            spec.strategy = cf::strategy_from_string(strategy_arg);
            spec.dataset_path = dataset_path;
            spec.repeat_index = r;
            spec.max_tokens = common.max_tokens;
            spec.run_id = sanitize(common.model) + "_" + strategy_arg + "_" +
                          to_string(task) + "_r" + std::to_string(r);

            auto ledger = cf::validator::run_benchmark({spec}, dataset, *gw, lib,
                                                       common.concurrency);
            const auto stem =
                std::filesystem::path(out_dir) / spec.run_id;
            cf::dataset_io::write_ledger(stem.string() + ".jsonl",
                                         ledger.verdicts);
            std::ofstream mout(stem.string() + ".manifest.json",
                               std::ios::binary);
            mout << cf::validator::manifest_to_json(ledger.manifests.front())
                        .dump(2)
                 << "\n";
            const auto& m = ledger.manifests.front();
            std::cout << spec.run_id << ": " << m.completed << "/" << m.cells
                      << " cells";
            if (m.incomplete) std::cout << " (incomplete)";
            std::cout << "\n";
        }
    }
    return kExitOk;
}

// --- score / ablate -----------------------------------------------------------

struct LedgerFile {
    std::vector<cf::ValidatorVerdict> verdicts;
    json manifest;
};

LedgerFile load_ledger_file(const std::string& path) {
    LedgerFile lf;
    lf.verdicts = cf::dataset_io::read_ledger(path);
    std::string manifest_path = path;
    const auto pos = manifest_path.rfind(".jsonl");
    if (pos != std::string::npos)
        manifest_path = manifest_path.substr(0, pos) + ".manifest.json";
    else
        manifest_path += ".manifest.json";
    std::ifstream in(manifest_path);
    if (!in)
        throw cf::ConfigError("ledger sidecar manifest not found: " +
                              manifest_path);
    lf.manifest = json::parse(in, nullptr, false);
    if (lf.manifest.is_discarded())
        throw cf::ConfigError("invalid manifest JSON: " + manifest_path);
    return lf;
}

int cmd_score(const std::string& dataset_path,
              const std::vector<std::string>& ledger_paths,
              const std::string& out_prefix,
              const std::vector<std::string>& slice_axes, bool aggregate,
              bool allow_partial, bool count_errors_as_wrong) {
    const auto dataset = cf::dataset_io::read_dataset(dataset_path);

    cf::scoring::ScoreOptions opts;
    opts.allow_partial = allow_partial;
    opts.errors = count_errors_as_wrong ? cf::scoring::ErrorPolicy::count_as_wrong
                                        : cf::scoring::ErrorPolicy::exclude_transport;

    struct GroupKey {
        std::string model, strategy, task;
        bool operator<(const GroupKey& o) const {
            return std::tie(model, strategy, task) <
                   std::tie(o.model, o.strategy, o.task);
        }
    };
    std::map<GroupKey, std::map<int, LedgerFile>> groups;  // repeat -> ledger

    for (const auto& path : ledger_paths) {
        LedgerFile lf = load_ledger_file(path);
        const auto& m = lf.manifest;
        if (m.value("incomplete", false) && !allow_partial) {
            std::cerr << "refusing incomplete ledger " << path
                      << " (completion "
                      << m.value("completion_ratio", 0.0)
                      << "); pass --allow-partial to score anyway\n";
            return kExitRecoverable;
        }
        GroupKey key{m.value("model", std::string{"?"}),
                     m.value("strategy", std::string{"?"}),
                     m.value("task", std::string{"?"})};
        groups[key][m.value("repeat_index", 0)] = std::move(lf);
    }

    cf::scoring::MetricsReport report;
    for (auto& [key, repeats] : groups) {
        const cf::Task task = cf::task_from_string(key.task);
        cf::scoring::TaskReport tr;
        for (auto& [repeat, lf] : repeats) {
            (void)repeat;
            if (task == cf::Task::detect) {
                auto det = cf::scoring::score_detection(lf.verdicts, dataset, opts);
                tr.runs.push_back(det.scores);
                if (!tr.confusion) tr.confusion = det.counts;
            } else {
                tr.runs.push_back(
                    cf::scoring::score_task(task, lf.verdicts, dataset, opts));
            }
        }
        tr.scores = tr.runs.front();
        if (aggregate && tr.runs.size() >= 2)
            tr.aggregate = cf::scoring::aggregate_runs(tr.runs);
        for (const auto& axis_name : slice_axes) {
            const auto axis = cf::scoring::slice_axis_from_string(axis_name);
            tr.slices[cf::scoring::to_string(axis)] = cf::scoring::slice(
                repeats.begin()->second.verdicts, dataset, task, axis, opts);
        }
        report[{key.model, key.strategy}][key.task] = std::move(tr);
    }

    json out = cf::scoring::report_to_json(report);
    if (!groups.empty()) {
        const auto& first = groups.begin()->second.begin()->second.manifest;
        out["provenance"] = first.value("provenance", json::object());
    }
    out["dataset"] = dataset_path;

    const std::string md = cf::scoring::report_to_markdown(report);
    {
        std::ofstream f(out_prefix + ".json", std::ios::binary);
        f << out.dump(2) << "\n";
    }
    {
        std::ofstream f(out_prefix + ".md", std::ios::binary);
        f << md;
    }
    {
        std::ofstream f(out_prefix + ".csv", std::ios::binary);
        f << cf::scoring::report_to_csv(report);
    }
    for (const auto& axis_name : slice_axes) {
        const auto axis = cf::scoring::slice_axis_from_string(axis_name);
        std::ofstream f(out_prefix + ".slice_" + cf::scoring::to_string(axis) +
                            ".csv",
                        std::ios::binary);
        f << cf::scoring::slices_to_csv(report, axis);
    }
    std::cout << md;
    return kExitOk;
}

// --- check ---------------------------------------------------------------------

int cmd_check(const std::string& dataset_path) {
    const auto violations = cf::dataset_io::validate_dataset_schema(dataset_path);
    if (violations.empty()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const auto& v : violations)
        std::cout << "line " << v.line << ": " << v.rule << ": " << v.detail
                  << "\n";
    return kExitRecoverable;
}

// --- export-annotations ----------------------------------------------------------

int cmd_export_annotations(const CommonOptions& common,
                           const std::string& dataset_path,
                           const std::string& out_dir,
                           const cf::annotations::ExportCounts& counts,
                           std::uint64_t seed) {
    const auto lib = cf::promptkit::PromptLibrary::load(common.templates_dir);
    const auto dataset = cf::dataset_io::read_dataset(dataset_path);
    try {
        auto result = cf::annotations::export_annotations(dataset, counts, seed);
        cf::annotations::write_export(out_dir, result,
                                      provenance_json(lib, seed));
        std::size_t items = 0;
        for (const auto& b : result.bundles) items += b.items.size();
        std::cout << "exported " << items << " items across "
                  << result.bundles.size() << " bundles to " << out_dir << "\n";
        return kExitOk;
    } catch (const cf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRecoverable;
    }
}

// --- adapt (HotpotQA corpus -> JSONL) -------------------------------------------

int cmd_adapt_hotpotqa(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw cf::IoError("cannot open HotpotQA file: " + in_path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw cf::ConfigError("expected a JSON array of HotpotQA questions");

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw cf::IoError("cannot write corpus: " + out_path);
    std::size_t written = 0;
    for (const auto& q : doc) {
        const std::string qid = q.value("_id", std::string("q"));
        if (!q.contains("context")) continue;
        std::size_t k = 0;
        // each context paragraph becomes one corpus record
        for (const auto& para : q["context"]) {
            if (!para.is_array() || para.size() < 2) continue;
            std::string text;
            for (const auto& sent : para[1]) {
                if (!text.empty() && text.back() != ' ') text += " ";
                text += sent.get<std::string>();
            }
            const json rec = {{"id", qid + "#" + std::to_string(k++)},
                              {"title", para[0].get<std::string>()},
                              {"text", text}};
            out << rec.dump() << "\n";
            ++written;
        }
    }
    std::cout << "wrote " << written << " corpus records to " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conflictforge: contradiction benchmark pipeline"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string corpus_path, dataset_path, out_path = "dataset.jsonl";
    std::string out_dir = "runs", out_prefix = "report";
    std::string task_arg = "detect", strategy_arg = "basic";
    std::size_t limit = 0;
    int repeats = 1;
    bool aggregate = false, allow_partial = false, count_errors = false;
    std::vector<std::string> ledger_paths, slice_axes;
    cf::conflictgen::AssembleOptions assemble;
    cf::annotations::ExportCounts anno_counts{50, 50, 40};
    std::string adapt_in, adapt_out = "corpus.jsonl";

    auto add_common = [&](CLI::App* cmd, bool with_backend) {
        cmd->add_option("--config", common.config_path, "JSON config file");
        cmd->add_option("--templates", common.templates_dir,
                        "prompt template directory");
        if (with_backend) {
            cmd->add_option("--backend", common.backend, "mock|http");
            cmd->add_option("--endpoint", common.endpoint,
                            "chat-completion endpoint URL (http backend)");
            cmd->add_option("--mock-script", common.mock_script,
                            "scripted responses for the mock backend");
            cmd->add_option("--cache-dir", common.cache_dir,
                            "on-disk response cache directory");
            cmd->add_option("--model", common.model, "model identifier");
            cmd->add_option("--concurrency", common.concurrency,
                            "worker pool size");
            cmd->add_option("--max-retries", common.max_retries,
                            "transient-failure retries");
            cmd->add_option("--rate-limit", common.rate_limit,
                            "max requests per second (0 = unlimited)");
            cmd->add_option("--max-tokens", common.max_tokens,
                            "completion token budget");
        }
    };

    auto* gen = app.add_subcommand("generate",
                                   "synthesize a labeled contradiction dataset");
    add_common(gen, true);
    gen->add_option("--corpus", corpus_path, "JSONL corpus file")->required();
    gen->add_option("--limit", limit, "read at most N corpus records");
    gen->add_option("--out", out_path, "output dataset JSONL path");
    gen->add_option("--none", assemble.counts.none, "negative sample count");
    gen->add_option("--self", assemble.counts.self, "self-contradiction count");
    gen->add_option("--pair", assemble.counts.pair, "pair-contradiction count");
    gen->add_option("--conditional", assemble.counts.conditional,
                    "conditional-contradiction count");
    gen->add_option("--set-size", assemble.set_size, "documents per sample");
    gen->add_option("--seed", assemble.master_seed, "master seed");
    gen->add_option("--max-attempts", assemble.max_attempts,
                    "regeneration attempts per sample");

    auto* val = app.add_subcommand("validate",
                                   "run a context-validation task over a dataset");
    add_common(val, true);
    val->add_option("--dataset", dataset_path, "dataset JSONL")->required();
    val->add_option("--task", task_arg,
                    "detect|type|guided|blind|all (comma list ok)");
    val->add_option("--strategy", strategy_arg, "basic|cot");
    val->add_option("--repeat", repeats, "number of repeated runs");
    val->add_option("--out-dir", out_dir, "ledger output directory");
    val->add_option("--seed", common.seed, "recorded master seed");

    auto* score = app.add_subcommand("score", "score ledgers into metric reports");
    score->add_option("--dataset", dataset_path, "dataset JSONL")->required();
    score->add_option("--ledger", ledger_paths, "ledger JSONL (repeatable)")
        ->required();
    score->add_option("--out", out_prefix, "report file prefix");
    score->add_option("--slice", slice_axes,
                      "kind|importance|placement|evidence_length_bucket");
    score->add_flag("--aggregate", aggregate, "mean ± std across repeats");
    score->add_flag("--allow-partial", allow_partial, "score incomplete ledgers");
    score->add_flag("--count-errors-as-wrong", count_errors,
                    "transport errors score as incorrect instead of excluded");

    auto* ablate = app.add_subcommand("ablate",
                                      "score with ablation slices (defaults to all axes)");
    ablate->add_option("--dataset", dataset_path, "dataset JSONL")->required();
    ablate->add_option("--ledger", ledger_paths, "ledger JSONL (repeatable)")
        ->required();
    ablate->add_option("--out", out_prefix, "report file prefix");
    ablate->add_option("--slice", slice_axes, "restrict to specific axes");
    ablate->add_flag("--aggregate", aggregate, "mean ± std across repeats");
    ablate->add_flag("--allow-partial", allow_partial, "score incomplete ledgers");

    auto* exp = app.add_subcommand("export-annotations",
                                   "export blind human-annotation bundles");
    add_common(exp, false);
    exp->add_option("--dataset", dataset_path, "dataset JSONL")->required();
    exp->add_option("--out-dir", out_dir, "bundle output directory");
    exp->add_option("--self", anno_counts.self, "self items");
    exp->add_option("--pair", anno_counts.pair, "pair items");
    exp->add_option("--conditional", anno_counts.conditional, "conditional items");
    exp->add_option("--seed", common.seed, "sampling seed");

    auto* check = app.add_subcommand("check", "validate a dataset against the schema");
    check->add_option("--dataset", dataset_path, "dataset JSONL")->required();

    auto* adapt = app.add_subcommand("adapt",
                                     "convert a HotpotQA JSON file into the corpus format");
    adapt->add_option("--hotpotqa", adapt_in, "HotpotQA JSON input")->required();
    adapt->add_option("--out", adapt_out, "corpus JSONL output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const json cfg = load_config(common.config_path);

        // config supplies any key the active subcommand's flag did not set;
        // flags always win
        const auto apply_config = [&](CLI::App* sub) {
            const auto unset = [&](const std::string& flag) {
                return sub->get_option_no_throw(flag) == nullptr ||
                       sub->count(flag) == 0;
            };
            const auto take = [&](const std::string& flag, const char* key,
                                  auto& target) {
                using T = std::decay_t<decltype(target)>;
                if (cfg.contains(key) && unset(flag)) target = cfg[key].get<T>();
            };
            take("--templates", "templates", common.templates_dir);
            take("--backend", "backend", common.backend);
            take("--endpoint", "endpoint", common.endpoint);
            take("--mock-script", "mock_script", common.mock_script);
            take("--cache-dir", "cache_dir", common.cache_dir);
            take("--model", "model", common.model);
            take("--concurrency", "concurrency", common.concurrency);
            take("--max-retries", "max_retries", common.max_retries);
            take("--rate-limit", "rate_limit", common.rate_limit);
            take("--max-tokens", "max_tokens", common.max_tokens);
            take("--corpus", "corpus", corpus_path);
            take("--dataset", "dataset", dataset_path);
            take("--set-size", "set_size", assemble.set_size);
            take("--seed", "seed", assemble.master_seed);
            take("--max-attempts", "max_attempts", assemble.max_attempts);
            if (cfg.contains("counts")) {
                const auto& c = cfg["counts"];
                if (unset("--none")) assemble.counts.none = c.value("none", assemble.counts.none);
                if (unset("--self")) assemble.counts.self = c.value("self", assemble.counts.self);
                if (unset("--pair")) assemble.counts.pair = c.value("pair", assemble.counts.pair);
                if (unset("--conditional"))
                    assemble.counts.conditional =
                        c.value("conditional", assemble.counts.conditional);
            }
        };

        if (gen->parsed()) {
            apply_config(gen);
            assemble.generator_model = common.model;
            assemble.max_tokens = common.max_tokens;
            assemble.concurrency = common.concurrency;
            return cmd_generate(common, cfg, corpus_path, limit, out_path,
                                assemble);
        }
        if (val->parsed()) apply_config(val);
        if (exp->parsed()) apply_config(exp);
        if (val->parsed())
            return cmd_validate(common, dataset_path, task_arg, strategy_arg,
                                repeats, out_dir);
        if (score->parsed())
            return cmd_score(dataset_path, ledger_paths, out_prefix, slice_axes,
                             aggregate, allow_partial, count_errors);
        if (ablate->parsed()) {
            if (slice_axes.empty())
                slice_axes = {"kind", "importance", "placement",
                              "evidence_length_bucket"};
            return cmd_score(dataset_path, ledger_paths, out_prefix, slice_axes,
                             aggregate, allow_partial, count_errors);
        }
        if (exp->parsed())
            return cmd_export_annotations(common, dataset_path, out_dir,
                                          anno_counts, common.seed);
        if (check->parsed()) return cmd_check(dataset_path);
        if (adapt->parsed()) return cmd_adapt_hotpotqa(adapt_in, adapt_out);
    } catch (const cf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cf::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
