#include "conflictforge/validator.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <thread>

#include "conflictforge/errors.hpp"
#include "conflictforge/scoring.hpp"

namespace conflictforge::validator {

namespace {

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string repeat_salt(const TaskSpec& spec) {
    return spec.repeat_index > 0 ? "repeat:" + std::to_string(spec.repeat_index)
                                 : std::string{};
}

gateway::CompletionRequest make_request(const TaskSpec& spec,
                                        std::string prompt) {
    gateway::CompletionRequest req;
    req.model = spec.model;
    req.prompt = std::move(prompt);
    req.temperature = 0.0;
    req.max_tokens = spec.max_tokens;
    req.cache_salt = repeat_salt(spec);
    return req;
}

ValidatorVerdict base_verdict(const DocumentSet& sample, const TaskSpec& spec) {
    ValidatorVerdict v;
    v.sample_id = sample.sample_id;
    v.task = spec.task;
    v.run_id = spec.run_id;
    v.repeat_index = spec.repeat_index;
    return v;
}

// Runs the gateway call; on transport failure fills the error fields and
// returns false.
bool complete_into(ValidatorVerdict& v, gateway::Gateway& gw,
                   const gateway::CompletionRequest& req) {
    try {
        const auto result = gw.complete(req);
        v.raw_response = result.text;
        v.latency_ms = result.latency_ms;
        return true;
    } catch (const GatewayError& e) {
        v.error = e.what();
        v.error_kind = "transport";
        return false;
    }
}

}  // namespace

bool task_applies(Task task, const DocumentSet& sample) {
    if (task == Task::detect) return true;
    return sample.label.kind != ContradictionKind::none;
}

ValidatorVerdict run_detect(const DocumentSet& sample, const TaskSpec& spec,
                            gateway::Gateway& gw,
                            const promptkit::PromptLibrary& lib) {
    if (sample.documents.empty())
        throw ConfigError("run_detect: sample has no documents");
    ValidatorVerdict v = base_verdict(sample, spec);
    const std::string prompt = lib.render(
        promptkit::TemplateId::detect, spec.strategy,
        {{"documents", promptkit::document_blocks(sample.documents)}});
    if (!complete_into(v, gw, make_request(spec, prompt))) return v;

    const auto answer = promptkit::parse_yes_no(v.raw_response);
    if (answer) {
        v.detected = *answer;
        v.parse_mode = "token";
    } else {
        // unparseable verdicts stay in the ledger as an incorrect prediction
        v.detected = false;
        v.parse_mode = "none";
        v.error = "no yes/no token in response";
        v.error_kind = "parse";
    }
    return v;
}

ValidatorVerdict run_type_predict(const DocumentSet& sample, const TaskSpec& spec,
                                  gateway::Gateway& gw,
                                  const promptkit::PromptLibrary& lib) {
    if (sample.label.kind == ContradictionKind::none)
        throw ConfigError("type prediction is defined only on contradictory sets; got sample " +
                          sample.sample_id);
    ValidatorVerdict v = base_verdict(sample, spec);
    const std::string prompt = lib.render(
        promptkit::TemplateId::type_predict, spec.strategy,
        {{"documents", promptkit::document_blocks(sample.documents)}});
    if (!complete_into(v, gw, make_request(spec, prompt))) return v;

    const auto kind = promptkit::parse_type(v.raw_response);
    if (kind) {
        v.predicted_kind = *kind;
        v.parse_mode = v.raw_response.find("<type>") != std::string::npos
                           ? "tag"
                           : "fallback";
    } else {
        v.parse_mode = "none";
        v.error = "no contradiction type in response";
        v.error_kind = "parse";
    }
    return v;
}

ValidatorVerdict run_segment(const DocumentSet& sample, const TaskSpec& spec,
                             gateway::Gateway& gw,
                             const promptkit::PromptLibrary& lib, bool guided) {
    if (sample.label.kind == ContradictionKind::none)
        throw ConfigError("segmentation is defined only on contradictory sets; got sample " +
                          sample.sample_id);
    ValidatorVerdict v = base_verdict(sample, spec);

    promptkit::Bindings bindings = {
        {"documents", promptkit::document_blocks(sample.documents)}};
    if (guided)
        bindings["conflict type"] = promptkit::conflict_type_label(sample.label.kind);
    const std::string prompt =
        lib.render(guided ? promptkit::TemplateId::segment_guided
                          : promptkit::TemplateId::segment_blind,
                   spec.strategy, bindings);
    if (!complete_into(v, gw, make_request(spec, prompt))) return v;

    const auto parsed = promptkit::parse_doc_ids(
        v.raw_response, static_cast<int>(sample.documents.size()));
    v.predicted_ids = std::vector<int>(parsed.ids.begin(), parsed.ids.end());
    v.parse_mode = parsed.fallback ? "fallback" : "tag";
    if (parsed.out_of_range) v.parse_mode += ",out_of_range_dropped";
    return v;
}

ValidatorVerdict run_cell(const DocumentSet& sample, const TaskSpec& spec,
                          gateway::Gateway& gw,
                          const promptkit::PromptLibrary& lib) {
    switch (spec.task) {
        case Task::detect: return run_detect(sample, spec, gw, lib);
        case Task::type_predict: return run_type_predict(sample, spec, gw, lib);
        case Task::segment_guided: return run_segment(sample, spec, gw, lib, true);
        case Task::segment_blind: return run_segment(sample, spec, gw, lib, false);
    }
    throw ConfigError("unknown task");
}

RunLedger run_benchmark(const std::vector<TaskSpec>& specs,
                        const std::vector<DocumentSet>& dataset,
                        gateway::Gateway& gw,
                        const promptkit::PromptLibrary& lib, int concurrency) {
    struct Cell {
        std::size_t spec_index;
        std::size_t sample_index;
    };
    std::vector<Cell> cells;
    std::vector<std::size_t> cells_per_spec(specs.size(), 0);
    for (std::size_t s = 0; s < specs.size(); ++s) {
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (!task_applies(specs[s].task, dataset[i])) continue;
            cells.push_back({s, i});
            ++cells_per_spec[s];
        }
    }

    RunLedger ledger;
    ledger.verdicts.resize(cells.size());
    const std::string started = iso_now();

    auto run_one = [&](std::size_t cell_index) {
        const Cell& cell = cells[cell_index];
        ledger.verdicts[cell_index] =
            run_cell(dataset[cell.sample_index], specs[cell.spec_index], gw, lib);
    };

    const int workers = std::max(
        1, std::min<int>(concurrency, static_cast<int>(cells.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_one(i);
                }
            });
        }
        for (auto& t : threads) t.join();
    }
    const std::string finished = iso_now();

    std::size_t offset = 0;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        RunManifest m;
        m.run_id = specs[s].run_id;
        m.model = specs[s].model;
        m.strategy = to_string(specs[s].strategy);
        m.task = to_string(specs[s].task);
        m.repeat_index = specs[s].repeat_index;
        m.dataset_path = specs[s].dataset_path;
        m.dataset_samples = dataset.size();
        m.cells = cells_per_spec[s];
        m.completed = 0;
        for (std::size_t i = 0; i < cells_per_spec[s]; ++i)
            if (ledger.verdicts[offset + i].error_kind != "transport")
                ++m.completed;
        m.completion_ratio =
            m.cells == 0 ? 1.0
                         : static_cast<double>(m.completed) /
                               static_cast<double>(m.cells);
        m.incomplete = m.completed != m.cells;
        m.gateway_calls = m.cells;  // one completion per cell by construction
        m.prompts_hash = lib.digest();
        if (!dataset.empty())
            m.master_seed = dataset.front().provenance.master_seed;
        m.started_at = started;
        m.finished_at = finished;
        const std::size_t n = dataset.empty() ? 0 : dataset.front().documents.size();
        const auto naive = scoring::naive_scan_counts(n);
        m.naive_singles = naive.singles;
        m.naive_pairs = naive.pairs;
        m.naive_triples = naive.triples;
        ledger.manifests.push_back(std::move(m));
        offset += cells_per_spec[s];
    }
    return ledger;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
    return nlohmann::json{
        {"run_id", m.run_id},
        {"model", m.model},
        {"strategy", m.strategy},
        {"task", m.task},
        {"repeat_index", m.repeat_index},
        {"dataset_path", m.dataset_path},
        {"dataset_samples", m.dataset_samples},
        {"cells", m.cells},
        {"completed", m.completed},
        {"completion_ratio", m.completion_ratio},
        {"incomplete", m.incomplete},
        {"gateway_calls", m.gateway_calls},
        {"naive_scan",
         {{"singles", m.naive_singles},
          {"pairs", m.naive_pairs},
          {"triples", m.naive_triples}}},
        {"provenance",
         {{"tool_version", m.tool_version},
          {"master_seed", m.master_seed},
          {"prompts_hash", m.prompts_hash}}},
        {"started_at", m.started_at},
        {"finished_at", m.finished_at},
    };
}

}  // namespace conflictforge::validator
