#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conflictforge/llmgateway.hpp"
#include "conflictforge/promptkit.hpp"
#include "conflictforge/types.hpp"

namespace conflictforge::validator {

struct TaskSpec {
    Task task = Task::detect;
    std::string model;
    Strategy strategy = Strategy::basic;
    std::string dataset_path;
    std::string run_id;
    int repeat_index = 0;
    int max_tokens = 1024;
};

// Whether this sample is scored under the task: detection runs on the whole
// dataset; type prediction and segmentation are defined only on sets that
// contain a contradiction.
bool task_applies(Task task, const DocumentSet& sample);

// One prompt, one gateway call, one parsed verdict. Transport failures come
// back as verdicts with error_kind="transport" rather than exceptions, so a
// benchmark run never loses its ledger to one bad cell.
ValidatorVerdict run_detect(const DocumentSet& sample, const TaskSpec& spec,
                            gateway::Gateway& gw,
                            const promptkit::PromptLibrary& lib);
ValidatorVerdict run_type_predict(const DocumentSet& sample, const TaskSpec& spec,
                                  gateway::Gateway& gw,
                                  const promptkit::PromptLibrary& lib);
ValidatorVerdict run_segment(const DocumentSet& sample, const TaskSpec& spec,
                             gateway::Gateway& gw,
                             const promptkit::PromptLibrary& lib, bool guided);

ValidatorVerdict run_cell(const DocumentSet& sample, const TaskSpec& spec,
                          gateway::Gateway& gw,
                          const promptkit::PromptLibrary& lib);

struct RunManifest {
    std::string run_id;
    std::string model;
    std::string strategy;
    std::string task;
    int repeat_index = 0;
    std::string dataset_path;
    std::size_t dataset_samples = 0;
    std::size_t cells = 0;
    std::size_t completed = 0;       // cells without transport errors
    double completion_ratio = 1.0;
    bool incomplete = false;
    std::uint64_t gateway_calls = 0;  // actual completions issued (mock only)
    std::string prompts_hash;
    std::string tool_version = std::string(kToolVersion);
    std::uint64_t master_seed = 0;
    std::string started_at;   // ISO-8601, masked in determinism comparisons
    std::string finished_at;
    // The pairwise/triple scan cost a per-cell validator avoids, for the
    // run summary: (N, N(N-1)/2, N(N-1)(N-2)/6) at N = documents per sample.
    std::uint64_t naive_singles = 0;
    std::uint64_t naive_pairs = 0;
    std::uint64_t naive_triples = 0;
};

struct RunLedger {
    std::vector<ValidatorVerdict> verdicts;  // ordered by (spec, sample index)
    std::vector<RunManifest> manifests;      // one per spec
};

// Executes every (sample, spec) cell with a bounded worker pool; exactly one
// gateway completion per cell. Ledger order is by (spec index, sample index)
// regardless of completion order.
RunLedger run_benchmark(const std::vector<TaskSpec>& specs,
                        const std::vector<DocumentSet>& dataset,
                        gateway::Gateway& gw,
                        const promptkit::PromptLibrary& lib,
                        int concurrency = 1);

nlohmann::json manifest_to_json(const RunManifest& m);

}  // namespace conflictforge::validator
