#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conflictforge/corpus.hpp"
#include "conflictforge/digest.hpp"
#include "conflictforge/llmgateway.hpp"
#include "conflictforge/promptkit.hpp"
#include "conflictforge/types.hpp"

namespace conflictforge::conflictgen {

// Where newly generated documents land in an existing set.
//   near:       one document, immediately after the anchor (index gap 1)
//   far:        one document, final index gap >= ceil(N/2) from the anchor
//   contiguous: three documents at adjacent final indices
//   separate:   three distinct final indices, pairwise gap >= 2 when feasible
struct PlacementSpec {
    enum class Mode { near, far, contiguous, separate };
    Mode mode = Mode::near;
    std::optional<std::size_t> anchor;  // target index (near/far), fixed start (contiguous)
    Rng* rng = nullptr;                 // required for far/separate and unanchored contiguous
};

struct InsertOutcome {
    DocumentSet set;
    std::vector<std::size_t> inserted_positions;  // final indices, sorted
    std::size_t anchor_position = 0;              // final index of the anchor doc
};

// Returns a new DocumentSet with doc_ids renumbered 0..N'-1 and the relative
// order of pre-existing documents preserved. Throws ConfigError when the
// placement is infeasible for the pool size.
InsertOutcome insert_documents(const DocumentSet& pool,
                               std::vector<Document> new_docs,
                               const PlacementSpec& spec);

struct GeneratedSample {
    DocumentSet set;
    GenerationTrace trace;
};

// ChooseStatement -> ContradictStatement -> ContextGenerate, then append the
// generated context to the target document. Label: kind=self, the target's
// index. Throws GenerationError on backend/parse failure.
GeneratedSample gen_self_contradiction(const DocumentSet& base,
                                       std::size_t target_index,
                                       const GenerationConfig& cfg,
                                       gateway::Gateway& gw,
                                       const promptkit::PromptLibrary& lib);

// Same chain, but the generated context becomes a new document inserted per
// cfg.pair_placement. Label: kind=pair, {target, new doc} after insertion.
GeneratedSample gen_pair_contradiction(const DocumentSet& base,
                                       std::size_t target_index,
                                       const GenerationConfig& cfg,
                                       gateway::Gateway& gw,
                                       const promptkit::PromptLibrary& lib,
                                       Rng& rng);

// One backend call produces three documents on the topic document's first
// sentence; all three are inserted per cfg.conditional_placement.
GeneratedSample gen_conditional_contradiction(const DocumentSet& base,
                                              std::size_t topic_index,
                                              const GenerationConfig& cfg,
                                              gateway::Gateway& gw,
                                              const promptkit::PromptLibrary& lib,
                                              Rng& rng);

struct KindCounts {
    std::size_t none = 0;
    std::size_t self = 0;
    std::size_t pair = 0;
    std::size_t conditional = 0;

    std::size_t total() const { return none + self + pair + conditional; }
};

// The generation parameter mix; per-sample values cycle deterministically
// through the cross product.
struct MixConfig {
    std::vector<Importance> importance = {Importance::most, Importance::least};
    std::vector<int> lengths = {25, 50, 100, 150, 200};
    std::vector<PairPlacement> pair_placements = {PairPlacement::near,
                                                  PairPlacement::far};
    std::vector<CondPlacement> cond_placements = {CondPlacement::contiguous,
                                                  CondPlacement::separate};
};

struct AssembleOptions {
    KindCounts counts;
    MixConfig mix;
    std::size_t set_size = 10;
    std::uint64_t master_seed = 0;
    int max_attempts = 3;  // regeneration attempts per sample
    std::string generator_model = "mock";
    int max_tokens = 1024;
    int concurrency = 1;
};

struct Shortfall {
    ContradictionKind kind = ContradictionKind::none;
    std::size_t sample_index = 0;
    std::string reason;
};

struct AssembleResult {
    std::vector<DocumentSet> samples;  // ordered by sample index
    std::vector<Shortfall> shortfalls;
    std::size_t requested = 0;
};

// Emits the requested count per kind: negatives are untouched corpus draws,
// positives run the matching generator. Failed samples are retried with a
// fresh source draw up to max_attempts, then reported as a shortfall.
// Deterministic for a fixed (pool order, options) with the mock backend.
AssembleResult assemble_dataset(const std::vector<corpus::SourceDocument>& pool,
                                const AssembleOptions& options,
                                gateway::Gateway& gw,
                                const promptkit::PromptLibrary& lib);

}  // namespace conflictforge::conflictgen
