#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace conflictforge {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Origin { original, modified, generated };
enum class ContradictionKind { none, self, pair, conditional };
enum class Importance { most, least };
enum class PairPlacement { near, far };
enum class CondPlacement { contiguous, separate };
enum class Strategy { basic, cot };
enum class Task { detect, type_predict, segment_guided, segment_blind };

std::string to_string(Origin v);
std::string to_string(ContradictionKind v);
std::string to_string(Importance v);
std::string to_string(PairPlacement v);
std::string to_string(CondPlacement v);
std::string to_string(Strategy v);
std::string to_string(Task v);

Origin origin_from_string(std::string_view s);
ContradictionKind kind_from_string(std::string_view s);
Importance importance_from_string(std::string_view s);
Strategy strategy_from_string(std::string_view s);
Task task_from_string(std::string_view s);

// One retrievable text unit. `text` is the canonical content; statements are
// derived by the corpus segmenter so untouched source documents stay
// byte-identical to their corpus entries.
struct Document {
    int doc_id = 0;
    std::string text;
    Origin origin = Origin::original;
    std::optional<std::string> source;  // corpus_id when drawn from a corpus

    std::vector<std::string> statements() const;
};

struct LabelMeta {
    std::optional<Importance> importance;
    std::optional<int> evidence_length_words;
    std::optional<std::string> placement;  // near|far|contiguous|separate
    std::optional<int> distance;            // index gap between conflicting docs
    std::uint64_t seed = 0;                  // per-sample seed
};

struct ContradictionLabel {
    ContradictionKind kind = ContradictionKind::none;
    std::vector<int> doc_ids;  // sorted, unique
    LabelMeta meta;
};

struct Provenance {
    std::vector<std::string> source_sample_ids;
    std::string generator_model;
    std::uint64_t seed = 0;
    std::string prompts_hash;
    std::string tool_version = std::string(kToolVersion);
    std::uint64_t master_seed = 0;
};

// The unit the validator sees: N documents plus a ground-truth label.
struct DocumentSet {
    std::string sample_id;
    std::vector<Document> documents;
    ContradictionLabel label;
    Provenance provenance;

    // Throws Error when a structural invariant is violated (id numbering,
    // kind/cardinality law, ids out of range).
    void validate() const;
};

struct GenerationTrace {
    std::string chosen_statement;
    std::string contradicted_statement;
    std::string generated_context;
    std::optional<std::array<std::string, 3>> conditional_docs;
};

struct GenerationConfig {
    Importance importance = Importance::most;
    int context_length = 50;  // target word count for generated evidence
    PairPlacement pair_placement = PairPlacement::near;
    CondPlacement conditional_placement = CondPlacement::contiguous;
    std::size_t set_size = 10;  // documents per emitted sample, >= 3
    std::uint64_t seed = 0;

    // plumbing for the gateway call
    std::string model = "mock";
    int max_tokens = 1024;
};

struct ValidatorVerdict {
    std::string sample_id;
    Task task = Task::detect;
    std::optional<bool> detected;
    std::optional<ContradictionKind> predicted_kind;
    std::optional<std::vector<int>> predicted_ids;
    std::string raw_response;
    std::string parse_mode;  // tag|token|fallback|none
    int latency_ms = 0;
    std::optional<std::string> error;
    std::string error_kind;  // ""|parse|transport
    std::string run_id;
    int repeat_index = 0;
};

// Word count as whitespace-delimited tokens; used for evidence length.
int count_words(std::string_view text);

}  // namespace conflictforge
