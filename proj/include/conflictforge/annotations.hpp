#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conflictforge/types.hpp"

namespace conflictforge::annotations {

// One blind-review item: only the conflicting documents are presented, never
// the gold answer.
struct BundleItem {
    std::string item_id;
    std::vector<std::string> documents;
};

struct AnnotationBundle {
    ContradictionKind task = ContradictionKind::self;
    std::string instruction;  // per-task reviewer instruction, embedded verbatim
    std::vector<BundleItem> items;
};

// The per-task instruction text shown to annotators.
const std::string& annotator_instruction(ContradictionKind kind);

struct ExportCounts {
    std::size_t self = 0;
    std::size_t pair = 0;
    std::size_t conditional = 0;
};

struct ExportResult {
    std::vector<AnnotationBundle> bundles;       // self, pair, conditional order
    nlohmann::json sealed_key;                   // item_id -> gold, kept separate
    std::string answer_sheet_csv;                // item_id,answer stub
};

// Samples the requested number of conflict-containing sets per task (without
// replacement, seeded) and builds gold-free bundles plus a sealed key file.
// Throws Error listing per-kind deficits when the dataset is too small.
ExportResult export_annotations(const std::vector<DocumentSet>& dataset,
                                const ExportCounts& counts, std::uint64_t seed);

nlohmann::json bundle_to_json(const AnnotationBundle& bundle,
                              const nlohmann::json& provenance);

void write_export(const std::filesystem::path& out_dir,
                  const ExportResult& result, const nlohmann::json& provenance);

}  // namespace conflictforge::annotations
