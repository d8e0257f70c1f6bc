#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conflictforge/types.hpp"

namespace conflictforge::dataset_io {

nlohmann::json to_json(const DocumentSet& set);
DocumentSet document_set_from_json(const nlohmann::json& j);

// One DocumentSet per line, UTF-8, keys sorted; byte-stable for a fixed input.
void write_dataset(const std::filesystem::path& path,
                   const std::vector<DocumentSet>& samples);

// Throws Error naming the line number on a corrupt or invalid line.
std::vector<DocumentSet> read_dataset(const std::filesystem::path& path);

struct Violation {
    std::size_t line = 0;
    std::string rule;    // short identifier, e.g. "cardinality"
    std::string detail;
};

// Checks every line against the DocumentSet schema and label invariants.
// Violations are the output, not an exception; reporting is capped by
// max_reported.
std::vector<Violation> validate_dataset_schema(const std::filesystem::path& path,
                                               std::size_t max_reported = 20);

nlohmann::json verdict_to_json(const ValidatorVerdict& v);
ValidatorVerdict verdict_from_json(const nlohmann::json& j);

void write_ledger(const std::filesystem::path& path,
                  const std::vector<ValidatorVerdict>& verdicts);
std::vector<ValidatorVerdict> read_ledger(const std::filesystem::path& path);

}  // namespace conflictforge::dataset_io
