#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conflictforge/types.hpp"

namespace conflictforge::corpus {

// A raw pool entry. One JSON-lines record per document; the HotpotQA adapter
// in tools/ maps that distribution's nested context paragraphs into this shape.
struct SourceDocument {
    std::string corpus_id;
    std::string title;
    std::string text;
};

struct LoadResult {
    std::vector<SourceDocument> documents;
    std::size_t skipped_empty = 0;
    std::size_t skipped_malformed = 0;
    std::vector<std::string> warnings;

    std::size_t skipped() const { return skipped_empty + skipped_malformed; }
};

// Reads a JSON-lines corpus: one object per line, {"id": str, "title": str,
// "text": str}. Records with empty text are skipped and counted; malformed
// lines and duplicate ids produce a warning and are skipped. Throws IoError
// when the file is unreadable or when zero records load.
LoadResult load_corpus(const std::filesystem::path& path,
                       std::optional<std::size_t> limit = std::nullopt);

// Rule-based sentence splitter: splits after terminal punctuation (.?!) that
// is followed by whitespace, with an abbreviation exception list (Dr., e.g.,
// U.S., ...). Never returns an empty statement; text without terminal
// punctuation comes back as a single statement.
std::vector<std::string> segment_statements(const std::string& text);

// Deterministic for a fixed (pool order, seed); uniform over the pool across
// seeds. Throws Error on an empty pool.
const SourceDocument& sample_document(const std::vector<SourceDocument>& pool,
                                      std::uint64_t rng_seed);

}  // namespace conflictforge::corpus
