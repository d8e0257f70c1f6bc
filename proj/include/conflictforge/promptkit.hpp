#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conflictforge/types.hpp"

namespace conflictforge::promptkit {

enum class TemplateId {
    choose_statement,
    contradict_statement,
    context_generate,
    generate_conditional,
    detect,
    type_predict,
    segment_guided,
    segment_blind,
};

constexpr std::array<TemplateId, 8> kAllTemplates = {
    TemplateId::choose_statement,  TemplateId::contradict_statement,
    TemplateId::context_generate,  TemplateId::generate_conditional,
    TemplateId::detect,            TemplateId::type_predict,
    TemplateId::segment_guided,    TemplateId::segment_blind,
};

std::string to_string(TemplateId id);
TemplateId template_id_from_string(std::string_view s);

using Bindings = std::map<std::string, std::string>;

// Loads the prompt assets from a directory: one UTF-8 file per
// (template_id, strategy) named "<id>.<strategy>.txt", trailing-newline
// normalized, with a manifest.json of sha256 digests alongside. A manifest
// mismatch is a ConfigError: silent prompt drift invalidates comparisons.
class PromptLibrary {
public:
    static PromptLibrary load(const std::filesystem::path& dir);

    const std::string& body(TemplateId id, Strategy strategy) const;

    // Substitutes every {placeholder} with its binding, verbatim. Missing
    // binding for a placeholder present in the body -> ParseError naming it.
    std::string render(TemplateId id, Strategy strategy,
                       const Bindings& bindings) const;

    // Combined digest over all template files; recorded in run provenance.
    const std::string& digest() const { return combined_digest_; }
    const std::map<std::string, std::string>& manifest() const {
        return file_digests_;
    }

private:
    PromptLibrary() = default;

    std::map<std::string, std::string> bodies_;        // "<id>.<strategy>" -> body
    std::map<std::string, std::string> file_digests_;  // filename -> sha256
    std::string combined_digest_;
};

// "Document 1: ...\nDocument 2: ..." numbered from 1 in set order, the shape
// every validation prompt expects for its {documents} binding.
std::string document_blocks(const std::vector<Document>& docs);

// The {conflict type} binding for guided segmentation.
std::string conflict_type_label(ContradictionKind kind);

struct TagParse {
    std::string value;
    bool fallback = false;  // tags absent, whole trimmed text returned
};

// Content of the first <tag>...</tag> span, whitespace-trimmed. Absent tags
// fall back to the whole trimmed text; tags present but empty -> ParseError.
TagParse parse_tagged(const std::string& text, const std::string& tag);

// First standalone yes/no token; the final line takes precedence when both
// appear (chain-of-thought responses conclude with the answer). nullopt when
// neither token occurs.
std::optional<bool> parse_yes_no(const std::string& text);

// <type> tag content normalized, else the first of the three kind labels
// appearing as a standalone word. nullopt when nothing matches.
std::optional<ContradictionKind> parse_type(const std::string& text);

struct DocIdParse {
    std::set<int> ids;            // 0-based, deduped, in range
    bool out_of_range = false;    // some extracted numbers were dropped
    bool fallback = false;        // no <documents> tags present
};

// Extracts document numbers from the <documents> span (fallback: whole text),
// accepting "2, 5" and "Document 3" forms. Prompt numbering is 1-based and is
// converted to 0-based ids here; out-of-range values are dropped with a flag.
// An empty set is a legal prediction.
DocIdParse parse_doc_ids(const std::string& text, int n_docs);

// The three <document1>..<document3> tag contents, mapped by tag name
// regardless of order in the text. Any tag missing or empty -> ParseError
// (callers regenerate upstream).
std::array<std::string, 3> parse_conditional_triple(const std::string& text);

}  // namespace conflictforge::promptkit
