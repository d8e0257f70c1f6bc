#include "conflictforge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "conflictforge/digest.hpp"
#include "conflictforge/errors.hpp"

namespace conflictforge::corpus {

namespace {

using nlohmann::json;

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Words whose trailing period does not end a sentence. Compared lowercased
// with terminal dots stripped, so "U.S." matches "u.s".
const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> abbrevs = {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc",
        "e.g", "i.e", "cf", "al", "approx", "dept", "est", "inc", "ltd",
        "co", "corp", "no", "fig", "figs", "vol", "mt", "ave", "blvd", "rd",
        "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept",
        "oct", "nov", "dec", "u.s", "u.k"};
    return abbrevs;
}

bool is_terminal(char c) { return c == '.' || c == '?' || c == '!'; }

bool is_closer(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']';
}

// The word immediately before position `end` (exclusive), lowercased, with
// trailing terminal punctuation stripped.
std::string preceding_word(const std::string& text, std::size_t end) {
    std::size_t stop = end;
    while (stop > 0 && is_terminal(text[stop - 1])) --stop;
    std::size_t start = stop;
    while (start > 0 &&
           !std::isspace(static_cast<unsigned char>(text[start - 1])))
        --start;
    std::string word = text.substr(start, stop - start);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return word;
}

}  // namespace

LoadResult load_corpus(const std::filesystem::path& path,
                       std::optional<std::size_t> limit) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open corpus file: " + path.string());

    LoadResult result;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (limit && result.documents.size() >= *limit) break;
        if (trimmed(line).empty()) continue;

        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("id") ||
            !rec.contains("text") || !rec["id"].is_string() ||
            !rec["text"].is_string()) {
            ++result.skipped_malformed;
            result.warnings.push_back("line " + std::to_string(line_no) +
                                      ": malformed record, skipped");
            continue;
        }

        SourceDocument doc;
        doc.corpus_id = rec["id"].get<std::string>();
        doc.title = rec.value("title", std::string{});
        doc.text = rec["text"].get<std::string>();

        if (trimmed(doc.text).empty()) {
            ++result.skipped_empty;
            continue;
        }
        if (!seen_ids.insert(doc.corpus_id).second) {
            ++result.skipped_malformed;
            result.warnings.push_back("line " + std::to_string(line_no) +
                                      ": duplicate corpus_id '" + doc.corpus_id +
                                      "', skipped");
            continue;
        }
        result.documents.push_back(std::move(doc));
    }

    if (in.bad())
        throw IoError("read failure on corpus file: " + path.string());
    if (result.documents.empty())
        throw IoError("no usable records in corpus file: " + path.string());
    return result;
}

std::vector<std::string> segment_statements(const std::string& text) {
    std::vector<std::string> out;
    const std::size_t n = text.size();
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < n) {
        if (!is_terminal(text[i])) {
            ++i;
            continue;
        }
        // swallow the full terminator run plus closing quotes/brackets
        std::size_t end = i;
        while (end < n && is_terminal(text[end])) ++end;
        while (end < n && is_closer(text[end])) ++end;
        const bool boundary =
            end >= n || std::isspace(static_cast<unsigned char>(text[end]));
        if (boundary && text[i] == '.' &&
            abbreviations().count(preceding_word(text, i + 1)) > 0) {
            i = end;
            continue;
        }
        if (boundary) {
            const std::string stmt = trimmed(text.substr(start, end - start));
            if (!stmt.empty()) out.push_back(stmt);
            start = end;
        }
        i = end;
    }
    const std::string tail = trimmed(text.substr(start));
    if (!tail.empty()) out.push_back(tail);
    if (out.empty()) {
        const std::string whole = trimmed(text);
        if (!whole.empty()) out.push_back(whole);
    }
    return out;
}

const SourceDocument& sample_document(const std::vector<SourceDocument>& pool,
                                      std::uint64_t rng_seed) {
    if (pool.empty())
        throw Error("sample_document: empty document pool");
    Rng rng(rng_seed);
    return pool[static_cast<std::size_t>(rng.bounded(pool.size()))];
}

}  // namespace conflictforge::corpus
