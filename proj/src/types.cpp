#include "conflictforge/types.hpp"

#include <algorithm>
#include <cctype>

#include "conflictforge/corpus.hpp"
#include "conflictforge/errors.hpp"

namespace conflictforge {

std::string to_string(Origin v) {
    switch (v) {
        case Origin::original: return "original";
        case Origin::modified: return "modified";
        case Origin::generated: return "generated";
    }
    return "original";
}

std::string to_string(ContradictionKind v) {
    switch (v) {
        case ContradictionKind::none: return "none";
        case ContradictionKind::self: return "self";
        case ContradictionKind::pair: return "pair";
        case ContradictionKind::conditional: return "conditional";
    }
    return "none";
}

std::string to_string(Importance v) {
    return v == Importance::most ? "most" : "least";
}

std::string to_string(PairPlacement v) {
    return v == PairPlacement::near ? "near" : "far";
}

std::string to_string(CondPlacement v) {
    return v == CondPlacement::contiguous ? "contiguous" : "separate";
}

std::string to_string(Strategy v) {
    return v == Strategy::basic ? "basic" : "cot";
}

std::string to_string(Task v) {
    switch (v) {
        case Task::detect: return "detect";
        case Task::type_predict: return "type_predict";
        case Task::segment_guided: return "segment_guided";
        case Task::segment_blind: return "segment_blind";
    }
    return "detect";
}

Origin origin_from_string(std::string_view s) {
    if (s == "original") return Origin::original;
    if (s == "modified") return Origin::modified;
    if (s == "generated") return Origin::generated;
    throw ConfigError("unknown origin: " + std::string(s));
}

ContradictionKind kind_from_string(std::string_view s) {
    if (s == "none") return ContradictionKind::none;
    if (s == "self") return ContradictionKind::self;
    if (s == "pair") return ContradictionKind::pair;
    if (s == "conditional") return ContradictionKind::conditional;
    throw ConfigError("unknown contradiction kind: " + std::string(s));
}

Importance importance_from_string(std::string_view s) {
    if (s == "most") return Importance::most;
    if (s == "least") return Importance::least;
    throw ConfigError("unknown importance: " + std::string(s));
}

Strategy strategy_from_string(std::string_view s) {
    if (s == "basic") return Strategy::basic;
    if (s == "cot") return Strategy::cot;
    throw ConfigError("unknown strategy: " + std::string(s));
}

Task task_from_string(std::string_view s) {
    if (s == "detect") return Task::detect;
    if (s == "type_predict" || s == "type") return Task::type_predict;
    if (s == "segment_guided" || s == "guided") return Task::segment_guided;
    if (s == "segment_blind" || s == "blind") return Task::segment_blind;
    throw ConfigError("unknown task: " + std::string(s));
}

std::vector<std::string> Document::statements() const {
    return corpus::segment_statements(text);
}

namespace {

std::size_t expected_cardinality(ContradictionKind kind) {
    switch (kind) {
        case ContradictionKind::none: return 0;
        case ContradictionKind::self: return 1;
        case ContradictionKind::pair: return 2;
        case ContradictionKind::conditional: return 3;
    }
    return 0;
}

}  // namespace

void DocumentSet::validate() const {
    if (documents.empty())
        throw Error("sample " + sample_id + ": empty document list");
    for (std::size_t i = 0; i < documents.size(); ++i) {
        if (documents[i].doc_id != static_cast<int>(i))
            throw Error("sample " + sample_id + ": doc_id " +
                        std::to_string(documents[i].doc_id) + " at position " +
                        std::to_string(i) + " breaks 0..N-1 numbering");
        if (documents[i].text.find_first_not_of(" \t\r\n") == std::string::npos)
            throw Error("sample " + sample_id + ": document " + std::to_string(i) +
                        " has empty text");
    }
    const std::size_t want = expected_cardinality(label.kind);
    if (label.doc_ids.size() != want)
        throw Error("sample " + sample_id + ": kind " + to_string(label.kind) +
                    " requires " + std::to_string(want) + " conflict ids, got " +
                    std::to_string(label.doc_ids.size()));
    if (!std::is_sorted(label.doc_ids.begin(), label.doc_ids.end()))
        throw Error("sample " + sample_id + ": conflict ids not sorted");
    if (std::adjacent_find(label.doc_ids.begin(), label.doc_ids.end()) !=
        label.doc_ids.end())
        throw Error("sample " + sample_id + ": duplicate conflict ids");
    for (int id : label.doc_ids) {
        if (id < 0 || id >= static_cast<int>(documents.size()))
            throw Error("sample " + sample_id + ": conflict id " +
                        std::to_string(id) + " out of range");
    }
}

int count_words(std::string_view text) {
    int n = 0;
    bool in_word = false;
    for (char c : text) {
        const bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!ws && !in_word) ++n;
        in_word = !ws;
    }
    return n;
}

}  // namespace conflictforge
