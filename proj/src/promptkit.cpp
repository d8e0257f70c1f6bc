#include "conflictforge/promptkit.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conflictforge/digest.hpp"
#include "conflictforge/errors.hpp"

namespace conflictforge::promptkit {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open template file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Lowercased alphabetic words with their byte offsets and line numbers.
struct WordHit {
    std::string word;
    std::size_t offset;
    std::size_t line;
};

std::vector<WordHit> scan_words(const std::string& text) {
    std::vector<WordHit> hits;
    std::size_t line = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(text[i]))) {
            const std::size_t start = i;
            while (i < text.size() &&
                   std::isalpha(static_cast<unsigned char>(text[i])))
                ++i;
            hits.push_back({lower(text.substr(start, i - start)), start, line});
        } else {
            ++i;
        }
    }
    return hits;
}

std::size_t last_nonempty_line(const std::string& text) {
    std::size_t line = 0;
    std::size_t last = 0;
    bool line_has_content = false;
    for (char c : text) {
        if (c == '\n') {
            if (line_has_content) last = line;
            ++line;
            line_has_content = false;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            line_has_content = true;
        }
    }
    if (line_has_content) last = line;
    return last;
}

}  // namespace

std::string to_string(TemplateId id) {
    switch (id) {
        case TemplateId::choose_statement: return "choose_statement";
        case TemplateId::contradict_statement: return "contradict_statement";
        case TemplateId::context_generate: return "context_generate";
        case TemplateId::generate_conditional: return "generate_conditional";
        case TemplateId::detect: return "detect";
        case TemplateId::type_predict: return "type_predict";
        case TemplateId::segment_guided: return "segment_guided";
        case TemplateId::segment_blind: return "segment_blind";
    }
    return "detect";
}

TemplateId template_id_from_string(std::string_view s) {
    for (TemplateId id : kAllTemplates)
        if (to_string(id) == s) return id;
    throw ConfigError("unknown template id: " + std::string(s));
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary lib;
    for (TemplateId id : kAllTemplates) {
        for (Strategy strategy : {Strategy::basic, Strategy::cot}) {
            const std::string name =
                to_string(id) + "." + conflictforge::to_string(strategy) + ".txt";
            std::string body = read_file(dir / name);
            // trailing-newline normalization: assets end with exactly one \n
            while (!body.empty() && body.back() == '\n') body.pop_back();
            lib.file_digests_[name] = sha256_hex(body);
            lib.bodies_[to_string(id) + "." + conflictforge::to_string(strategy)] =
                std::move(body);
        }
    }

    std::string combined_src;
    for (const auto& [name, digest] : lib.file_digests_) {
        combined_src += name;
        combined_src.push_back('\0');
        combined_src += digest;
        combined_src.push_back('\n');
    }
    lib.combined_digest_ = sha256_hex(combined_src);

    const auto manifest_path = dir / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
        const auto manifest = nlohmann::json::parse(read_file(manifest_path));
        for (const auto& [name, digest] : lib.file_digests_) {
            const auto& files = manifest.at("files");
            if (!files.contains(name) || files.at(name).get<std::string>() != digest)
                throw ConfigError("template digest mismatch for " + name +
                                  "; prompt assets drifted from the manifest");
        }
        if (manifest.at("combined").get<std::string>() != lib.combined_digest_)
            throw ConfigError("combined template digest mismatch against manifest");
    }
    return lib;
}

const std::string& PromptLibrary::body(TemplateId id, Strategy strategy) const {
    const auto key = to_string(id) + "." + conflictforge::to_string(strategy);
    const auto it = bodies_.find(key);
    if (it == bodies_.end())
        throw ConfigError("template not loaded: " + key);
    return it->second;
}

std::string PromptLibrary::render(TemplateId id, Strategy strategy,
                                  const Bindings& bindings) const {
    const std::string& tpl = body(id, strategy);
    std::string out;
    out.reserve(tpl.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] != '{') {
            out.push_back(tpl[i++]);
            continue;
        }
        const std::size_t close = tpl.find('}', i + 1);
        if (close == std::string::npos) {
            out.append(tpl, i, std::string::npos);
            break;
        }
        const std::string name = tpl.substr(i + 1, close - i - 1);
        const auto it = bindings.find(name);
        if (it == bindings.end())
            throw ParseError("render(" + to_string(id) +
                             "): missing binding for placeholder {" + name + "}");
        out += it->second;
        i = close + 1;
    }
    return out;
}

std::string document_blocks(const std::vector<Document>& docs) {
    std::string out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (i) out.push_back('\n');
        out += "Document " + std::to_string(i + 1) + ": " + docs[i].text;
    }
    return out;
}

std::string conflict_type_label(ContradictionKind kind) {
    switch (kind) {
        case ContradictionKind::self: return "Self-Contradiction";
        case ContradictionKind::pair: return "Pair Contradiction";
        case ContradictionKind::conditional: return "Conditional Contradiction";
        case ContradictionKind::none: break;
    }
    throw ConfigError("no conflict type label for kind 'none'");
}

TagParse parse_tagged(const std::string& text, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    const auto start = text.find(open);
    if (start == std::string::npos) return {trim(text), true};
    const auto body_start = start + open.size();
    const auto end = text.find(close, body_start);
    const std::string value = trim(end == std::string::npos
                                       ? text.substr(body_start)
                                       : text.substr(body_start, end - body_start));
    if (value.empty())
        throw ParseError("empty <" + tag + "> extraction");
    return {value, false};
}

std::optional<bool> parse_yes_no(const std::string& text) {
    const auto words = scan_words(text);
    const std::size_t final_line = last_nonempty_line(text);

    std::optional<bool> first_anywhere;
    std::optional<bool> last_on_final_line;
    for (const auto& hit : words) {
        std::optional<bool> v;
        if (hit.word == "yes") v = true;
        else if (hit.word == "no") v = false;
        if (!v) continue;
        if (!first_anywhere) first_anywhere = v;
        if (hit.line == final_line) last_on_final_line = v;
    }
    if (last_on_final_line) return last_on_final_line;
    return first_anywhere;
}

std::optional<ContradictionKind> parse_type(const std::string& text) {
    try {
        const TagParse tagged = parse_tagged(text, "type");
        if (!tagged.fallback) {
            std::string norm = lower(tagged.value);
            for (auto& c : norm)
                if (c == '-' || c == '_') c = ' ';
            // strip the word "contradiction" and surrounding space
            const auto pos = norm.find("contradiction");
            if (pos != std::string::npos) norm.erase(pos, 13);
            norm = trim(norm);
            if (norm == "self") return ContradictionKind::self;
            if (norm == "pair") return ContradictionKind::pair;
            if (norm == "conditional") return ContradictionKind::conditional;
        }
    } catch (const ParseError&) {
        // empty tag: fall through to the free-text scan
    }
    for (const auto& hit : scan_words(text)) {
        if (hit.word == "self") return ContradictionKind::self;
        if (hit.word == "pair") return ContradictionKind::pair;
        if (hit.word == "conditional") return ContradictionKind::conditional;
    }
    return std::nullopt;
}

DocIdParse parse_doc_ids(const std::string& text, int n_docs) {
    DocIdParse out;
    std::string span;
    const auto start = text.find("<documents>");
    if (start == std::string::npos) {
        span = text;
        out.fallback = true;
    } else {
        const auto body_start = start + 11;
        const auto end = text.find("</documents>", body_start);
        span = end == std::string::npos ? text.substr(body_start)
                                        : text.substr(body_start, end - body_start);
    }
    std::size_t i = 0;
    while (i < span.size()) {
        if (!std::isdigit(static_cast<unsigned char>(span[i]))) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        long value = -1;
        try {
            value = std::stol(span.substr(i), &len);
        } catch (const std::exception&) {
            len = 1;  // absurdly long digit run; skip it
            value = -1;
        }
        i += len;
        if (value >= 1 && value <= n_docs)
            out.ids.insert(static_cast<int>(value - 1));
        else
            out.out_of_range = true;
    }
    return out;
}

std::array<std::string, 3> parse_conditional_triple(const std::string& text) {
    std::array<std::string, 3> out;
    for (int i = 0; i < 3; ++i) {
        const std::string tag = "document" + std::to_string(i + 1);
        const TagParse parsed = parse_tagged(text, tag);
        if (parsed.fallback)
            throw ParseError("conditional response missing <" + tag + "> tag");
        out[static_cast<std::size_t>(i)] = parsed.value;
    }
    return out;
}

}  // namespace conflictforge::promptkit
