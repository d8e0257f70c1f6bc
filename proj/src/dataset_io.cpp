#include "conflictforge/dataset_io.hpp"

#include <fstream>

#include "conflictforge/errors.hpp"

namespace conflictforge::dataset_io {

namespace {

using nlohmann::json;

json meta_to_json(const LabelMeta& meta) {
    json j = json::object();
    if (meta.importance) j["importance"] = to_string(*meta.importance);
    if (meta.evidence_length_words)
        j["evidence_length_words"] = *meta.evidence_length_words;
    if (meta.placement) j["placement"] = *meta.placement;
    if (meta.distance) j["distance"] = *meta.distance;
    j["seed"] = meta.seed;
    return j;
}

LabelMeta meta_from_json(const json& j) {
    LabelMeta meta;
    if (j.contains("importance"))
        meta.importance = importance_from_string(j["importance"].get<std::string>());
    if (j.contains("evidence_length_words"))
        meta.evidence_length_words = j["evidence_length_words"].get<int>();
    if (j.contains("placement")) meta.placement = j["placement"].get<std::string>();
    if (j.contains("distance")) meta.distance = j["distance"].get<int>();
    meta.seed = j.value("seed", std::uint64_t{0});
    return meta;
}

}  // namespace

json to_json(const DocumentSet& set) {
    json docs = json::array();
    for (const auto& d : set.documents) {
        json doc = {{"doc_id", d.doc_id},
                    {"text", d.text},
                    {"origin", to_string(d.origin)}};
        if (d.source) doc["source"] = *d.source;
        docs.push_back(std::move(doc));
    }
    return json{
        {"sample_id", set.sample_id},
        {"documents", std::move(docs)},
        {"label",
         {{"kind", to_string(set.label.kind)}, {"doc_ids", set.label.doc_ids}}},
        {"meta", meta_to_json(set.label.meta)},
        {"provenance",
         {{"source_sample_ids", set.provenance.source_sample_ids},
          {"generator_model", set.provenance.generator_model},
          {"seed", set.provenance.seed},
          {"prompts_hash", set.provenance.prompts_hash},
          {"tool_version", set.provenance.tool_version},
          {"master_seed", set.provenance.master_seed}}},
    };
}

DocumentSet document_set_from_json(const json& j) {
    DocumentSet set;
    set.sample_id = j.at("sample_id").get<std::string>();
    for (const auto& dj : j.at("documents")) {
        Document d;
        d.doc_id = dj.at("doc_id").get<int>();
        d.text = dj.at("text").get<std::string>();
        d.origin = origin_from_string(dj.at("origin").get<std::string>());
        if (dj.contains("source")) d.source = dj["source"].get<std::string>();
        set.documents.push_back(std::move(d));
    }
    const auto& lj = j.at("label");
    set.label.kind = kind_from_string(lj.at("kind").get<std::string>());
    set.label.doc_ids = lj.at("doc_ids").get<std::vector<int>>();
    if (j.contains("meta")) set.label.meta = meta_from_json(j["meta"]);
    if (j.contains("provenance")) {
        const auto& pj = j["provenance"];
        set.provenance.source_sample_ids =
            pj.value("source_sample_ids", std::vector<std::string>{});
        set.provenance.generator_model = pj.value("generator_model", std::string{});
        set.provenance.seed = pj.value("seed", std::uint64_t{0});
        set.provenance.prompts_hash = pj.value("prompts_hash", std::string{});
        set.provenance.tool_version = pj.value("tool_version", std::string{});
        set.provenance.master_seed = pj.value("master_seed", std::uint64_t{0});
    }
    return set;
}

void write_dataset(const std::filesystem::path& path,
                   const std::vector<DocumentSet>& samples) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset: " + path.string());
    for (const auto& s : samples) out << to_json(s).dump() << "\n";
    if (!out) throw IoError("write failure on dataset: " + path.string());
}

std::vector<DocumentSet> read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset: " + path.string());
    std::vector<DocumentSet> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error("dataset " + path.string() + " line " +
                        std::to_string(line_no) + ": invalid JSON");
        try {
            DocumentSet set = document_set_from_json(j);
            set.validate();
            out.push_back(std::move(set));
        } catch (const std::exception& e) {
            throw Error("dataset " + path.string() + " line " +
                        std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Violation> validate_dataset_schema(const std::filesystem::path& path,
                                               std::size_t max_reported) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset: " + path.string());

    std::vector<Violation> violations;
    auto report = [&](std::size_t line, std::string rule, std::string detail) {
        if (violations.size() < max_reported)
            violations.push_back({line, std::move(rule), std::move(detail)});
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            report(line_no, "json", "line is not valid JSON");
            continue;
        }
        for (const char* field : {"sample_id", "documents", "label"}) {
            if (!j.contains(field)) {
                report(line_no, "missing_field", std::string("no '") + field + "' key");
                j = json();  // poison so we skip the rest
                break;
            }
        }
        if (j.is_null()) continue;

        DocumentSet set;
        try {
            set = document_set_from_json(j);
        } catch (const std::exception& e) {
            report(line_no, "shape", e.what());
            continue;
        }
        // granular invariant checks so the rule name is meaningful
        bool ids_ok = true;
        for (std::size_t i = 0; i < set.documents.size(); ++i) {
            if (set.documents[i].doc_id != static_cast<int>(i)) {
                report(line_no, "doc_id uniqueness",
                       "doc_ids must be exactly 0..N-1 in order");
                ids_ok = false;
                break;
            }
        }
        if (!ids_ok) continue;

        const std::size_t want = [&] {
            switch (set.label.kind) {
                case ContradictionKind::none: return std::size_t{0};
                case ContradictionKind::self: return std::size_t{1};
                case ContradictionKind::pair: return std::size_t{2};
                case ContradictionKind::conditional: return std::size_t{3};
            }
            return std::size_t{0};
        }();
        if (set.label.doc_ids.size() != want) {
            report(line_no, "cardinality",
                   "kind " + to_string(set.label.kind) + " requires " +
                       std::to_string(want) + " conflict ids, got " +
                       std::to_string(set.label.doc_ids.size()));
            continue;
        }
        try {
            set.validate();
        } catch (const std::exception& e) {
            report(line_no, "invariant", e.what());
        }
    }
    return violations;
}

json verdict_to_json(const ValidatorVerdict& v) {
    json j = {{"sample_id", v.sample_id},
              {"task", to_string(v.task)},
              {"raw_response", v.raw_response},
              {"parse_mode", v.parse_mode},
              {"latency_ms", v.latency_ms},
              {"run_id", v.run_id},
              {"repeat_index", v.repeat_index}};
    if (v.detected) j["detected"] = *v.detected;
    if (v.predicted_kind) j["predicted_kind"] = to_string(*v.predicted_kind);
    if (v.predicted_ids) j["predicted_ids"] = *v.predicted_ids;
    if (v.error) {
        j["error"] = *v.error;
        j["error_kind"] = v.error_kind;
    }
    return j;
}

ValidatorVerdict verdict_from_json(const json& j) {
    ValidatorVerdict v;
    v.sample_id = j.at("sample_id").get<std::string>();
    v.task = task_from_string(j.at("task").get<std::string>());
    if (j.contains("detected")) v.detected = j["detected"].get<bool>();
    if (j.contains("predicted_kind"))
        v.predicted_kind = kind_from_string(j["predicted_kind"].get<std::string>());
    if (j.contains("predicted_ids"))
        v.predicted_ids = j["predicted_ids"].get<std::vector<int>>();
    v.raw_response = j.value("raw_response", std::string{});
    v.parse_mode = j.value("parse_mode", std::string{});
    v.latency_ms = j.value("latency_ms", 0);
    if (j.contains("error")) {
        v.error = j["error"].get<std::string>();
        v.error_kind = j.value("error_kind", std::string{});
    }
    v.run_id = j.value("run_id", std::string{});
    v.repeat_index = j.value("repeat_index", 0);
    return v;
}

void write_ledger(const std::filesystem::path& path,
                  const std::vector<ValidatorVerdict>& verdicts) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write ledger: " + path.string());
    for (const auto& v : verdicts) out << verdict_to_json(v).dump() << "\n";
}

std::vector<ValidatorVerdict> read_ledger(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open ledger: " + path.string());
    std::vector<ValidatorVerdict> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error("ledger " + path.string() + " line " +
                        std::to_string(line_no) + ": invalid JSON");
        out.push_back(verdict_from_json(j));
    }
    return out;
}

}  // namespace conflictforge::dataset_io
