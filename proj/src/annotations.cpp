#include "conflictforge/annotations.hpp"

#include <fstream>

#include "conflictforge/digest.hpp"
#include "conflictforge/errors.hpp"

namespace conflictforge::annotations {

namespace {

using nlohmann::json;

const std::string kSelfInstruction =
    "Analyze the given document for contradictions. Answer yes/no, if the "
    "document has information that is contradicting with itself.";

const std::string kPairInstruction =
    "Analyze the given pair of documents. Answer yes/no, if the information "
    "in two documents are contradicting each other.";

const std::string kConditionalInstruction =
    "Analyze the given set of 3 documents. The set of documents are "
    "conditionally conflicting if the following rules are satisfied:\n"
    "- Document 1 and 2 do not contradict each other\n"
    "- Document 3 makes document 1 and 2 contradict/ not true together";

}  // namespace

const std::string& annotator_instruction(ContradictionKind kind) {
    switch (kind) {
        case ContradictionKind::self: return kSelfInstruction;
        case ContradictionKind::pair: return kPairInstruction;
        case ContradictionKind::conditional: return kConditionalInstruction;
        case ContradictionKind::none: break;
    }
    throw ConfigError("no annotator instruction for kind 'none'");
}

ExportResult export_annotations(const std::vector<DocumentSet>& dataset,
                                const ExportCounts& counts, std::uint64_t seed) {
    const std::pair<ContradictionKind, std::size_t> wanted[] = {
        {ContradictionKind::self, counts.self},
        {ContradictionKind::pair, counts.pair},
        {ContradictionKind::conditional, counts.conditional},
    };

    // availability check first so the error can list every deficit
    std::string deficits;
    for (const auto& [kind, want] : wanted) {
        std::size_t have = 0;
        for (const auto& s : dataset)
            if (s.label.kind == kind) ++have;
        if (have < want) {
            if (!deficits.empty()) deficits += "; ";
            deficits += to_string(kind) + " needs " + std::to_string(want) +
                        ", dataset has " + std::to_string(have);
        }
    }
    if (!deficits.empty())
        throw Error("not enough conflict samples to export: " + deficits);

    ExportResult result;
    result.sealed_key = json::object();
    result.answer_sheet_csv = "item_id,answer\n";
    Rng rng(seed);

    for (const auto& [kind, want] : wanted) {
        std::vector<const DocumentSet*> eligible;
        for (const auto& s : dataset)
            if (s.label.kind == kind) eligible.push_back(&s);

        AnnotationBundle bundle;
        bundle.task = kind;
        bundle.instruction = annotator_instruction(kind);

        const auto picks = rng.sample_without_replacement(eligible.size(), want);
        for (std::size_t i = 0; i < picks.size(); ++i) {
            const DocumentSet& sample = *eligible[picks[i]];
            BundleItem item;
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%03zu", i);
            item.item_id = "anno-" + to_string(kind) + "-" + buf;
            // only the conflicting documents are presented to the reviewer
            for (int id : sample.label.doc_ids)
                item.documents.push_back(
                    sample.documents[static_cast<std::size_t>(id)].text);

            result.sealed_key[item.item_id] = {
                {"sample_id", sample.sample_id},
                {"kind", to_string(kind)},
                {"doc_ids", sample.label.doc_ids}};
            result.answer_sheet_csv += item.item_id + ",\n";
            bundle.items.push_back(std::move(item));
        }
        result.bundles.push_back(std::move(bundle));
    }
    return result;
}

json bundle_to_json(const AnnotationBundle& bundle, const json& provenance) {
    json items = json::array();
    for (const auto& item : bundle.items) {
        items.push_back(
            {{"item_id", item.item_id}, {"documents", item.documents}});
    }
    return json{{"task", to_string(bundle.task)},
                {"instruction", bundle.instruction},
                {"items", std::move(items)},
                {"provenance", provenance}};
}

void write_export(const std::filesystem::path& out_dir,
                  const ExportResult& result, const json& provenance) {
    std::filesystem::create_directories(out_dir);
    for (const auto& bundle : result.bundles) {
        std::ofstream out(out_dir / ("bundle_" + to_string(bundle.task) + ".json"),
                          std::ios::binary);
        if (!out) throw IoError("cannot write annotation bundle");
        out << bundle_to_json(bundle, provenance).dump(2) << "\n";
    }
    {
        std::ofstream out(out_dir / "answer_sheet.csv", std::ios::binary);
        if (!out) throw IoError("cannot write answer sheet");
        out << result.answer_sheet_csv;
    }
    {
        json key = {{"key", result.sealed_key}, {"provenance", provenance}};
        std::ofstream out(out_dir / "sealed_key.json", std::ios::binary);
        if (!out) throw IoError("cannot write sealed key");
        out << key.dump(2) << "\n";
    }
}

}  // namespace conflictforge::annotations
