#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "conflictforge/dataset_io.hpp"
#include "conflictforge/errors.hpp"

using namespace conflictforge;
namespace fs = std::filesystem;

static DocumentSet sample_set(const std::string& id, ContradictionKind kind) {
    DocumentSet set;
    set.sample_id = id;
    for (int i = 0; i < 4; ++i)
        set.documents.push_back({i, "Document body " + std::to_string(i) + ".",
                                 i == 1 ? Origin::modified : Origin::original,
                                 i == 0 ? std::optional<std::string>("src_0")
                                        : std::nullopt});
    set.label.kind = kind;
    switch (kind) {
        case ContradictionKind::none: break;
        case ContradictionKind::self: set.label.doc_ids = {1}; break;
        case ContradictionKind::pair: set.label.doc_ids = {1, 3}; break;
        case ContradictionKind::conditional: set.label.doc_ids = {0, 2, 3}; break;
    }
    if (kind != ContradictionKind::none) {
        set.label.meta.importance = Importance::most;
        set.label.meta.evidence_length_words = 50;
    }
    set.label.meta.seed = 123;
    set.provenance.generator_model = "mock";
    set.provenance.seed = 123;
    set.provenance.prompts_hash = "deadbeef";
    set.provenance.master_seed = 9;
    return set;
}

TEST_CASE("document sets survive a JSONL round trip") {
    const auto dir = fs::temp_directory_path() / "cf_dataset_io";
    fs::create_directories(dir);
    const auto path = dir / "roundtrip.jsonl";

    std::vector<DocumentSet> sets = {
        sample_set("a", ContradictionKind::none),
        sample_set("b", ContradictionKind::self),
        sample_set("c", ContradictionKind::pair),
        sample_set("d", ContradictionKind::conditional),
    };
    dataset_io::write_dataset(path, sets);
    const auto loaded = dataset_io::read_dataset(path);
    REQUIRE(loaded.size() == sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        CHECK(loaded[i].sample_id == sets[i].sample_id);
        CHECK(loaded[i].label.kind == sets[i].label.kind);
        CHECK(loaded[i].label.doc_ids == sets[i].label.doc_ids);
        CHECK(loaded[i].documents.size() == sets[i].documents.size());
        for (std::size_t d = 0; d < sets[i].documents.size(); ++d) {
            CHECK(loaded[i].documents[d].text == sets[i].documents[d].text);
            CHECK(loaded[i].documents[d].origin == sets[i].documents[d].origin);
            CHECK(loaded[i].documents[d].source == sets[i].documents[d].source);
        }
        CHECK(loaded[i].label.meta.seed == 123);
        CHECK(loaded[i].provenance.prompts_hash == "deadbeef");
        CHECK(loaded[i].provenance.master_seed == 9);
    }
    // serialization is byte-stable
    const auto again = dir / "again.jsonl";
    dataset_io::write_dataset(again, loaded);
    std::ifstream f1(path), f2(again);
    std::string b1((std::istreambuf_iterator<char>(f1)), {});
    std::string b2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(b1 == b2);
    fs::remove_all(dir);
}

TEST_CASE("read_dataset names the corrupt line") {
    const auto dir = fs::temp_directory_path() / "cf_dataset_corrupt";
    fs::create_directories(dir);
    const auto path = dir / "broken.jsonl";
    {
        std::ofstream out(path);
        for (int i = 0; i < 4; ++i)
            out << dataset_io::to_json(sample_set("s" + std::to_string(i),
                                                  ContradictionKind::none))
                       .dump()
                << "\n";
        out << "{broken json line\n";
        out << dataset_io::to_json(sample_set("tail", ContradictionKind::none)).dump()
            << "\n";
    }
    CHECK_THROWS_WITH_AS(dataset_io::read_dataset(path),
                         doctest::Contains("line 5"), Error);
    fs::remove_all(dir);
}

TEST_CASE("schema validation reports rule names with line numbers") {
    const auto dir = fs::temp_directory_path() / "cf_dataset_schema";
    fs::create_directories(dir);
    const auto path = dir / "violations.jsonl";

    auto bad_cardinality = dataset_io::to_json(sample_set("x", ContradictionKind::pair));
    bad_cardinality["label"]["doc_ids"] = {0, 1, 2};  // pair with 3 ids

    auto dup_ids = dataset_io::to_json(sample_set("y", ContradictionKind::none));
    dup_ids["documents"][1]["doc_id"] = 0;  // duplicate doc_id 0

    {
        std::ofstream out(path);
        out << dataset_io::to_json(sample_set("ok", ContradictionKind::self)).dump()
            << "\n";
        out << bad_cardinality.dump() << "\n";
        out << dup_ids.dump() << "\n";
        out << "not json\n";
    }

    const auto violations = dataset_io::validate_dataset_schema(path);
    REQUIRE(violations.size() == 3);
    CHECK(violations[0].line == 2);
    CHECK(violations[0].rule == "cardinality");
    CHECK(violations[1].line == 3);
    CHECK(violations[1].rule == "doc_id uniqueness");
    CHECK(violations[2].line == 4);
    CHECK(violations[2].rule == "json");
    fs::remove_all(dir);
}

TEST_CASE("schema validation passes a clean file") {
    const auto dir = fs::temp_directory_path() / "cf_dataset_ok";
    fs::create_directories(dir);
    const auto path = dir / "ok.jsonl";
    dataset_io::write_dataset(path, {sample_set("a", ContradictionKind::none),
                                     sample_set("b", ContradictionKind::conditional)});
    CHECK(dataset_io::validate_dataset_schema(path).empty());
    fs::remove_all(dir);
}

TEST_CASE("verdicts survive a ledger round trip") {
    const auto dir = fs::temp_directory_path() / "cf_ledger_io";
    fs::create_directories(dir);
    const auto path = dir / "ledger.jsonl";

    ValidatorVerdict detect;
    detect.sample_id = "s1";
    detect.task = Task::detect;
    detect.detected = true;
    detect.raw_response = "yes";
    detect.parse_mode = "token";
    detect.run_id = "r";

    ValidatorVerdict seg;
    seg.sample_id = "s2";
    seg.task = Task::segment_blind;
    seg.predicted_ids = std::vector<int>{1, 4};
    seg.raw_response = "<documents>2, 5</documents>";
    seg.parse_mode = "tag";
    seg.run_id = "r";

    ValidatorVerdict failed;
    failed.sample_id = "s3";
    failed.task = Task::type_predict;
    failed.error = "retries exhausted";
    failed.error_kind = "transport";
    failed.run_id = "r";

    dataset_io::write_ledger(path, {detect, seg, failed});
    const auto loaded = dataset_io::read_ledger(path);
    REQUIRE(loaded.size() == 3);
    CHECK(loaded[0].detected == true);
    CHECK(!loaded[0].predicted_ids.has_value());
    CHECK(loaded[1].predicted_ids == std::vector<int>{1, 4});
    CHECK(loaded[2].error_kind == "transport");
    CHECK(loaded[2].error == "retries exhausted");
    fs::remove_all(dir);
}
