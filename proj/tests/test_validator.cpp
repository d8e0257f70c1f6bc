#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "conflictforge/conflictgen.hpp"
#include "conflictforge/corpus.hpp"
#include "conflictforge/dataset_io.hpp"
#include "conflictforge/errors.hpp"
#include "conflictforge/validator.hpp"

using namespace conflictforge;
using namespace conflictforge::validator;
namespace fs = std::filesystem;

static const fs::path kFixtures = CF_FIXTURES_DIR;
static const fs::path kTemplates = CF_TEMPLATES_DIR;

static const promptkit::PromptLibrary& library() {
    static const auto lib = promptkit::PromptLibrary::load(kTemplates);
    return lib;
}

static DocumentSet make_sample(const std::string& id, ContradictionKind kind,
                               std::vector<int> conflict_ids, int n_docs = 10) {
    DocumentSet set;
    set.sample_id = id;
    for (int i = 0; i < n_docs; ++i)
        set.documents.push_back({i,
                                 "Fact " + std::to_string(i) + " about topic " +
                                     id + ". A second sentence.",
                                 Origin::original, std::nullopt});
    set.label.kind = kind;
    set.label.doc_ids = std::move(conflict_ids);
    return set;
}

static TaskSpec spec_for(Task task, Strategy strategy = Strategy::basic) {
    TaskSpec spec;
    spec.task = task;
    spec.model = "mock";
    spec.strategy = strategy;
    spec.run_id = "test-run";
    return spec;
}

// a small labeled dataset: 4 positives + 2 negatives
static std::vector<DocumentSet> small_dataset() {
    return {
        make_sample("pair-0", ContradictionKind::pair, {3, 7}),
        make_sample("self-0", ContradictionKind::self, {2}),
        make_sample("cond-0", ContradictionKind::conditional, {1, 2, 3}),
        make_sample("pair-1", ContradictionKind::pair, {0, 5}),
        make_sample("none-0", ContradictionKind::none, {}),
        make_sample("none-1", ContradictionKind::none, {}),
    };
}

TEST_CASE("detection parses yes and no into correct verdicts") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->add_rule({"topic pair-0", std::nullopt, "yes"});
    mock->add_rule({"topic none-0", std::nullopt, "no"});
    gateway::Gateway gw(mock);

    const auto yes = run_detect(make_sample("pair-0", ContradictionKind::pair, {3, 7}),
                                spec_for(Task::detect), gw, library());
    CHECK(yes.detected == true);
    CHECK(yes.parse_mode == "token");
    CHECK(!yes.error.has_value());
    CHECK(yes.raw_response == "yes");

    const auto no = run_detect(make_sample("none-0", ContradictionKind::none, {}),
                               spec_for(Task::detect), gw, library());
    CHECK(no.detected == false);
}

TEST_CASE("unparseable detection responses stay in the ledger as wrong answers") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("I simply cannot commit to an answer here.");
    gateway::Gateway gw(mock);
    const auto v = run_detect(make_sample("pair-0", ContradictionKind::pair, {3, 7}),
                              spec_for(Task::detect), gw, library());
    CHECK(v.detected == false);
    CHECK(v.error_kind == "parse");
    CHECK(v.parse_mode == "none");
}

TEST_CASE("transport failures produce error verdicts, not exceptions") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("yes");
    mock->fail_next(10, 503);
    gateway::GatewayOptions options;
    options.max_retries = 1;
    gateway::Gateway gw(mock, options, std::make_shared<gateway::VirtualClock>());
    const auto v = run_detect(make_sample("pair-0", ContradictionKind::pair, {3, 7}),
                              spec_for(Task::detect), gw, library());
    CHECK(v.error_kind == "transport");
    CHECK(!v.detected.has_value());
}

TEST_CASE("type prediction rejects negative samples before any call") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("<type>pair</type>");
    gateway::Gateway gw(mock);
    CHECK_THROWS_AS(run_type_predict(make_sample("none-0", ContradictionKind::none, {}),
                                     spec_for(Task::type_predict), gw, library()),
                    ConfigError);
    CHECK(mock->invocations() == 0);
}

TEST_CASE("type prediction parses the tagged label") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("<type>conditional contradiction</type>");
    gateway::Gateway gw(mock);
    const auto v = run_type_predict(
        make_sample("cond-0", ContradictionKind::conditional, {1, 2, 3}),
        spec_for(Task::type_predict), gw, library());
    CHECK(v.predicted_kind == ContradictionKind::conditional);
    CHECK(v.parse_mode == "tag");
}

TEST_CASE("segmentation maps 1-based answers onto 0-based ids") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("<documents>4, 8</documents>");
    gateway::Gateway gw(mock);
    const auto v = run_segment(make_sample("pair-0", ContradictionKind::pair, {3, 7}),
                               spec_for(Task::segment_guided), gw, library(), true);
    CHECK(v.predicted_ids == std::vector<int>{3, 7});
    CHECK(v.parse_mode == "tag");
}

TEST_CASE("empty document tags are a legal empty prediction") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("<documents></documents>");
    gateway::Gateway gw(mock);
    const auto v = run_segment(make_sample("pair-0", ContradictionKind::pair, {3, 7}),
                               spec_for(Task::segment_blind), gw, library(), false);
    REQUIRE(v.predicted_ids.has_value());
    CHECK(v.predicted_ids->empty());
}

TEST_CASE("guided and blind prompts for one sample differ only by the type block") {
    // capture the exact prompts the two segmentation tasks send
    std::vector<std::string> prompts;
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->add_function_rule([&](const std::string& prompt) -> std::optional<std::string> {
        prompts.push_back(prompt);
        return "<documents>1</documents>";
    });
    gateway::Gateway gw(mock);

    for (int i = 0; i < 50; ++i) {
        prompts.clear();
        const auto sample = make_sample("pair-" + std::to_string(i),
                                        ContradictionKind::pair, {1, 4});
        (void)run_segment(sample, spec_for(Task::segment_guided), gw, library(), true);
        (void)run_segment(sample, spec_for(Task::segment_blind), gw, library(), false);
        REQUIRE(prompts.size() == 2);
        // both prompts carry the identical document block
        const std::string blocks = promptkit::document_blocks(sample.documents);
        CHECK(prompts[0].find(blocks) != std::string::npos);
        CHECK(prompts[1].find(blocks) != std::string::npos);
        // the guided prompt names the gold conflict type, the blind one never does
        CHECK(prompts[0].find("Conflict Type: Pair Contradiction") != std::string::npos);
        CHECK(prompts[1].find("Conflict Type:") == std::string::npos);
    }
}

TEST_CASE("benchmark yields one verdict per (sample, spec) cell in order") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->add_rule({"conflicting information? Answer yes or no", std::nullopt, "yes"});
    mock->add_rule({"predict the type of", std::nullopt, "<type>self</type>"});
    mock->add_rule({"contain the conflicting information", std::nullopt,
                    "<documents>1, 2</documents>"});
    gateway::Gateway gw(mock);

    const auto dataset = small_dataset();
    const std::vector<TaskSpec> specs = {
        spec_for(Task::detect), spec_for(Task::type_predict),
        spec_for(Task::segment_guided), spec_for(Task::segment_blind)};
    const auto ledger = run_benchmark(specs, dataset, gw, library(), 3);

    // detect covers all 6 samples, the other tasks only the 4 positives
    REQUIRE(ledger.verdicts.size() == 6 + 4 + 4 + 4);
    REQUIRE(ledger.manifests.size() == 4);
    CHECK(ledger.manifests[0].cells == 6);
    CHECK(ledger.manifests[1].cells == 4);
    CHECK(ledger.manifests[0].completion_ratio == 1.0);
    CHECK(!ledger.manifests[0].incomplete);

    // ledger ordered by (spec, sample index)
    CHECK(ledger.verdicts[0].sample_id == "pair-0");
    CHECK(ledger.verdicts[5].sample_id == "none-1");
    CHECK(ledger.verdicts[6].task == Task::type_predict);
    CHECK(ledger.verdicts[6].sample_id == "pair-0");

    // verdict shape law: exactly the task's field is populated
    for (const auto& v : ledger.verdicts) {
        switch (v.task) {
            case Task::detect:
                CHECK(v.detected.has_value());
                CHECK(!v.predicted_kind.has_value());
                CHECK(!v.predicted_ids.has_value());
                break;
            case Task::type_predict:
                CHECK(!v.detected.has_value());
                CHECK(v.predicted_kind.has_value());
                CHECK(!v.predicted_ids.has_value());
                break;
            default:
                CHECK(!v.detected.has_value());
                CHECK(!v.predicted_kind.has_value());
                CHECK(v.predicted_ids.has_value());
                break;
        }
    }
}

TEST_CASE("one gateway call per cell, across every task") {
    auto mock = gateway::MockBackend::algorithm_script();
    gateway::Gateway gw(mock);
    const auto dataset = small_dataset();

    for (Task task : {Task::detect, Task::type_predict, Task::segment_guided,
                      Task::segment_blind}) {
        mock->reset_invocations();
        const auto ledger = run_benchmark({spec_for(task)}, dataset, gw, library(), 2);
        CHECK(mock->invocations() == ledger.manifests[0].cells);
        CHECK(ledger.manifests[0].gateway_calls == ledger.manifests[0].cells);
    }
}

TEST_CASE("an injected transport failure flags the run incomplete") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("yes");
    mock->fail_next(1, 500);
    gateway::GatewayOptions options;
    options.max_retries = 0;
    gateway::Gateway gw(mock, options, std::make_shared<gateway::VirtualClock>());

    const auto dataset = small_dataset();
    const auto ledger =
        run_benchmark({spec_for(Task::detect)}, dataset, gw, library(), 1);
    REQUIRE(ledger.verdicts.size() == 6);
    std::size_t errors = 0;
    for (const auto& v : ledger.verdicts)
        if (v.error_kind == "transport") ++errors;
    CHECK(errors == 1);
    CHECK(ledger.manifests[0].completed == 5);
    CHECK(ledger.manifests[0].incomplete);
    CHECK(ledger.manifests[0].completion_ratio == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("ledgers are deterministic with the mock backend, timing aside") {
    auto run = [&] {
        auto mock = gateway::MockBackend::algorithm_script();
        gateway::Gateway gw(mock);
        const auto ledger = run_benchmark({spec_for(Task::detect)}, small_dataset(),
                                          gw, library(), 4);
        std::string bytes;
        for (auto v : ledger.verdicts) {
            v.latency_ms = 0;  // timing masked
            bytes += dataset_io::verdict_to_json(v).dump() + "\n";
        }
        return bytes;
    };
    CHECK(run() == run());
}

TEST_CASE("repeat index salts the cache so repeats hit the backend") {
    auto mock = std::make_shared<gateway::MockBackend>();
    mock->set_default_response("yes");
    gateway::GatewayOptions options;
    options.cache = gateway::CacheMode::memory;
    gateway::Gateway gw(mock, options);
    const auto dataset = small_dataset();

    auto spec = spec_for(Task::detect);
    (void)run_benchmark({spec}, dataset, gw, library(), 1);
    CHECK(mock->invocations() == 6);
    // same repeat: cache hits, no new backend calls
    (void)run_benchmark({spec}, dataset, gw, library(), 1);
    CHECK(mock->invocations() == 6);
    // new repeat index: salted keys force fresh calls
    spec.repeat_index = 1;
    (void)run_benchmark({spec}, dataset, gw, library(), 1);
    CHECK(mock->invocations() == 12);
}

TEST_CASE("manifest carries the reproducibility triple and naive scan counts") {
    auto mock = gateway::MockBackend::algorithm_script();
    gateway::Gateway gw(mock);
    auto dataset = small_dataset();
    dataset.front().provenance.master_seed = 77;
    const auto ledger =
        run_benchmark({spec_for(Task::detect)}, dataset, gw, library(), 1);
    const auto j = manifest_to_json(ledger.manifests[0]);
    CHECK(j["provenance"]["tool_version"] == std::string(kToolVersion));
    CHECK(j["provenance"]["master_seed"] == 77);
    CHECK(!j["provenance"]["prompts_hash"].get<std::string>().empty());
    CHECK(j["naive_scan"]["singles"] == 10);
    CHECK(j["naive_scan"]["pairs"] == 45);
    CHECK(j["naive_scan"]["triples"] == 120);
}
