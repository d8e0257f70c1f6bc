#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "conflictforge/digest.hpp"
#include "conflictforge/errors.hpp"
#include "conflictforge/scoring.hpp"

using namespace conflictforge;
using namespace conflictforge::scoring;

// ---------------------------------------------------------------------------
// builders

static DocumentSet gold_sample(const std::string& id, ContradictionKind kind,
                               std::vector<int> ids = {}) {
    DocumentSet set;
    set.sample_id = id;
    for (int i = 0; i < 10; ++i)
        set.documents.push_back({i, "Doc " + std::to_string(i) + ".",
                                 Origin::original, std::nullopt});
    set.label.kind = kind;
    if (ids.empty()) {
        switch (kind) {
            case ContradictionKind::none: break;
            case ContradictionKind::self: ids = {0}; break;
            case ContradictionKind::pair: ids = {0, 1}; break;
            case ContradictionKind::conditional: ids = {0, 1, 2}; break;
        }
    }
    set.label.doc_ids = std::move(ids);
    return set;
}

static ValidatorVerdict detect_verdict(const std::string& id, bool answer) {
    ValidatorVerdict v;
    v.sample_id = id;
    v.task = Task::detect;
    v.detected = answer;
    return v;
}

static ValidatorVerdict type_verdict(const std::string& id,
                                     std::optional<ContradictionKind> kind) {
    ValidatorVerdict v;
    v.sample_id = id;
    v.task = Task::type_predict;
    v.predicted_kind = kind;
    if (!kind) {
        v.error = "no contradiction type in response";
        v.error_kind = "parse";
    }
    return v;
}

static ValidatorVerdict seg_verdict(const std::string& id, std::set<int> ids) {
    ValidatorVerdict v;
    v.sample_id = id;
    v.task = Task::segment_guided;
    v.predicted_ids = std::vector<int>(ids.begin(), ids.end());
    return v;
}

// ---------------------------------------------------------------------------
// detection

TEST_CASE("perfect predictions score 1.0 everywhere") {
    std::vector<DocumentSet> dataset = {gold_sample("a", ContradictionKind::pair),
                                        gold_sample("b", ContradictionKind::none)};
    std::vector<ValidatorVerdict> ledger = {detect_verdict("a", true),
                                            detect_verdict("b", false)};
    const auto out = score_detection(ledger, dataset);
    CHECK(out.scores.values.at("accuracy") == 1.0);
    CHECK(out.scores.values.at("precision") == 1.0);
    CHECK(out.scores.values.at("recall") == 1.0);
    CHECK(out.scores.values.at("f1") == 1.0);
}

TEST_CASE("the formula-forced small case: tp=2 fp=0 fn=1 tn=1") {
    std::vector<DocumentSet> dataset = {
        gold_sample("p1", ContradictionKind::pair),
        gold_sample("p2", ContradictionKind::self),
        gold_sample("p3", ContradictionKind::conditional),
        gold_sample("n1", ContradictionKind::none)};
    std::vector<ValidatorVerdict> ledger = {
        detect_verdict("p1", true), detect_verdict("p2", true),
        detect_verdict("p3", false), detect_verdict("n1", false)};
    const auto out = score_detection(ledger, dataset);
    CHECK(out.counts.tp == 2);
    CHECK(out.counts.fp == 0);
    CHECK(out.counts.fn == 1);
    CHECK(out.counts.tn == 1);
    CHECK(out.scores.values.at("precision") == doctest::Approx(1.0));
    CHECK(out.scores.values.at("recall") == doctest::Approx(2.0 / 3.0));
    CHECK(out.scores.values.at("f1") == doctest::Approx(0.8));
    CHECK(out.scores.values.at("accuracy") == doctest::Approx(0.75));
}

TEST_CASE("division-by-zero cases score 0 with a flag") {
    std::vector<DocumentSet> dataset = {gold_sample("n", ContradictionKind::none)};
    std::vector<ValidatorVerdict> ledger = {detect_verdict("n", false)};
    const auto out = score_detection(ledger, dataset);
    CHECK(out.scores.values.at("precision") == 0.0);
    CHECK(out.scores.values.at("recall") == 0.0);
    CHECK(!out.scores.flags.empty());
}

TEST_CASE("binary metrics match a brute-force counting oracle on 1000 instances") {
    Rng rng(314159);
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n = 2 + rng.bounded(40);
        std::vector<DocumentSet> dataset;
        std::vector<ValidatorVerdict> ledger;
        std::vector<std::pair<bool, bool>> truth;  // (gold, pred)
        for (std::size_t i = 0; i < n; ++i) {
            const bool gold = rng.bounded(2) == 1;
            const bool pred = rng.bounded(2) == 1;
            const std::string id = "s" + std::to_string(i);
            dataset.push_back(gold_sample(
                id, gold ? ContradictionKind::pair : ContradictionKind::none));
            ledger.push_back(detect_verdict(id, pred));
            truth.push_back({gold, pred});
        }

        // oracle: plain counting loop, no shared code with the scorer
        double tp = 0, fp = 0, fn = 0, tn = 0;
        for (const auto& [gold, pred] : truth) {
            if (gold && pred) tp++;
            if (!gold && pred) fp++;
            if (gold && !pred) fn++;
            if (!gold && !pred) tn++;
        }
        const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
        const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
        const double f1 = precision + recall > 0
                              ? 2 * precision * recall / (precision + recall)
                              : 0.0;
        const double accuracy = (tp + tn) / static_cast<double>(n);

        const auto out = score_detection(ledger, dataset);
        CHECK(std::abs(out.scores.values.at("precision") - precision) < 1e-12);
        CHECK(std::abs(out.scores.values.at("recall") - recall) < 1e-12);
        CHECK(std::abs(out.scores.values.at("f1") - f1) < 1e-12);
        CHECK(std::abs(out.scores.values.at("accuracy") - accuracy) < 1e-12);
    }
}

TEST_CASE("ledger/dataset sample mismatch is a scoring error") {
    std::vector<DocumentSet> dataset = {gold_sample("a", ContradictionKind::none)};
    std::vector<ValidatorVerdict> ledger = {detect_verdict("zz", false)};
    CHECK_THROWS_AS(score_detection(ledger, dataset), ScoringError);
}

TEST_CASE("transport errors are excluded by default and countable on demand") {
    std::vector<DocumentSet> dataset = {gold_sample("a", ContradictionKind::pair),
                                        gold_sample("b", ContradictionKind::pair)};
    ValidatorVerdict err;
    err.sample_id = "b";
    err.task = Task::detect;
    err.error = "retries exhausted";
    err.error_kind = "transport";
    std::vector<ValidatorVerdict> ledger = {detect_verdict("a", true), err};

    const auto excluded = score_detection(ledger, dataset);
    CHECK(excluded.scores.excluded_transport == 1);
    CHECK(excluded.counts.total() == 1);
    CHECK(excluded.scores.values.at("recall") == 1.0);

    ScoreOptions wrong;
    wrong.errors = ErrorPolicy::count_as_wrong;
    const auto counted = score_detection(ledger, dataset, wrong);
    CHECK(counted.counts.total() == 2);
    CHECK(counted.counts.fn == 1);
    CHECK(counted.scores.values.at("recall") == 0.5);
}

// ---------------------------------------------------------------------------
// type prediction

TEST_CASE("perfect 3-class predictions score accuracy and macro-F1 of 1") {
    std::vector<DocumentSet> dataset = {
        gold_sample("s", ContradictionKind::self),
        gold_sample("p", ContradictionKind::pair),
        gold_sample("c", ContradictionKind::conditional)};
    std::vector<ValidatorVerdict> ledger = {
        type_verdict("s", ContradictionKind::self),
        type_verdict("p", ContradictionKind::pair),
        type_verdict("c", ContradictionKind::conditional)};
    const auto out = score_type(ledger, dataset);
    CHECK(out.values.at("accuracy") == 1.0);
    CHECK(out.values.at("macro_f1") == 1.0);
}

TEST_CASE("the degenerate all-self predictor on the benchmark kind mix") {
    // 491 self / 356 pair / 320 conditional golds, everything predicted self
    std::vector<DocumentSet> dataset;
    std::vector<ValidatorVerdict> ledger;
    std::size_t idx = 0;
    auto add = [&](ContradictionKind kind, int count) {
        for (int i = 0; i < count; ++i) {
            const std::string id = "s" + std::to_string(idx++);
            dataset.push_back(gold_sample(id, kind));
            ledger.push_back(type_verdict(id, ContradictionKind::self));
        }
    };
    add(ContradictionKind::self, 491);
    add(ContradictionKind::pair, 356);
    add(ContradictionKind::conditional, 320);

    const auto out = score_type(ledger, dataset);
    // oracle arithmetic: accuracy 491/1167; self F1 = 2*491/(2*491 + 676);
    // pair and conditional have golds but no predictions -> F1 0
    CHECK(out.values.at("accuracy") == doctest::Approx(491.0 / 1167.0).epsilon(1e-9));
    const double f1_self = 2.0 * 491.0 / (2.0 * 491.0 + 676.0);
    CHECK(out.values.at("f1_self") == doctest::Approx(f1_self).epsilon(1e-9));
    CHECK(out.values.at("f1_pair") == 0.0);
    CHECK(out.values.at("f1_conditional") == 0.0);
    CHECK(out.values.at("macro_f1") == doctest::Approx(f1_self / 3.0).epsilon(1e-9));
}

TEST_CASE("unparseable type verdicts count as wrong, never dropped") {
    std::vector<DocumentSet> dataset = {gold_sample("a", ContradictionKind::pair),
                                        gold_sample("b", ContradictionKind::pair)};
    std::vector<ValidatorVerdict> ledger = {
        type_verdict("a", ContradictionKind::pair), type_verdict("b", std::nullopt)};
    const auto out = score_type(ledger, dataset);
    CHECK(out.scored == 2);
    CHECK(out.values.at("accuracy") == 0.5);
}

TEST_CASE("macro-F1 matches a brute-force per-class oracle on 1000 instances") {
    constexpr ContradictionKind kKinds[] = {ContradictionKind::self,
                                            ContradictionKind::pair,
                                            ContradictionKind::conditional};
    Rng rng(271828);
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n = 3 + rng.bounded(30);
        std::vector<DocumentSet> dataset;
        std::vector<ValidatorVerdict> ledger;
        std::vector<std::pair<int, int>> truth;  // (gold class, pred class or -1)
        for (std::size_t i = 0; i < n; ++i) {
            const int gold = static_cast<int>(rng.bounded(3));
            const int pred = static_cast<int>(rng.bounded(4)) - 1;  // -1: unparseable
            const std::string id = "s" + std::to_string(i);
            dataset.push_back(gold_sample(id, kKinds[gold]));
            ledger.push_back(type_verdict(
                id, pred < 0 ? std::nullopt
                             : std::optional<ContradictionKind>(kKinds[pred])));
            truth.push_back({gold, pred});
        }

        // oracle: independent per-class counting
        double correct = 0;
        double f1_sum = 0;
        int classes_in_mean = 0;
        for (int c = 0; c < 3; ++c) {
            double tp = 0, fp = 0, fn = 0;
            for (const auto& [gold, pred] : truth) {
                if (gold == c && pred == c) tp++;
                if (gold != c && pred == c) fp++;
                if (gold == c && pred != c) fn++;
            }
            if (tp + fp + fn > 0) {
                f1_sum += 2 * tp / (2 * tp + fp + fn);
                classes_in_mean++;
            }
        }
        for (const auto& [gold, pred] : truth)
            if (gold == pred) correct++;
        const double macro = classes_in_mean ? f1_sum / classes_in_mean : 0.0;

        const auto out = score_type(ledger, dataset);
        CHECK(std::abs(out.values.at("accuracy") - correct / n) < 1e-12);
        CHECK(std::abs(out.values.at("macro_f1") - macro) < 1e-12);

        // macro-F1 never exceeds the best per-class F1
        const double best = std::max({out.values.at("f1_self"),
                                      out.values.at("f1_pair"),
                                      out.values.at("f1_conditional")});
        CHECK(out.values.at("macro_f1") <= best + 1e-12);
    }
}

// ---------------------------------------------------------------------------
// segmentation

TEST_CASE("set arithmetic basics: pred {1,3} against gold {1,2}") {
    std::vector<DocumentSet> dataset = {
        gold_sample("a", ContradictionKind::pair, {1, 2})};
    std::vector<ValidatorVerdict> ledger = {seg_verdict("a", {1, 3})};
    const auto out = score_segmentation(ledger, dataset);
    CHECK(out.values.at("jaccard_mean") == doctest::Approx(1.0 / 3.0));
    CHECK(out.values.at("f1_mean") == doctest::Approx(0.5));
}

TEST_CASE("exact prediction scores 1.0 on both metrics") {
    std::vector<DocumentSet> dataset = {
        gold_sample("a", ContradictionKind::conditional, {2, 5, 7})};
    std::vector<ValidatorVerdict> ledger = {seg_verdict("a", {2, 5, 7})};
    const auto out = score_segmentation(ledger, dataset);
    CHECK(out.values.at("jaccard_mean") == 1.0);
    CHECK(out.values.at("f1_mean") == 1.0);
}

TEST_CASE("jaccard edge conventions hold exactly") {
    // empty prediction against a non-empty gold
    std::vector<DocumentSet> dataset = {
        gold_sample("a", ContradictionKind::pair, {3, 7})};
    std::vector<ValidatorVerdict> ledger = {seg_verdict("a", {})};
    const auto out = score_segmentation(ledger, dataset);
    CHECK(out.values.at("jaccard_mean") == 0.0);
    CHECK(out.values.at("f1_mean") == 0.0);
}

TEST_CASE("out-of-range prediction is a scoring error naming the sample") {
    std::vector<DocumentSet> dataset = {
        gold_sample("a", ContradictionKind::pair, {1, 2})};
    std::vector<ValidatorVerdict> ledger = {seg_verdict("a", {11})};
    CHECK_THROWS_WITH_AS(score_segmentation(ledger, dataset),
                         doctest::Contains("a"), ScoringError);
}

TEST_CASE("segmentation means match a brute-force oracle on 1000 set pairs") {
    Rng rng(662607);
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n = 1 + rng.bounded(12);
        std::vector<DocumentSet> dataset;
        std::vector<ValidatorVerdict> ledger;
        std::vector<std::pair<std::set<int>, std::set<int>>> truth;
        for (std::size_t i = 0; i < n; ++i) {
            std::set<int> gold, pred;
            // gold must be one of the legal cardinalities 1..3
            const int gold_size = 1 + static_cast<int>(rng.bounded(3));
            while (static_cast<int>(gold.size()) < gold_size)
                gold.insert(static_cast<int>(rng.bounded(10)));
            const int pred_size = static_cast<int>(rng.bounded(5));
            while (static_cast<int>(pred.size()) < pred_size)
                pred.insert(static_cast<int>(rng.bounded(10)));
            const std::string id = "s" + std::to_string(i);
            const auto kind = gold.size() == 1   ? ContradictionKind::self
                              : gold.size() == 2 ? ContradictionKind::pair
                                                 : ContradictionKind::conditional;
            dataset.push_back(
                gold_sample(id, kind, std::vector<int>(gold.begin(), gold.end())));
            ledger.push_back(seg_verdict(id, pred));
            truth.push_back({gold, pred});
        }

        // oracle: nested-loop set arithmetic
        double jaccard_sum = 0, f1_sum = 0;
        for (const auto& [gold, pred] : truth) {
            int inter = 0;
            for (int g : gold)
                for (int p : pred)
                    if (g == p) inter++;
            const int uni = static_cast<int>(gold.size() + pred.size()) - inter;
            if (gold.empty() && pred.empty()) {
                jaccard_sum += 1.0;
                f1_sum += 1.0;
                continue;
            }
            jaccard_sum += uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
            if (inter == 0) continue;
            const double p = static_cast<double>(inter) / pred.size();
            const double r = static_cast<double>(inter) / gold.size();
            f1_sum += 2 * p * r / (p + r);
        }

        const auto out = score_segmentation(ledger, dataset);
        CHECK(std::abs(out.values.at("jaccard_mean") - jaccard_sum / n) < 1e-12);
        CHECK(std::abs(out.values.at("f1_mean") - f1_sum / n) < 1e-12);
        CHECK(out.values.at("jaccard_mean") >= 0.0);
        CHECK(out.values.at("jaccard_mean") <= 1.0);
    }
}

// ---------------------------------------------------------------------------
// slices

TEST_CASE("slice scores equal whole-dataset scoring of each partition") {
    // hand-built 12-sample detect ledger with known per-slice outcomes
    std::vector<DocumentSet> dataset;
    std::vector<ValidatorVerdict> ledger;
    const ContradictionKind kinds[] = {ContradictionKind::self,
                                       ContradictionKind::pair,
                                       ContradictionKind::conditional};
    for (int i = 0; i < 12; ++i) {
        const std::string id = "s" + std::to_string(i);
        auto sample = gold_sample(id, kinds[i % 3]);
        sample.label.meta.importance =
            i % 2 == 0 ? Importance::most : Importance::least;
        sample.label.meta.evidence_length_words = 25 + (i % 4) * 50;
        dataset.push_back(sample);
        ledger.push_back(detect_verdict(id, i % 4 != 0));
    }

    const auto by_kind = slice(ledger, dataset, Task::detect, SliceAxis::kind);
    REQUIRE(by_kind.size() == 3);
    for (const auto& [key, scores] : by_kind) {
        // restriction: score only the verdicts whose sample has this kind
        std::vector<ValidatorVerdict> restricted;
        for (const auto& v : ledger) {
            for (const auto& s : dataset)
                if (s.sample_id == v.sample_id && to_string(s.label.kind) == key)
                    restricted.push_back(v);
        }
        const auto direct = score_detection(restricted, dataset);
        for (const auto& [metric, value] : scores.values)
            CHECK(value == direct.scores.values.at(metric));
        CHECK(scores.scored == restricted.size());
    }

    const auto by_importance =
        slice(ledger, dataset, Task::detect, SliceAxis::importance);
    REQUIRE(by_importance.size() == 2);
    CHECK(by_importance.count("most") == 1);
    CHECK(by_importance.count("least") == 1);

    const auto by_length =
        slice(ledger, dataset, Task::detect, SliceAxis::evidence_length_bucket);
    CHECK(by_length.size() == 4);
    CHECK(by_length.count("1-50") == 1);
    CHECK(by_length.count("151-200") == 1);
}

TEST_CASE("placement slicing keys near and far") {
    std::vector<DocumentSet> dataset;
    std::vector<ValidatorVerdict> ledger;
    for (int i = 0; i < 8; ++i) {
        const std::string id = "p" + std::to_string(i);
        auto sample = gold_sample(id, ContradictionKind::pair);
        sample.label.meta.placement = i % 2 == 0 ? "near" : "far";
        dataset.push_back(sample);
        ledger.push_back(detect_verdict(id, true));
    }
    const auto slices = slice(ledger, dataset, Task::detect, SliceAxis::placement);
    REQUIRE(slices.size() == 2);
    CHECK(slices.at("near").scored == 4);
    CHECK(slices.at("far").scored == 4);
}

TEST_CASE("an axis nobody carries raises a slicing error") {
    std::vector<DocumentSet> dataset = {gold_sample("a", ContradictionKind::none)};
    std::vector<ValidatorVerdict> ledger = {detect_verdict("a", false)};
    CHECK_THROWS_AS(slice(ledger, dataset, Task::detect, SliceAxis::importance),
                    ScoringError);
}

TEST_CASE("evidence length buckets match the published ranges") {
    CHECK(evidence_length_bucket(1) == "1-50");
    CHECK(evidence_length_bucket(50) == "1-50");
    CHECK(evidence_length_bucket(51) == "51-100");
    CHECK(evidence_length_bucket(100) == "51-100");
    CHECK(evidence_length_bucket(101) == "101-150");
    CHECK(evidence_length_bucket(150) == "101-150");
    CHECK(evidence_length_bucket(151) == "151-200");
    CHECK(evidence_length_bucket(200) == "151-200");
    CHECK(evidence_length_bucket(201) == "201+");
}

// ---------------------------------------------------------------------------
// aggregation

static ScoreSet score_set(std::map<std::string, double> values) {
    ScoreSet s;
    s.values = std::move(values);
    return s;
}

TEST_CASE("two identical runs aggregate with std 0.000") {
    const auto runs = std::vector<ScoreSet>{score_set({{"accuracy", 0.831}}),
                                            score_set({{"accuracy", 0.831}})};
    const auto agg = aggregate_runs(runs);
    CHECK(agg.at("accuracy").mean == doctest::Approx(0.831));
    CHECK(agg.at("accuracy").stddev == 0.0);
    CHECK(agg.at("accuracy").formatted() == "0.831 ± 0.000");
}

TEST_CASE("population std over {0.80, 0.86} is 0.030") {
    const auto agg = aggregate_runs({score_set({{"f1", 0.80}}),
                                     score_set({{"f1", 0.86}})});
    CHECK(agg.at("f1").mean == doctest::Approx(0.83));
    CHECK(agg.at("f1").stddev == doctest::Approx(0.03));
    CHECK(agg.at("f1").formatted() == "0.830 ± 0.030");
}

TEST_CASE("the {0.824, 0.838} pair formats as 0.831 ± 0.007") {
    const auto agg = aggregate_runs({score_set({{"recall", 0.824}}),
                                     score_set({{"recall", 0.838}})});
    CHECK(agg.at("recall").formatted() == "0.831 ± 0.007");
}

TEST_CASE("aggregation rejects mismatched metric sets and single runs") {
    CHECK_THROWS_AS(aggregate_runs({score_set({{"a", 1.0}})}), ScoringError);
    CHECK_THROWS_AS(aggregate_runs({score_set({{"a", 1.0}}),
                                    score_set({{"b", 1.0}})}),
                    ScoringError);
}

// ---------------------------------------------------------------------------
// naive scan counts

TEST_CASE("naive scan counts follow the binomial formulas") {
    const auto n20 = naive_scan_counts(20);
    CHECK(n20.singles == 20);
    CHECK(n20.pairs == 190);
    CHECK(n20.triples == 1140);

    const auto n10 = naive_scan_counts(10);
    CHECK(n10.singles == 10);
    CHECK(n10.pairs == 45);
    CHECK(n10.triples == 120);

    const auto n3 = naive_scan_counts(3);
    CHECK(n3.singles == 3);
    CHECK(n3.pairs == 3);
    CHECK(n3.triples == 1);

    const auto n0 = naive_scan_counts(0);
    CHECK(n0.singles == 0);
    CHECK(n0.pairs == 0);
    CHECK(n0.triples == 0);

    // quadratic growth: pairs(200)/pairs(100) approaches 4
    CHECK(naive_scan_counts(100).pairs == 4950);
    CHECK(naive_scan_counts(200).pairs == 19900);
}

// ---------------------------------------------------------------------------
// report rendering

TEST_CASE("markdown and csv reports carry the benchmark column structure") {
    MetricsReport report;
    TaskReport detect;
    detect.scores = score_set({{"accuracy", 0.71},
                               {"precision", 0.951},
                               {"recall", 0.566},
                               {"f1", 0.71}});
    report[{"model-a", "cot"}]["detect"] = detect;

    const auto md = report_to_markdown(report);
    CHECK(md.find("| Model + Strategy |") != std::string::npos);
    CHECK(md.find("Detection Accuracy") != std::string::npos);
    CHECK(md.find("Type Macro F1") != std::string::npos);
    CHECK(md.find("Guided Jaccard") != std::string::npos);
    CHECK(md.find("Blind F1") != std::string::npos);
    CHECK(md.find("| model-a + cot | 0.710 | 0.951 | 0.566 | 0.710 |") !=
          std::string::npos);

    const auto csv = report_to_csv(report);
    CHECK(csv.find("model,strategy,detect.accuracy") == 0);
    CHECK(csv.find("model-a,cot,0.710,0.951,0.566,0.710") != std::string::npos);
}

TEST_CASE("aggregated cells format as mean ± std in the tables") {
    MetricsReport report;
    TaskReport detect;
    detect.runs = {score_set({{"accuracy", 0.824}}), score_set({{"accuracy", 0.838}})};
    detect.scores = detect.runs.front();
    detect.aggregate = aggregate_runs(detect.runs);
    report[{"m", "basic"}]["detect"] = detect;
    const auto md = report_to_markdown(report);
    CHECK(md.find("0.831 ± 0.007") != std::string::npos);
}

TEST_CASE("slice csv lists every slice metric row") {
    std::vector<DocumentSet> dataset;
    std::vector<ValidatorVerdict> ledger;
    for (int i = 0; i < 6; ++i) {
        const std::string id = "s" + std::to_string(i);
        auto sample = gold_sample(id, i % 2 == 0 ? ContradictionKind::self
                                                 : ContradictionKind::pair);
        dataset.push_back(sample);
        ledger.push_back(detect_verdict(id, true));
    }
    MetricsReport report;
    TaskReport detect;
    detect.scores = score_task(Task::detect, ledger, dataset);
    detect.slices["kind"] = slice(ledger, dataset, Task::detect, SliceAxis::kind);
    report[{"m", "basic"}]["detect"] = detect;

    const auto csv = slices_to_csv(report, SliceAxis::kind);
    CHECK(csv.find("m,basic,detect,self,accuracy,1.000") != std::string::npos);
    CHECK(csv.find("m,basic,detect,pair,accuracy,1.000") != std::string::npos);
}
