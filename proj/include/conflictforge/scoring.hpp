#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conflictforge/types.hpp"

namespace conflictforge::scoring {

struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct ScoreSet {
    std::map<std::string, double> values;  // metric name -> value in [0,1]
    std::vector<std::string> flags;        // e.g. division-by-zero conventions hit
    std::size_t scored = 0;                // verdicts that entered the metrics
    std::size_t excluded_transport = 0;    // transport-error verdicts left out
};

struct DetectionScores {
    ConfusionCounts counts;
    ScoreSet scores;  // accuracy, precision, recall, f1
};

enum class ErrorPolicy {
    exclude_transport,  // default: leave transport errors out, report count
    count_as_wrong,
};

struct ScoreOptions {
    ErrorPolicy errors = ErrorPolicy::exclude_transport;
    bool allow_partial = false;  // score a ledger flagged incomplete
};

// Positive class = contradiction present. precision tp/(tp+fp), recall
// tp/(tp+fn), f1 = harmonic mean, accuracy (tp+tn)/total; division-by-zero
// cases are 0 with a flag.
DetectionScores score_detection(const std::vector<ValidatorVerdict>& ledger,
                                const std::vector<DocumentSet>& dataset,
                                const ScoreOptions& options = {});

// 3-class accuracy and macro-F1 over {self, pair, conditional}. A class with
// neither golds nor predictions is excluded from the macro mean; a class with
// golds but no predictions contributes 0. Unparseable verdicts count as wrong.
ScoreSet score_type(const std::vector<ValidatorVerdict>& ledger,
                    const std::vector<DocumentSet>& dataset,
                    const ScoreOptions& options = {});

// Per-sample Jaccard (both sets empty -> 1, one empty -> 0) and per-sample
// set-F1, averaged over samples.
ScoreSet score_segmentation(const std::vector<ValidatorVerdict>& ledger,
                            const std::vector<DocumentSet>& dataset,
                            const ScoreOptions& options = {});

ScoreSet score_task(Task task, const std::vector<ValidatorVerdict>& ledger,
                    const std::vector<DocumentSet>& dataset,
                    const ScoreOptions& options = {});

enum class SliceAxis { kind, importance, placement, evidence_length_bucket };

SliceAxis slice_axis_from_string(std::string_view s);
std::string to_string(SliceAxis axis);

// Partitions samples by generation metadata and scores each slice with the
// task's metric set. Samples without the axis metadata are skipped (for
// axis=kind that means negatives); an axis nobody carries is a ScoringError.
// Empty slices are simply absent.
std::map<std::string, ScoreSet> slice(const std::vector<ValidatorVerdict>& ledger,
                                      const std::vector<DocumentSet>& dataset,
                                      Task task, SliceAxis axis,
                                      const ScoreOptions& options = {});

// Evidence-length bucket keys: 1-50, 51-100, 101-150, 151-200, 201+.
std::string evidence_length_bucket(int words);

struct AggregateStat {
    double mean = 0.0;
    double stddev = 0.0;  // population std over repeats

    std::string formatted() const;  // "0.831 ± 0.007"
};

// Per-metric mean and population std across repeated runs; requires >= 2
// score sets with identical metric keys.
std::map<std::string, AggregateStat> aggregate_runs(
    const std::vector<ScoreSet>& runs);

struct NaiveScanCounts {
    std::uint64_t singles = 0;  // n
    std::uint64_t pairs = 0;    // n(n-1)/2
    std::uint64_t triples = 0;  // n(n-1)(n-2)/6
};

// The per-sample LLM-call cost a pairwise/triple scanning validator would
// pay; shown in run summaries next to the actual one-call-per-cell count.
NaiveScanCounts naive_scan_counts(std::uint64_t n);

// --- report assembly -------------------------------------------------------

struct ReportKey {
    std::string model;
    std::string strategy;

    bool operator<(const ReportKey& o) const {
        return model != o.model ? model < o.model : strategy < o.strategy;
    }
};

struct TaskReport {
    ScoreSet scores;                               // first repeat (or the only one)
    std::vector<ScoreSet> runs;                    // per-repeat scores
    std::map<std::string, AggregateStat> aggregate;  // present when >= 2 repeats
    std::map<std::string, std::map<std::string, ScoreSet>> slices;  // axis -> key -> scores
    std::optional<ConfusionCounts> confusion;      // detection only
};

using MetricsReport = std::map<ReportKey, std::map<std::string, TaskReport>>;

nlohmann::json report_to_json(const MetricsReport& report);

// Markdown / CSV tables mirroring the benchmark's column structure:
// Conflict Detection (Accuracy, Precision, Recall, F1) | Type Detection
// (Accuracy, Macro F1) | Segmentation Guided (Jaccard, F1) | Blind (Jaccard, F1).
std::string report_to_markdown(const MetricsReport& report);
std::string report_to_csv(const MetricsReport& report);

// Per-slice CSV suitable for external plotting.
std::string slices_to_csv(const MetricsReport& report, SliceAxis axis);

}  // namespace conflictforge::scoring
