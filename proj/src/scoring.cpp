#include "conflictforge/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "conflictforge/errors.hpp"

namespace conflictforge::scoring {

namespace {

using nlohmann::json;

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::unordered_map<std::string, const DocumentSet*> index_dataset(
    const std::vector<DocumentSet>& dataset) {
    std::unordered_map<std::string, const DocumentSet*> by_id;
    by_id.reserve(dataset.size());
    for (const auto& s : dataset) by_id[s.sample_id] = &s;
    return by_id;
}

const DocumentSet& sample_for(
    const std::unordered_map<std::string, const DocumentSet*>& by_id,
    const ValidatorVerdict& v) {
    const auto it = by_id.find(v.sample_id);
    if (it == by_id.end())
        throw ScoringError("ledger sample_id '" + v.sample_id +
                           "' not present in the dataset");
    return *it->second;
}

double safe_div(std::uint64_t num, std::uint64_t den, const char* name,
                std::vector<std::string>& flags) {
    if (den == 0) {
        flags.push_back(std::string(name) + ": division by zero, defined as 0");
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

struct SetPair {
    std::set<int> pred;
    std::set<int> gold;
};

double jaccard(const SetPair& p) {
    if (p.pred.empty() && p.gold.empty()) return 1.0;
    std::vector<int> inter;
    std::set_intersection(p.pred.begin(), p.pred.end(), p.gold.begin(),
                          p.gold.end(), std::back_inserter(inter));
    std::vector<int> uni;
    std::set_union(p.pred.begin(), p.pred.end(), p.gold.begin(), p.gold.end(),
                   std::back_inserter(uni));
    return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

double set_f1(const SetPair& p) {
    if (p.pred.empty() && p.gold.empty()) return 1.0;
    std::vector<int> inter;
    std::set_intersection(p.pred.begin(), p.pred.end(), p.gold.begin(),
                          p.gold.end(), std::back_inserter(inter));
    if (inter.empty()) return 0.0;
    const double precision =
        static_cast<double>(inter.size()) / static_cast<double>(p.pred.size());
    const double recall =
        static_cast<double>(inter.size()) / static_cast<double>(p.gold.size());
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

DetectionScores score_detection(const std::vector<ValidatorVerdict>& ledger,
                                const std::vector<DocumentSet>& dataset,
                                const ScoreOptions& options) {
    const auto by_id = index_dataset(dataset);
    DetectionScores out;
    for (const auto& v : ledger) {
        if (v.task != Task::detect)
            throw ScoringError("score_detection saw a " + to_string(v.task) +
                               " verdict");
        const DocumentSet& sample = sample_for(by_id, v);
        const bool gold = sample.label.kind != ContradictionKind::none;
        bool pred;
        if (v.error_kind == "transport") {
            if (options.errors == ErrorPolicy::exclude_transport) {
                ++out.scores.excluded_transport;
                continue;
            }
            pred = !gold;  // count-as-wrong
        } else {
            if (!v.detected)
                throw ScoringError("detect verdict for " + v.sample_id +
                                   " carries no prediction");
            pred = *v.detected;
        }
        if (gold && pred) ++out.counts.tp;
        else if (!gold && pred) ++out.counts.fp;
        else if (gold && !pred) ++out.counts.fn;
        else ++out.counts.tn;
    }

    auto& flags = out.scores.flags;
    const auto& c = out.counts;
    out.scores.scored = c.total();
    const double precision = safe_div(c.tp, c.tp + c.fp, "precision", flags);
    const double recall = safe_div(c.tp, c.tp + c.fn, "recall", flags);
    const double f1 = (precision + recall) > 0
                          ? 2.0 * precision * recall / (precision + recall)
                          : (flags.push_back("f1: division by zero, defined as 0"),
                             0.0);
    out.scores.values["accuracy"] = safe_div(c.tp + c.tn, c.total(), "accuracy", flags);
    out.scores.values["precision"] = precision;
    out.scores.values["recall"] = recall;
    out.scores.values["f1"] = f1;
    return out;
}

ScoreSet score_type(const std::vector<ValidatorVerdict>& ledger,
                    const std::vector<DocumentSet>& dataset,
                    const ScoreOptions& options) {
    const auto by_id = index_dataset(dataset);
    constexpr ContradictionKind kClasses[] = {ContradictionKind::self,
                                              ContradictionKind::pair,
                                              ContradictionKind::conditional};
    std::map<ContradictionKind, std::uint64_t> tp, fp, fn;
    std::uint64_t correct = 0, scored = 0;

    ScoreSet out;
    for (const auto& v : ledger) {
        if (v.task != Task::type_predict)
            throw ScoringError("score_type saw a " + to_string(v.task) + " verdict");
        const DocumentSet& sample = sample_for(by_id, v);
        const ContradictionKind gold = sample.label.kind;
        if (gold == ContradictionKind::none)
            throw ScoringError("type ledger contains a kind=none sample: " +
                               v.sample_id);
        if (v.error_kind == "transport" &&
            options.errors == ErrorPolicy::exclude_transport) {
            ++out.excluded_transport;
            continue;
        }
        ++scored;
        const std::optional<ContradictionKind> pred =
            v.error_kind == "transport" ? std::nullopt : v.predicted_kind;
        if (pred && *pred == gold) {
            ++correct;
            ++tp[gold];
        } else {
            ++fn[gold];
            if (pred) ++fp[*pred];  // unparseable predictions credit no class
        }
    }

    out.scored = scored;
    out.values["accuracy"] =
        safe_div(correct, scored, "accuracy", out.flags);

    double f1_sum = 0.0;
    int f1_classes = 0;
    for (ContradictionKind c : kClasses) {
        const std::uint64_t denom = 2 * tp[c] + fp[c] + fn[c];
        const double f1 =
            denom == 0 ? 0.0
                       : 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
        out.values["f1_" + to_string(c)] = f1;  // stable key set across runs
        if (denom == 0) continue;  // no golds, no predictions: not in the mean
        f1_sum += f1;
        ++f1_classes;
    }
    out.values["macro_f1"] = f1_classes == 0 ? 0.0 : f1_sum / f1_classes;
    if (f1_classes == 0)
        out.flags.push_back("macro_f1: no scoreable class, defined as 0");
    return out;
}

ScoreSet score_segmentation(const std::vector<ValidatorVerdict>& ledger,
                            const std::vector<DocumentSet>& dataset,
                            const ScoreOptions& options) {
    const auto by_id = index_dataset(dataset);
    ScoreSet out;
    double jaccard_sum = 0.0, f1_sum = 0.0;
    std::uint64_t micro_inter = 0, micro_pred = 0, micro_gold = 0;
    std::size_t n = 0;

    for (const auto& v : ledger) {
        if (v.task != Task::segment_guided && v.task != Task::segment_blind)
            throw ScoringError("score_segmentation saw a " + to_string(v.task) +
                               " verdict");
        const DocumentSet& sample = sample_for(by_id, v);
        SetPair pair;
        pair.gold.insert(sample.label.doc_ids.begin(), sample.label.doc_ids.end());
        if (v.error_kind == "transport") {
            if (options.errors == ErrorPolicy::exclude_transport) {
                ++out.excluded_transport;
                continue;
            }
            // count-as-wrong: empty prediction against a non-empty gold
        } else {
            if (!v.predicted_ids)
                throw ScoringError("segmentation verdict for " + v.sample_id +
                                   " carries no prediction");
            for (int id : *v.predicted_ids) {
                if (id < 0 || id >= static_cast<int>(sample.documents.size()))
                    throw ScoringError("predicted id " + std::to_string(id) +
                                       " out of range for sample " + v.sample_id);
                pair.pred.insert(id);
            }
        }
        ++n;
        jaccard_sum += jaccard(pair);
        f1_sum += set_f1(pair);
        std::vector<int> inter;
        std::set_intersection(pair.pred.begin(), pair.pred.end(),
                              pair.gold.begin(), pair.gold.end(),
                              std::back_inserter(inter));
        micro_inter += inter.size();
        micro_pred += pair.pred.size();
        micro_gold += pair.gold.size();
    }

    out.scored = n;
    if (n == 0) {
        out.flags.push_back("segmentation: no scoreable samples");
        out.values["jaccard_mean"] = 0.0;
        out.values["f1_mean"] = 0.0;
        out.values["f1_micro"] = 0.0;
        return out;
    }
    out.values["jaccard_mean"] = jaccard_sum / static_cast<double>(n);
    out.values["f1_mean"] = f1_sum / static_cast<double>(n);  // default averaging
    const double micro_p = micro_pred == 0 ? 0.0
                                           : static_cast<double>(micro_inter) /
                                                 static_cast<double>(micro_pred);
    const double micro_r = micro_gold == 0 ? 0.0
                                           : static_cast<double>(micro_inter) /
                                                 static_cast<double>(micro_gold);
    out.values["f1_micro"] = (micro_p + micro_r) > 0
                                 ? 2.0 * micro_p * micro_r / (micro_p + micro_r)
                                 : 0.0;
    return out;
}

ScoreSet score_task(Task task, const std::vector<ValidatorVerdict>& ledger,
                    const std::vector<DocumentSet>& dataset,
                    const ScoreOptions& options) {
    switch (task) {
        case Task::detect: return score_detection(ledger, dataset, options).scores;
        case Task::type_predict: return score_type(ledger, dataset, options);
        case Task::segment_guided:
        case Task::segment_blind:
            return score_segmentation(ledger, dataset, options);
    }
    throw ScoringError("unknown task");
}

SliceAxis slice_axis_from_string(std::string_view s) {
    if (s == "kind") return SliceAxis::kind;
    if (s == "importance") return SliceAxis::importance;
    if (s == "placement") return SliceAxis::placement;
    if (s == "evidence_length_bucket" || s == "length")
        return SliceAxis::evidence_length_bucket;
    throw ConfigError("unknown slice axis: " + std::string(s));
}

std::string to_string(SliceAxis axis) {
    switch (axis) {
        case SliceAxis::kind: return "kind";
        case SliceAxis::importance: return "importance";
        case SliceAxis::placement: return "placement";
        case SliceAxis::evidence_length_bucket: return "evidence_length_bucket";
    }
    return "kind";
}

std::string evidence_length_bucket(int words) {
    if (words <= 50) return "1-50";
    if (words <= 100) return "51-100";
    if (words <= 150) return "101-150";
    if (words <= 200) return "151-200";
    return "201+";
}

std::map<std::string, ScoreSet> slice(const std::vector<ValidatorVerdict>& ledger,
                                      const std::vector<DocumentSet>& dataset,
                                      Task task, SliceAxis axis,
                                      const ScoreOptions& options) {
    const auto by_id = index_dataset(dataset);
    std::map<std::string, std::vector<ValidatorVerdict>> partitions;
    std::size_t carriers = 0;
    for (const auto& v : ledger) {
        const DocumentSet& sample = sample_for(by_id, v);
        const auto& meta = sample.label.meta;
        std::optional<std::string> key;
        switch (axis) {
            case SliceAxis::kind:
                // negatives carry no contradiction to slice by
                if (sample.label.kind != ContradictionKind::none)
                    key = to_string(sample.label.kind);
                break;
            case SliceAxis::importance:
                if (meta.importance) key = to_string(*meta.importance);
                break;
            case SliceAxis::placement:
                if (meta.placement) key = *meta.placement;
                break;
            case SliceAxis::evidence_length_bucket:
                if (meta.evidence_length_words)
                    key = evidence_length_bucket(*meta.evidence_length_words);
                break;
        }
        if (!key) continue;
        ++carriers;
        partitions[*key].push_back(v);
    }
    if (carriers == 0)
        throw ScoringError("no sample in the ledger carries the '" +
                           to_string(axis) + "' metadata");

    std::map<std::string, ScoreSet> out;
    for (auto& [key, part] : partitions)
        out[key] = score_task(task, part, dataset, options);
    return out;
}

std::string AggregateStat::formatted() const {
    return fmt3(mean) + " ± " + fmt3(stddev);
}

std::map<std::string, AggregateStat> aggregate_runs(
    const std::vector<ScoreSet>& runs) {
    if (runs.size() < 2)
        throw ScoringError("aggregation needs at least 2 repeated runs");
    for (const auto& run : runs) {
        if (run.values.size() != runs.front().values.size())
            throw ScoringError("aggregation: runs carry different metric sets");
        for (const auto& [k, _] : runs.front().values)
            if (!run.values.count(k))
                throw ScoringError("aggregation: metric '" + k +
                                   "' missing from a run");
    }

    std::map<std::string, AggregateStat> out;
    for (const auto& [metric, _] : runs.front().values) {
        double sum = 0.0;
        for (const auto& run : runs) sum += run.values.at(metric);
        const double mean = sum / static_cast<double>(runs.size());
        double var = 0.0;
        for (const auto& run : runs) {
            const double d = run.values.at(metric) - mean;
            var += d * d;
        }
        var /= static_cast<double>(runs.size());  // population std over repeats
        out[metric] = {mean, std::sqrt(var)};
    }
    return out;
}

NaiveScanCounts naive_scan_counts(std::uint64_t n) {
    NaiveScanCounts out;
    out.singles = n;
    out.pairs = n < 2 ? 0 : n * (n - 1) / 2;
    out.triples = n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
    return out;
}

namespace {

json score_set_to_json(const ScoreSet& s) {
    json j = {{"scores", s.values},
              {"scored", s.scored},
              {"excluded_transport", s.excluded_transport}};
    if (!s.flags.empty()) j["flags"] = s.flags;
    return j;
}

// metric columns per task, mirroring the benchmark table layout
const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>&
table_layout() {
    static const std::vector<
        std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
        layout = {
            {"detect",
             {{"accuracy", "Detection Accuracy"},
              {"precision", "Detection Precision"},
              {"recall", "Detection Recall"},
              {"f1", "Detection F1"}}},
            {"type_predict",
             {{"accuracy", "Type Accuracy"}, {"macro_f1", "Type Macro F1"}}},
            {"segment_guided",
             {{"jaccard_mean", "Guided Jaccard"}, {"f1_mean", "Guided F1"}}},
            {"segment_blind",
             {{"jaccard_mean", "Blind Jaccard"}, {"f1_mean", "Blind F1"}}},
        };
    return layout;
}

std::string cell_value(const std::map<std::string, TaskReport>& tasks,
                       const std::string& task, const std::string& metric) {
    const auto it = tasks.find(task);
    if (it == tasks.end()) return "-";
    if (!it->second.aggregate.empty()) {
        const auto agg = it->second.aggregate.find(metric);
        if (agg != it->second.aggregate.end()) return agg->second.formatted();
    }
    const auto v = it->second.scores.values.find(metric);
    if (v == it->second.scores.values.end()) return "-";
    return fmt3(v->second);
}

}  // namespace

json report_to_json(const MetricsReport& report) {
    json rows = json::array();
    for (const auto& [key, tasks] : report) {
        json row = {{"model", key.model}, {"strategy", key.strategy}};
        json jt = json::object();
        for (const auto& [task, tr] : tasks) {
            json t = score_set_to_json(tr.scores);
            if (tr.confusion) {
                t["confusion"] = {{"tp", tr.confusion->tp},
                                  {"fp", tr.confusion->fp},
                                  {"fn", tr.confusion->fn},
                                  {"tn", tr.confusion->tn}};
            }
            if (tr.runs.size() > 1) {
                json runs = json::array();
                for (const auto& r : tr.runs) runs.push_back(score_set_to_json(r));
                t["runs"] = std::move(runs);
            }
            if (!tr.aggregate.empty()) {
                json agg = json::object();
                for (const auto& [metric, stat] : tr.aggregate)
                    agg[metric] = {{"mean", stat.mean},
                                   {"std", stat.stddev},
                                   {"formatted", stat.formatted()}};
                t["aggregate"] = std::move(agg);
            }
            if (!tr.slices.empty()) {
                json slices = json::object();
                for (const auto& [axis, keys] : tr.slices) {
                    json per_key = json::object();
                    for (const auto& [k, s] : keys)
                        per_key[k] = score_set_to_json(s);
                    slices[axis] = std::move(per_key);
                }
                t["slices"] = std::move(slices);
            }
            jt[task] = std::move(t);
        }
        row["tasks"] = std::move(jt);
        rows.push_back(std::move(row));
    }
    return json{{"rows", std::move(rows)},
                {"segmentation_f1_averaging", "per_sample"}};
}

std::string report_to_markdown(const MetricsReport& report) {
    std::string out = "| Model + Strategy |";
    std::string rule = "|---|";
    for (const auto& [task, metrics] : table_layout()) {
        (void)task;
        for (const auto& [metric, header] : metrics) {
            (void)metric;
            out += " " + header + " |";
            rule += "---|";
        }
    }
    out += "\n" + rule + "\n";
    for (const auto& [key, tasks] : report) {
        out += "| " + key.model + " + " + key.strategy + " |";
        for (const auto& [task, metrics] : table_layout())
            for (const auto& [metric, header] : metrics) {
                (void)header;
                out += " " + cell_value(tasks, task, metric) + " |";
            }
        out += "\n";
    }
    return out;
}

std::string report_to_csv(const MetricsReport& report) {
    std::string out = "model,strategy";
    for (const auto& [task, metrics] : table_layout())
        for (const auto& [metric, header] : metrics) {
            (void)header;
            out += "," + task + "." + metric;
        }
    out += "\n";
    for (const auto& [key, tasks] : report) {
        out += key.model + "," + key.strategy;
        for (const auto& [task, metrics] : table_layout())
            for (const auto& [metric, header] : metrics) {
                (void)header;
                const std::string v = cell_value(tasks, task, metric);
                out += "," + (v == "-" ? "" : v);
            }
        out += "\n";
    }
    return out;
}

std::string slices_to_csv(const MetricsReport& report, SliceAxis axis) {
    std::string out = "model,strategy,task,slice,metric,value\n";
    const std::string axis_name = to_string(axis);
    for (const auto& [key, tasks] : report) {
        for (const auto& [task, tr] : tasks) {
            const auto it = tr.slices.find(axis_name);
            if (it == tr.slices.end()) continue;
            for (const auto& [slice_key, scores] : it->second)
                for (const auto& [metric, value] : scores.values)
                    out += key.model + "," + key.strategy + "," + task + "," +
                           slice_key + "," + metric + "," + fmt3(value) + "\n";
        }
    }
    return out;
}

}  // namespace conflictforge::scoring
