#include "conflictforge/conflictgen.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "conflictforge/errors.hpp"

namespace conflictforge::conflictgen {

namespace {

constexpr Strategy kGenStrategy = Strategy::basic;  // generation prompts have no CoT variant

std::size_t ceil_half(std::size_t n) { return (n + 1) / 2; }

DocumentSet renumber(DocumentSet set) {
    for (std::size_t i = 0; i < set.documents.size(); ++i)
        set.documents[i].doc_id = static_cast<int>(i);
    return set;
}

// Places new_docs at the given final indices (sorted), existing docs keep
// their relative order around them.
DocumentSet weave(const DocumentSet& pool, std::vector<Document> new_docs,
                  const std::vector<std::size_t>& positions,
                  std::size_t anchor, std::size_t* anchor_out) {
    const std::size_t total = pool.documents.size() + new_docs.size();
    DocumentSet out = pool;
    out.documents.clear();
    out.documents.reserve(total);
    std::size_t pool_next = 0;
    std::size_t new_next = 0;
    for (std::size_t slot = 0; slot < total; ++slot) {
        if (new_next < positions.size() && positions[new_next] == slot) {
            out.documents.push_back(std::move(new_docs[new_next]));
            ++new_next;
        } else {
            if (anchor_out && pool_next == anchor) *anchor_out = slot;
            out.documents.push_back(pool.documents[pool_next]);
            ++pool_next;
        }
    }
    return renumber(std::move(out));
}

std::string completion_of(gateway::Gateway& gw, const GenerationConfig& cfg,
                          const std::string& prompt) {
    try {
        gateway::CompletionRequest req;
        req.model = cfg.model;
        req.prompt = prompt;
        req.max_tokens = cfg.max_tokens;
        return gw.complete(req).text;
    } catch (const GatewayError& e) {
        throw GenerationError(std::string("backend failure: ") + e.what());
    }
}

std::string extract_tag(const std::string& text, const std::string& tag) {
    try {
        const auto parsed = promptkit::parse_tagged(text, tag);
        if (parsed.value.empty())
            throw GenerationError("empty <" + tag + "> content");
        return parsed.value;
    } catch (const ParseError& e) {
        throw GenerationError(std::string("tag parse failure: ") + e.what());
    }
}

// The ChooseStatement -> ContradictStatement -> ContextGenerate chain shared
// by the self and pair generators.
struct ContradictionChain {
    std::string chosen;
    std::string contradicted;
    std::string context;
};

ContradictionChain run_chain(const Document& target, const GenerationConfig& cfg,
                             gateway::Gateway& gw,
                             const promptkit::PromptLibrary& lib) {
    ContradictionChain chain;
    chain.chosen = extract_tag(
        completion_of(gw, cfg,
                      lib.render(promptkit::TemplateId::choose_statement,
                                 kGenStrategy,
                                 {{"importance", to_string(cfg.importance)},
                                  {"document", target.text}})),
        "sentence");
    chain.contradicted = extract_tag(
        completion_of(gw, cfg,
                      lib.render(promptkit::TemplateId::contradict_statement,
                                 kGenStrategy, {{"statement", chain.chosen}})),
        "statement");
    chain.context = extract_tag(
        completion_of(
            gw, cfg,
            lib.render(promptkit::TemplateId::context_generate, kGenStrategy,
                       {{"length", std::to_string(cfg.context_length)},
                        {"sentence", chain.contradicted}})),
        "paragraph");
    return chain;
}

std::string sample_name(ContradictionKind kind, std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06zu", index);
    return to_string(kind) + "-" + buf;
}

}  // namespace

InsertOutcome insert_documents(const DocumentSet& pool,
                               std::vector<Document> new_docs,
                               const PlacementSpec& spec) {
    if (pool.documents.empty())
        throw ConfigError("insert_documents: empty pool");
    if (new_docs.empty())
        throw ConfigError("insert_documents: nothing to insert");

    const std::size_t pool_size = pool.documents.size();
    const std::size_t total = pool_size + new_docs.size();
    std::vector<std::size_t> positions;
    std::size_t anchor = spec.anchor.value_or(0);

    switch (spec.mode) {
        case PlacementSpec::Mode::near: {
            if (!spec.anchor || *spec.anchor >= pool_size || new_docs.size() != 1)
                throw ConfigError("near placement needs one document and a valid anchor");
            positions = {*spec.anchor + 1};
            break;
        }
        case PlacementSpec::Mode::far: {
            if (!spec.anchor || *spec.anchor >= pool_size || new_docs.size() != 1)
                throw ConfigError("far placement needs one document and a valid anchor");
            if (!spec.rng) throw ConfigError("far placement needs an rng");
            if (total < 4)
                throw ConfigError("far placement requires a set of at least 4 documents");
            const std::size_t min_gap = ceil_half(total);
            std::vector<std::size_t> feasible;
            for (std::size_t f = 0; f < total; ++f) {
                const std::size_t anchor_final = anchor + (f <= anchor ? 1 : 0);
                const std::size_t gap =
                    f > anchor_final ? f - anchor_final : anchor_final - f;
                if (gap >= min_gap) feasible.push_back(f);
            }
            if (feasible.empty())
                throw ConfigError("far placement infeasible for this set size");
            positions = {feasible[spec.rng->bounded(feasible.size())]};
            break;
        }
        case PlacementSpec::Mode::contiguous: {
            if (new_docs.size() != 3)
                throw ConfigError("contiguous placement expects three documents");
            std::size_t start;
            if (spec.anchor) {
                start = *spec.anchor;
                if (start > pool_size)
                    throw ConfigError("contiguous start beyond pool size");
            } else {
                if (!spec.rng)
                    throw ConfigError("contiguous placement needs an rng or a fixed start");
                start = spec.rng->bounded(pool_size + 1);
            }
            positions = {start, start + 1, start + 2};
            break;
        }
        case PlacementSpec::Mode::separate: {
            if (new_docs.size() != 3)
                throw ConfigError("separate placement expects three documents");
            if (!spec.rng) throw ConfigError("separate placement needs an rng");
            const bool spread_feasible = total >= 5;
            std::vector<std::size_t> picked;
            for (int tries = 0; tries < 128; ++tries) {
                picked = spec.rng->sample_without_replacement(total, 3);
                std::sort(picked.begin(), picked.end());
                if (!spread_feasible) break;
                if (picked[1] - picked[0] >= 2 && picked[2] - picked[1] >= 2) break;
                picked.clear();
            }
            if (picked.empty()) {
                picked = spec.rng->sample_without_replacement(total, 3);
                std::sort(picked.begin(), picked.end());
            }
            positions = picked;
            break;
        }
    }

    std::sort(positions.begin(), positions.end());
    InsertOutcome outcome;
    outcome.inserted_positions = positions;
    outcome.set = weave(pool, std::move(new_docs), positions, anchor,
                        &outcome.anchor_position);
    return outcome;
}

GeneratedSample gen_self_contradiction(const DocumentSet& base,
                                       std::size_t target_index,
                                       const GenerationConfig& cfg,
                                       gateway::Gateway& gw,
                                       const promptkit::PromptLibrary& lib) {
    if (target_index >= base.documents.size())
        throw ConfigError("self target index out of range");
    const Document& target = base.documents[target_index];
    if (target.statements().size() < 2)
        throw GenerationError("self target needs at least 2 statements");

    const ContradictionChain chain = run_chain(target, cfg, gw, lib);

    GeneratedSample sample;
    sample.set = base;
    Document& doc = sample.set.documents[target_index];
    doc.text += " " + chain.context;
    doc.origin = Origin::modified;

    sample.set.label.kind = ContradictionKind::self;
    sample.set.label.doc_ids = {static_cast<int>(target_index)};
    sample.set.label.meta.importance = cfg.importance;
    sample.set.label.meta.evidence_length_words = count_words(chain.context);
    sample.set.label.meta.seed = cfg.seed;

    sample.trace.chosen_statement = chain.chosen;
    sample.trace.contradicted_statement = chain.contradicted;
    sample.trace.generated_context = chain.context;
    return sample;
}

GeneratedSample gen_pair_contradiction(const DocumentSet& base,
                                       std::size_t target_index,
                                       const GenerationConfig& cfg,
                                       gateway::Gateway& gw,
                                       const promptkit::PromptLibrary& lib,
                                       Rng& rng) {
    if (base.documents.size() < 2)
        throw ConfigError("pair generation needs a pool of at least 2 documents");
    if (target_index >= base.documents.size())
        throw ConfigError("pair target index out of range");

    const ContradictionChain chain =
        run_chain(base.documents[target_index], cfg, gw, lib);

    Document generated;
    generated.text = chain.context;
    generated.origin = Origin::generated;

    PlacementSpec spec;
    spec.mode = cfg.pair_placement == PairPlacement::near
                    ? PlacementSpec::Mode::near
                    : PlacementSpec::Mode::far;
    spec.anchor = target_index;
    spec.rng = &rng;
    InsertOutcome inserted = insert_documents(base, {std::move(generated)}, spec);

    const int a = static_cast<int>(inserted.anchor_position);
    const int b = static_cast<int>(inserted.inserted_positions.front());

    GeneratedSample sample;
    sample.set = std::move(inserted.set);
    sample.set.label.kind = ContradictionKind::pair;
    sample.set.label.doc_ids = {std::min(a, b), std::max(a, b)};
    sample.set.label.meta.importance = cfg.importance;
    sample.set.label.meta.evidence_length_words = count_words(chain.context);
    sample.set.label.meta.placement = to_string(cfg.pair_placement);
    sample.set.label.meta.distance = std::abs(a - b);
    sample.set.label.meta.seed = cfg.seed;

    sample.trace.chosen_statement = chain.chosen;
    sample.trace.contradicted_statement = chain.contradicted;
    sample.trace.generated_context = chain.context;
    return sample;
}

GeneratedSample gen_conditional_contradiction(const DocumentSet& base,
                                              std::size_t topic_index,
                                              const GenerationConfig& cfg,
                                              gateway::Gateway& gw,
                                              const promptkit::PromptLibrary& lib,
                                              Rng& rng) {
    if (base.documents.size() < 3)
        throw ConfigError("conditional generation needs a pool of at least 3 documents");
    if (topic_index >= base.documents.size())
        throw ConfigError("conditional topic index out of range");

    const auto statements = base.documents[topic_index].statements();
    if (statements.empty())
        throw GenerationError("topic document has no statements");
    const std::string& topic = statements.front();

    const std::string response = completion_of(
        gw, cfg,
        lib.render(promptkit::TemplateId::generate_conditional, kGenStrategy,
                   {{"firstsentence", topic}}));
    std::array<std::string, 3> triple;
    try {
        triple = promptkit::parse_conditional_triple(response);
    } catch (const ParseError& e) {
        throw GenerationError(std::string("conditional parse failure: ") + e.what());
    }

    std::vector<Document> docs(3);
    for (std::size_t i = 0; i < 3; ++i) {
        docs[i].text = triple[i];
        docs[i].origin = Origin::generated;
    }

    PlacementSpec spec;
    spec.mode = cfg.conditional_placement == CondPlacement::contiguous
                    ? PlacementSpec::Mode::contiguous
                    : PlacementSpec::Mode::separate;
    spec.rng = &rng;
    InsertOutcome inserted = insert_documents(base, std::move(docs), spec);

    GeneratedSample sample;
    sample.set = std::move(inserted.set);
    sample.set.label.kind = ContradictionKind::conditional;
    for (std::size_t p : inserted.inserted_positions)
        sample.set.label.doc_ids.push_back(static_cast<int>(p));
    sample.set.label.meta.placement = to_string(cfg.conditional_placement);
    sample.set.label.meta.seed = cfg.seed;

    sample.trace.chosen_statement = topic;
    sample.trace.conditional_docs = triple;
    return sample;
}

namespace {

struct PlannedSample {
    std::size_t global_index = 0;
    std::size_t local_index = 0;  // index within its kind block
    ContradictionKind kind = ContradictionKind::none;
};

GenerationConfig mix_config(const AssembleOptions& options,
                            const PlannedSample& plan, std::uint64_t seed) {
    const MixConfig& mix = options.mix;
    if (mix.importance.empty() || mix.lengths.empty() ||
        mix.pair_placements.empty() || mix.cond_placements.empty())
        throw ConfigError("generation mix must not have empty dimensions");

    GenerationConfig cfg;
    cfg.set_size = options.set_size;
    cfg.seed = seed;
    cfg.model = options.generator_model;
    cfg.max_tokens = options.max_tokens;

    const std::size_t j = plan.local_index;
    const std::size_t ni = mix.importance.size();
    const std::size_t nl = mix.lengths.size();
    cfg.importance = mix.importance[j % ni];
    cfg.context_length = mix.lengths[(j / ni) % nl];
    cfg.pair_placement =
        mix.pair_placements[(j / (ni * nl)) % mix.pair_placements.size()];
    cfg.conditional_placement = mix.cond_placements[j % mix.cond_placements.size()];
    return cfg;
}

std::size_t base_draw_count(ContradictionKind kind, std::size_t set_size) {
    switch (kind) {
        case ContradictionKind::none:
        case ContradictionKind::self:
            return set_size;
        case ContradictionKind::pair:
            return set_size - 1;
        case ContradictionKind::conditional:
            return set_size - 3;
    }
    return set_size;
}

}  // namespace

AssembleResult assemble_dataset(const std::vector<corpus::SourceDocument>& pool,
                                const AssembleOptions& options,
                                gateway::Gateway& gw,
                                const promptkit::PromptLibrary& lib) {
    if (options.set_size < 3)
        throw ConfigError("set_size must be at least 3");
    if (options.max_attempts < 1)
        throw ConfigError("max_attempts must be at least 1");

    std::vector<PlannedSample> plan;
    plan.reserve(options.counts.total());
    const std::pair<ContradictionKind, std::size_t> blocks[] = {
        {ContradictionKind::none, options.counts.none},
        {ContradictionKind::self, options.counts.self},
        {ContradictionKind::pair, options.counts.pair},
        {ContradictionKind::conditional, options.counts.conditional},
    };
    std::size_t global = 0;
    for (const auto& [kind, count] : blocks)
        for (std::size_t j = 0; j < count; ++j)
            plan.push_back({global++, j, kind});

    AssembleResult result;
    result.requested = plan.size();
    std::vector<std::optional<DocumentSet>> slots(plan.size());
    std::mutex shortfall_mu;

    auto build_one = [&](const PlannedSample& p) {
        const std::uint64_t seed = derive_seed(options.master_seed, p.global_index);
        Rng rng(seed);
        const GenerationConfig cfg = mix_config(options, p, seed);
        const std::size_t draw = base_draw_count(p.kind, options.set_size);

        if (pool.size() < draw) {
            std::lock_guard lock(shortfall_mu);
            result.shortfalls.push_back(
                {p.kind, p.global_index,
                 "corpus pool smaller than required draw of " +
                     std::to_string(draw)});
            return;
        }

        std::string failure;
        for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
            DocumentSet base;
            base.sample_id = sample_name(p.kind, p.global_index);
            const auto picks = rng.sample_without_replacement(pool.size(), draw);
            for (std::size_t i = 0; i < picks.size(); ++i) {
                Document doc;
                doc.doc_id = static_cast<int>(i);
                doc.text = pool[picks[i]].text;
                doc.origin = Origin::original;
                doc.source = pool[picks[i]].corpus_id;
                base.documents.push_back(std::move(doc));
                base.provenance.source_sample_ids.push_back(pool[picks[i]].corpus_id);
            }
            base.provenance.generator_model = options.generator_model;
            base.provenance.seed = seed;
            base.provenance.prompts_hash = lib.digest();
            base.provenance.master_seed = options.master_seed;
            base.label.meta.seed = seed;

            try {
                DocumentSet finished;
                if (p.kind == ContradictionKind::none) {
                    finished = std::move(base);
                } else if (p.kind == ContradictionKind::self) {
                    std::vector<std::size_t> candidates;
                    for (std::size_t i = 0; i < base.documents.size(); ++i)
                        if (base.documents[i].statements().size() >= 2)
                            candidates.push_back(i);
                    if (candidates.empty())
                        throw GenerationError("no document with 2+ statements in draw");
                    const std::size_t target =
                        candidates[rng.bounded(candidates.size())];
                    finished =
                        gen_self_contradiction(base, target, cfg, gw, lib).set;
                } else if (p.kind == ContradictionKind::pair) {
                    const std::size_t target = rng.bounded(base.documents.size());
                    finished =
                        gen_pair_contradiction(base, target, cfg, gw, lib, rng).set;
                } else {
                    const std::size_t topic = rng.bounded(base.documents.size());
                    finished =
                        gen_conditional_contradiction(base, topic, cfg, gw, lib, rng)
                            .set;
                }
                finished.validate();
                slots[p.global_index] = std::move(finished);
                return;
            } catch (const GenerationError& e) {
                failure = e.what();
            }
        }
        std::lock_guard lock(shortfall_mu);
        result.shortfalls.push_back(
            {p.kind, p.global_index,
             "gave up after " + std::to_string(options.max_attempts) +
                 " attempts: " + failure});
    };

    const int workers =
        std::max(1, std::min<int>(options.concurrency,
                                  static_cast<int>(plan.size())));
    if (workers <= 1) {
        for (const auto& p : plan) build_one(p);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= plan.size()) return;
                    build_one(plan[i]);
                }
            });
        }
        for (auto& t : threads) t.join();
    }

    for (auto& slot : slots)
        if (slot) result.samples.push_back(std::move(*slot));
    std::sort(result.shortfalls.begin(), result.shortfalls.end(),
              [](const Shortfall& a, const Shortfall& b) {
                  return a.sample_index < b.sample_index;
              });
    return result;
}

}  // namespace conflictforge::conflictgen
