#include "graphsim/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace graphsim {

using nlohmann::json;

MemoryStore::MemoryStore(const TemporalGraph& graph, int cut) {
    for (const Interaction& e : graph.edges()) {
        if (e.t >= cut) break;
        entries_[e.src].push_back({e.dst, graph.profile_of(e.dst), e.message, e.category, e.t});
    }
    for (const NodeProfile& p : graph.nodes()) entries_[p.id];  // every node owns a memory
}

NodeMemory MemoryStore::memory(const NodeId& u, int cut) const {
    NodeMemory m;
    m.owner = u;
    m.cut = cut;
    auto it = entries_.find(u);
    if (it != entries_.end())
        for (const MemoryEntry& e : it->second)
            if (e.t < cut) m.entries.push_back(e);
    return m;
}

NodeMemory MemoryStore::pair_memory(const NodeId& u, const NodeId& v, int cut) const {
    NodeMemory m = memory(u, cut);
    std::erase_if(m.entries, [&](const MemoryEntry& e) { return e.dst != v; });
    return m;
}

void MemoryStore::append(const Interaction& edge, const std::string& dst_profile) {
    entries_[edge.src].push_back({edge.dst, dst_profile, edge.message, edge.category, edge.t});
}

void MemoryStore::inject_broadcast(const std::string& message, int category, int t) {
    if (message.empty()) throw GraphError("broadcast message must be non-empty");
    if (!injected_.insert({message, category}).second) return;  // idempotent
    for (auto& [node, entries] : entries_)
        entries.push_back({"__broadcast__", "platform broadcast", message, category, t - 1});
}

size_t MemoryStore::size(const NodeId& u) const {
    auto it = entries_.find(u);
    return it == entries_.end() ? 0 : it->second.size();
}

namespace {

std::string neighbor_context(const MemoryStore& store, const TemporalGraph& graph,
                             const NodeMemory& memory, int cut) {
    // last few distinct partners, each with their own recent history
    std::vector<NodeId> partners;
    for (auto it = memory.entries.rbegin(); it != memory.entries.rend() && partners.size() < 3;
         ++it)
        if (std::find(partners.begin(), partners.end(), it->dst) == partners.end() &&
            graph.has_node(it->dst))
            partners.push_back(it->dst);
    std::string out;
    for (const NodeId& p : partners) {
        out += "[" + p + "]\n";
        out += format_memory(store.memory(p, cut), 3);
    }
    return out.empty() ? "(none)\n" : out;
}

// Per-day source list with target degree, ascending node id.
using DaySources = std::map<int, std::vector<std::pair<NodeId, double>>>;

DaySources tdgg_sources(const TemporalGraph& graph, const DayInterval& prediction) {
    DaySources out;
    std::map<std::pair<NodeId, int>, std::set<NodeId>> dsts;
    for (const Interaction& e : graph.window(prediction)) dsts[{e.src, e.t}].insert(e.dst);
    for (const auto& [key, set] : dsts)
        out[key.second].emplace_back(key.first, static_cast<double>(set.size()));
    for (auto& [day, sources] : out) std::sort(sources.begin(), sources.end());
    return out;
}

struct SourceResult {
    SelectionRecord record;
    std::vector<Interaction> edges;
    bool failed = false;
};

SourceResult simulate_source(const TemporalGraph& history, const TemporalGraph& full,
                             const MemoryStore& store, PolicyBackend& backend,
                             const EmbeddingProvider& provider, const RunConfig& config,
                             const NodeId& u, int day, double degree) {
    SourceResult res;
    NodeMemory mem = store.memory(u, day);
    QueryPlan plan =
        backend.propose_query(full.node(u), mem, neighbor_context(store, full, mem, day));
    res.failed = !plan.format_ok;

    CandidateList candidates = retrieve_candidates(history, plan, u, day, config.k1, provider);
    if (auto replayed = backend.replay_destinations(u, day)) {
        // ground-truth destinations first, retrieved candidates fill the rest
        CandidateList merged;
        std::unordered_set<NodeId> taken;
        for (const NodeId& v : *replayed)
            if (taken.insert(v).second) {
                merged.ids.push_back(v);
                merged.provenance.push_back(CandidateStage::neighbor);
            }
        for (size_t i = 0; i < candidates.ids.size(); ++i)
            if (static_cast<int>(merged.ids.size()) < config.k1 &&
                taken.insert(candidates.ids[i]).second) {
                merged.ids.push_back(candidates.ids[i]);
                merged.provenance.push_back(candidates.provenance[i]);
            }
        candidates = std::move(merged);
    }

    res.record = {u, day, candidates.ids, plan.format_ok};
    for (const NodeId& v : truncate_to_k2(candidates, degree)) {
        EdgeDraft draft = backend.propose_edge(full.node(u), full.node(v),
                                               store.pair_memory(u, v, day));
        int category = std::clamp(draft.category, 1, full.num_categories());
        res.edges.push_back({u, v, day, draft.message, category});
    }
    return res;
}

GeneratedGraph run_pipeline(const TemporalGraph& graph, const SplitWindows& split,
                            const RunConfig& config, PolicyBackend& backend,
                            const EmbeddingProvider& provider, const DaySources& sources) {
    GeneratedGraph gen;
    gen.backend = backend.name();
    gen.seed = config.seed;
    gen.prediction = split.prediction;

    MemoryStore store(graph, split.prediction.begin);
    if (!config.broadcast_message.empty())
        store.inject_broadcast(config.broadcast_message, config.broadcast_category,
                               split.prediction.begin);

    std::vector<Interaction> history_edges = graph.window({0, split.prediction.begin});

    for (int day = split.prediction.begin; day < split.prediction.end; ++day) {
        // simulation-visible history: real past plus previously generated days
        TemporalGraph history = TemporalGraph::from_parts(
            graph.nodes(), history_edges, graph.horizon(), graph.num_categories());

        auto it = sources.find(day);
        if (it != sources.end()) {
            const auto& day_sources = it->second;
            std::vector<SourceResult> results(day_sources.size());
            int workers = std::max(1, config.workers);
            if (workers == 1 || day_sources.size() < 2) {
                for (size_t i = 0; i < day_sources.size(); ++i)
                    results[i] = simulate_source(history, graph, store, backend, provider,
                                                 config, day_sources[i].first,
                                                 day, day_sources[i].second);
            } else {
                std::vector<std::thread> pool;
                std::atomic<size_t> next{0};
                for (int w = 0; w < workers; ++w)
                    pool.emplace_back([&] {
                        for (size_t i = next.fetch_add(1); i < day_sources.size();
                             i = next.fetch_add(1))
                            results[i] = simulate_source(history, graph, store, backend,
                                                         provider, config,
                                                         day_sources[i].first, day,
                                                         day_sources[i].second);
                    });
                for (std::thread& t : pool) t.join();
            }
            // merge in ascending source order regardless of worker schedule
            for (SourceResult& r : results) {
                gen.selections.push_back(std::move(r.record));
                if (r.failed) ++gen.failures;
                for (Interaction& e : r.edges) {
                    store.append(e, graph.profile_of(e.dst));
                    history_edges.push_back(e);
                    gen.edges.push_back(std::move(e));
                }
            }
        }
    }

    std::stable_sort(gen.edges.begin(), gen.edges.end(),
                     [](const Interaction& a, const Interaction& b) {
                         if (a.t != b.t) return a.t < b.t;
                         if (a.src != b.src) return a.src < b.src;
                         return a.dst < b.dst;
                     });
    return gen;
}

}  // namespace

GeneratedGraph run_tdgg(const TemporalGraph& graph, const SplitWindows& split,
                        const RunConfig& config, PolicyBackend& backend,
                        const EmbeddingProvider& provider) {
    return run_pipeline(graph, split, config, backend, provider,
                        tdgg_sources(graph, split.prediction));
}

GeneratedGraph run_idgg(const TemporalGraph& graph, const SplitWindows& split,
                        const RunConfig& config, PolicyBackend& backend,
                        const EmbeddingProvider& provider, Forecaster& forecaster) {
    DegreeHistories histories;
    for (const NodeProfile& p : graph.nodes()) {
        std::vector<int> series = graph.out_degree_series(p.id, split.input);
        histories[p.id] = {series.begin(), series.end()};
    }
    forecaster.fit(histories);

    int tau = split.prediction.length();
    std::vector<DegreeForecast> forecasts;
    forecasts.reserve(graph.nodes().size());
    for (const NodeProfile& p : graph.nodes()) forecasts.push_back(forecaster.predict(p.id, tau));

    DaySources sources;
    for (const DegreeForecast& f : forecasts)
        for (int t = 0; t < tau; ++t)
            if (f.values[static_cast<size_t>(t)] > config.activity_threshold)
                sources[split.prediction.begin + t].emplace_back(
                    f.node, f.values[static_cast<size_t>(t)]);
    for (auto& [day, list] : sources) std::sort(list.begin(), list.end());

    return run_pipeline(graph, split, config, backend, provider, sources);
}

void write_generated(const std::string& out_dir, const GeneratedGraph& generated,
                     const RunConfig& config) {
    write_edges_file(out_dir + "/edges.jsonl", generated.edges);
    std::ofstream sf(out_dir + "/selections.jsonl");
    if (!sf) throw GraphError("cannot write selections file: " + out_dir);
    for (const SelectionRecord& r : generated.selections)
        sf << json{{"u", r.u}, {"t", r.t}, {"candidates", r.candidates},
                   {"format_ok", r.format_ok}}
                  .dump()
           << "\n";
    std::ofstream mf(out_dir + "/run_manifest.json");
    if (!mf) throw GraphError("cannot write run manifest: " + out_dir);
    mf << json{{"backend", generated.backend},
               {"seed", generated.seed},
               {"k1", config.k1},
               {"task", config.task == Task::tdgg ? "tdgg" : "idgg"},
               {"prediction", {generated.prediction.begin, generated.prediction.end}},
               {"broadcast", config.broadcast_message},
               {"failures", generated.failures}}
              .dump(2)
       << "\n";
}

GeneratedGraph load_generated(const std::string& out_dir) {
    GeneratedGraph gen;
    std::ifstream mf(out_dir + "/run_manifest.json");
    if (!mf) throw GraphError("cannot open run manifest in " + out_dir);
    json m;
    mf >> m;
    gen.backend = m.value("backend", "");
    gen.seed = m.value("seed", 0ull);
    if (m.contains("prediction"))
        gen.prediction = {m["prediction"][0].get<int>(), m["prediction"][1].get<int>()};
    gen.failures = m.value("failures", 0ull);

    std::ifstream ef(out_dir + "/edges.jsonl");
    if (!ef) throw GraphError("cannot open generated edges in " + out_dir);
    std::string line;
    while (std::getline(ef, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        gen.edges.push_back({j.at("src").get<std::string>(), j.at("dst").get<std::string>(),
                             j.at("t").get<int>(), j.at("message").get<std::string>(),
                             j.at("category").get<int>()});
    }
    std::ifstream sf(out_dir + "/selections.jsonl");
    if (sf) {
        while (std::getline(sf, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            gen.selections.push_back({j.at("u").get<std::string>(), j.at("t").get<int>(),
                                      j.at("candidates").get<std::vector<std::string>>(),
                                      j.value("format_ok", true)});
        }
    }
    return gen;
}

std::map<std::pair<NodeId, int>, std::set<NodeId>> truth_destinations(
    const TemporalGraph& reference, const DayInterval& window) {
    std::map<std::pair<NodeId, int>, std::set<NodeId>> out;
    for (const Interaction& e : reference.window(window)) out[{e.src, e.t}].insert(e.dst);
    return out;
}

MicroReport eval_tdgg(const GeneratedGraph& generated, const TemporalGraph& reference,
                      const DayInterval& prediction, const EmbeddingProvider& provider,
                      const std::string& model_name) {
    MicroReport report;
    report.model = model_name;

    auto truths = truth_destinations(reference, prediction);
    std::vector<SelectionSample> samples;
    for (const SelectionRecord& rec : generated.selections) {
        auto it = truths.find({rec.u, rec.t});
        if (it == truths.end() || it->second.empty()) continue;
        samples.push_back({rec.u, rec.t, it->second, rec.candidates});
    }
    if (!samples.empty()) {
        std::vector<bool> easy = split_easy_hard(samples);
        double r_easy = 0, r_hard = 0, r_all = 0, h_easy = 0, h_hard = 0, h_all = 0;
        size_t n_easy = 0, n_hard = 0;
        for (size_t i = 0; i < samples.size(); ++i) {
            double r = recall_at_k(samples[i]);
            double h = hit_at_k(samples[i]);
            r_all += r;
            h_all += h;
            if (easy[i]) {
                r_easy += r;
                h_easy += h;
                ++n_easy;
            } else {
                r_hard += r;
                h_hard += h;
                ++n_hard;
            }
        }
        report.r100_all = r_all / static_cast<double>(samples.size());
        report.h100_all = h_all / static_cast<double>(samples.size());
        if (n_easy) {
            report.r100_easy = r_easy / static_cast<double>(n_easy);
            report.h100_easy = h_easy / static_cast<double>(n_easy);
        }
        if (n_hard) {
            report.r100_hard = r_hard / static_cast<double>(n_hard);
            report.h100_hard = h_hard / static_cast<double>(n_hard);
        }
    }

    // pair generated with reference edges on (src, dst, t), multi-edges in order
    std::vector<Interaction> ref_window = reference.window(prediction);
    std::map<std::tuple<NodeId, NodeId, int>, std::vector<const Interaction*>> ref_by_key;
    for (const Interaction& e : ref_window) ref_by_key[{e.src, e.dst, e.t}].push_back(&e);
    std::map<std::tuple<NodeId, NodeId, int>, size_t> used;
    std::vector<std::pair<int, int>> cat_pairs;
    std::vector<std::pair<std::string, std::string>> msg_pairs;
    for (const Interaction& e : generated.edges) {
        auto key = std::make_tuple(e.src, e.dst, e.t);
        auto it = ref_by_key.find(key);
        if (it == ref_by_key.end()) continue;
        size_t& idx = used[key];
        if (idx >= it->second.size()) continue;
        const Interaction* ref = it->second[idx++];
        cat_pairs.emplace_back(e.category, ref->category);
        msg_pairs.emplace_back(e.message, ref->message);
    }
    if (!cat_pairs.empty()) {
        report.acc = category_accuracy(cat_pairs);
        report.rouge = rouge_l(msg_pairs);
        report.f1 = token_f1(msg_pairs, provider);
    }
    return report;
}

}  // namespace graphsim
