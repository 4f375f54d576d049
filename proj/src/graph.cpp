#include "graphsim/graph.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>

namespace graphsim {

using nlohmann::json;

namespace {

std::string id_field(const json& j, const char* key, const std::string& path, size_t line) {
    if (!j.contains(key))
        throw GraphError(path + ":" + std::to_string(line) + ": missing field '" + key + "'");
    const json& v = j.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw GraphError(path + ":" + std::to_string(line) + ": field '" + key +
                     "' must be a string or integer");
}

json parse_line(const std::string& line, const std::string& path, size_t lineno) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw GraphError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
}

}  // namespace

TemporalGraph TemporalGraph::load(const std::string& nodes_path,
                                  const std::string& edges_path,
                                  const std::string& manifest_path) {
    std::ifstream nf(nodes_path);
    if (!nf) throw GraphError("cannot open nodes file: " + nodes_path);
    std::vector<NodeProfile> nodes;
    std::string line;
    size_t lineno = 0;
    while (std::getline(nf, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, nodes_path, lineno);
        NodeProfile p;
        p.id = id_field(j, "id", nodes_path, lineno);
        if (!j.contains("profile"))
            throw GraphError(nodes_path + ":" + std::to_string(lineno) + ": missing field 'profile'");
        p.profile = j.at("profile").get<std::string>();
        nodes.push_back(std::move(p));
    }

    std::ifstream ef(edges_path);
    if (!ef) throw GraphError("cannot open edges file: " + edges_path);
    std::vector<Interaction> edges;
    lineno = 0;
    while (std::getline(ef, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, edges_path, lineno);
        Interaction e;
        e.src = id_field(j, "src", edges_path, lineno);
        e.dst = id_field(j, "dst", edges_path, lineno);
        for (const char* key : {"t", "message", "category"})
            if (!j.contains(key))
                throw GraphError(edges_path + ":" + std::to_string(lineno) +
                                 ": missing field '" + std::string(key) + "'");
        e.t = j.at("t").get<int>();
        e.message = j.at("message").get<std::string>();
        e.category = j.at("category").get<int>();
        if (e.t < 0)
            throw GraphError(edges_path + ":" + std::to_string(lineno) + ": negative timestamp");
        edges.push_back(std::move(e));
    }

    int horizon = -1;
    int num_categories = -1;
    std::vector<std::string> category_names;
    if (!manifest_path.empty()) {
        std::ifstream mf(manifest_path);
        if (!mf) throw GraphError("cannot open manifest file: " + manifest_path);
        json m;
        try {
            mf >> m;
        } catch (const json::parse_error& e) {
            throw GraphError(manifest_path + ": " + e.what());
        }
        if (m.contains("horizon")) horizon = m.at("horizon").get<int>();
        if (m.contains("categories")) {
            const json& c = m.at("categories");
            if (c.is_number_integer()) {
                num_categories = c.get<int>();
            } else if (c.is_array()) {
                category_names = c.get<std::vector<std::string>>();
                num_categories = static_cast<int>(category_names.size());
            }
        }
    }

    TemporalGraph g = from_parts(std::move(nodes), std::move(edges), horizon, num_categories);
    g.category_names_ = std::move(category_names);
    return g;
}

TemporalGraph TemporalGraph::from_parts(std::vector<NodeProfile> nodes,
                                        std::vector<Interaction> edges,
                                        int horizon, int num_categories) {
    TemporalGraph g;
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);

    for (size_t i = 0; i < g.nodes_.size(); ++i) {
        auto [it, inserted] = g.node_index_.emplace(g.nodes_[i].id, i);
        if (!inserted) throw GraphError("duplicate node id: " + g.nodes_[i].id);
    }

    int max_t = -1;
    int max_cat = 1;
    for (const Interaction& e : g.edges_) {
        if (!g.node_index_.count(e.src))
            throw GraphError("edge references unknown src node: " + e.src);
        if (!g.node_index_.count(e.dst))
            throw GraphError("edge references unknown dst node: " + e.dst);
        if (e.category < 1)
            throw GraphError("category out of range: " + std::to_string(e.category));
        if (e.t < 0) throw GraphError("negative day: " + std::to_string(e.t));
        max_t = std::max(max_t, e.t);
        max_cat = std::max(max_cat, e.category);
    }

    g.num_categories_ = num_categories > 0 ? num_categories : max_cat;
    if (num_categories > 0) {
        for (const Interaction& e : g.edges_)
            if (e.category > num_categories)
                throw GraphError("unknown category " + std::to_string(e.category) +
                                 " (vocabulary size " + std::to_string(num_categories) + ")");
    }

    g.horizon_ = horizon >= 0 ? horizon : max_t + 1;
    if (g.horizon_ < max_t + 1)
        throw GraphError("horizon " + std::to_string(g.horizon_) +
                         " smaller than max edge day + 1 (" + std::to_string(max_t + 1) + ")");

    g.build_indexes();
    return g;
}

void TemporalGraph::build_indexes() {
    // Stable sort keeps insertion order as the final tie-break.
    std::stable_sort(edges_.begin(), edges_.end(), [](const Interaction& a, const Interaction& b) {
        if (a.t != b.t) return a.t < b.t;
        if (a.src != b.src) return a.src < b.src;
        return a.dst < b.dst;
    });

    day_offsets_.assign(static_cast<size_t>(horizon_) + 1, 0);
    for (const Interaction& e : edges_) ++day_offsets_[static_cast<size_t>(e.t) + 1];
    for (size_t d = 1; d < day_offsets_.size(); ++d) day_offsets_[d] += day_offsets_[d - 1];

    for (size_t i = 0; i < edges_.size(); ++i) out_edges_[edges_[i].src].push_back(i);
}

const NodeProfile& TemporalGraph::node(const NodeId& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) throw GraphError("unknown node: " + id);
    return nodes_[it->second];
}

std::vector<Interaction> TemporalGraph::window(const DayInterval& interval) const {
    std::vector<Interaction> out;
    if (interval.begin >= interval.end) return out;
    int a = std::max(interval.begin, 0);
    int b = std::min(interval.end, horizon_);
    if (a >= b) return out;
    out.assign(edges_.begin() + static_cast<long>(day_offsets_[a]),
               edges_.begin() + static_cast<long>(day_offsets_[b]));
    return out;
}

const std::vector<size_t>& TemporalGraph::out_index(const NodeId& u) const {
    static const std::vector<size_t> empty;
    node(u);  // validates existence
    auto it = out_edges_.find(u);
    return it == out_edges_.end() ? empty : it->second;
}

NodeMemory TemporalGraph::node_memory(const NodeId& u, int cut) const {
    NodeMemory m;
    m.owner = u;
    m.cut = cut;
    for (size_t idx : out_index(u)) {
        const Interaction& e = edges_[idx];
        if (e.t >= cut) break;
        m.entries.push_back({e.dst, profile_of(e.dst), e.message, e.category, e.t});
    }
    return m;
}

NodeMemory TemporalGraph::pair_memory(const NodeId& u, const NodeId& v, int cut) const {
    NodeMemory m = node_memory(u, cut);
    std::erase_if(m.entries, [&](const MemoryEntry& e) { return e.dst != v; });
    return m;
}

std::vector<int> TemporalGraph::out_degree_series(const NodeId& u, const DayInterval& interval) const {
    std::vector<int> series(static_cast<size_t>(std::max(0, interval.length())), 0);
    for (size_t idx : out_index(u)) {
        const Interaction& e = edges_[idx];
        if (interval.contains(e.t)) ++series[static_cast<size_t>(e.t - interval.begin)];
    }
    return series;
}

std::vector<NodeId> TemporalGraph::out_neighbors_before(const NodeId& u, int cut) const {
    std::vector<NodeId> out;
    std::unordered_map<NodeId, bool> seen;
    for (size_t idx : out_index(u)) {
        const Interaction& e = edges_[idx];
        if (e.t >= cut) break;
        if (!seen[e.dst]) {
            seen[e.dst] = true;
            out.push_back(e.dst);
        }
    }
    return out;
}

int TemporalGraph::out_edge_count_before(const NodeId& u, int cut) const {
    int n = 0;
    for (size_t idx : out_index(u)) {
        if (edges_[idx].t >= cut) break;
        ++n;
    }
    return n;
}

int TemporalGraph::pair_edge_count_before(const NodeId& u, const NodeId& v, int cut) const {
    int n = 0;
    for (size_t idx : out_index(u)) {
        const Interaction& e = edges_[idx];
        if (e.t >= cut) break;
        if (e.dst == v) ++n;
    }
    return n;
}

SplitSpec make_splits(int horizon) {
    if (horizon < 7) throw GraphError("horizon too short for splitting (need >= 7 days)");
    SplitSpec s;
    s.tau = static_cast<int>(0.15 * horizon);
    s.input_len = horizon - 3 * s.tau;
    const int T = s.input_len;
    auto shifted = [&](int k) {
        SplitWindows w;
        w.input = {k * s.tau, T + k * s.tau};
        w.prediction = {T + k * s.tau, T + (k + 1) * s.tau};
        return w;
    };
    s.train = shifted(0);
    s.val = shifted(1);
    s.test = shifted(2);
    return s;
}

void write_nodes_file(const std::string& path, const std::vector<NodeProfile>& nodes) {
    std::ofstream f(path);
    if (!f) throw GraphError("cannot write nodes file: " + path);
    for (const NodeProfile& n : nodes)
        f << json{{"id", n.id}, {"profile", n.profile}}.dump() << "\n";
}

void write_edges_file(const std::string& path, const std::vector<Interaction>& edges) {
    std::ofstream f(path);
    if (!f) throw GraphError("cannot write edges file: " + path);
    for (const Interaction& e : edges)
        f << json{{"src", e.src}, {"dst", e.dst}, {"t", e.t},
                  {"message", e.message}, {"category", e.category}}.dump()
          << "\n";
}

void write_manifest(const std::string& path, int horizon, int num_categories,
                    const std::vector<std::string>& category_names) {
    std::ofstream f(path);
    if (!f) throw GraphError("cannot write manifest file: " + path);
    json m;
    m["horizon"] = horizon;
    if (!category_names.empty())
        m["categories"] = category_names;
    else
        m["categories"] = num_categories;
    SplitSpec s = make_splits(horizon);
    m["split"] = {{"tau", s.tau}, {"input_len", s.input_len}};
    f << m.dump(2) << "\n";
}

}  // namespace graphsim
