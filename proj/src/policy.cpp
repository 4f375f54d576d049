#include "graphsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "graphsim/http_client.hpp"

namespace graphsim {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

std::optional<BehaviorMetric> parse_metric(const std::string& s) {
    if (s == "SF") return BehaviorMetric::SF;
    if (s == "AFN") return BehaviorMetric::AFN;
    if (s == "HI") return BehaviorMetric::HI;
    if (s == "CN") return BehaviorMetric::CN;
    return std::nullopt;
}

std::optional<Comparator> parse_cmp(const std::string& s) {
    if (s == ">") return Comparator::GT;
    if (s == ">=") return Comparator::GE;
    if (s == "=") return Comparator::EQ;
    if (s == "<=") return Comparator::LE;
    if (s == "<") return Comparator::LT;
    return std::nullopt;
}

const char* metric_name(BehaviorMetric m) {
    switch (m) {
        case BehaviorMetric::SF: return "SF";
        case BehaviorMetric::AFN: return "AFN";
        case BehaviorMetric::HI: return "HI";
        case BehaviorMetric::CN: return "CN";
    }
    return "?";
}

const char* cmp_name(Comparator c) {
    switch (c) {
        case Comparator::GT: return ">";
        case Comparator::GE: return ">=";
        case Comparator::EQ: return "=";
        case Comparator::LE: return "<=";
        case Comparator::LT: return "<";
    }
    return "?";
}

// Returns the value after "KEY:" on the first line starting with it, or nullopt.
std::optional<std::string> find_line_value(const std::string& raw, const std::string& key,
                                           size_t* line_start = nullptr) {
    std::istringstream iss(raw);
    std::string line;
    size_t pos = 0;
    while (std::getline(iss, line)) {
        std::string t = trim(line);
        if (t.rfind(key, 0) == 0) {
            if (line_start) *line_start = pos;
            return trim(t.substr(key.size()));
        }
        pos += line.size() + 1;
    }
    return std::nullopt;
}

}  // namespace

std::optional<FilterRule> parse_filter(const std::string& text) {
    FilterRule rule;
    std::string t = trim(text);
    if (t.empty() || t == "none") return rule;

    std::vector<std::string> toks = split_ws(t);
    size_t i = 0;
    while (i < toks.size()) {
        if (i + 3 > toks.size()) return std::nullopt;
        auto metric = parse_metric(toks[i]);
        auto cmp = parse_cmp(toks[i + 1]);
        if (!metric || !cmp) return std::nullopt;
        double threshold;
        try {
            size_t used = 0;
            threshold = std::stod(toks[i + 2], &used);
            if (used != toks[i + 2].size()) return std::nullopt;
        } catch (...) {
            return std::nullopt;
        }
        if (!std::isfinite(threshold)) return std::nullopt;
        rule.clauses.push_back({*metric, *cmp, threshold});
        i += 3;
        if (i < toks.size()) {
            if (toks[i] != "or") return std::nullopt;
            ++i;
            if (i == toks.size()) return std::nullopt;  // dangling "or"
        }
    }
    return rule;
}

std::string filter_to_string(const FilterRule& rule) {
    if (rule.clauses.empty()) return "none";
    std::ostringstream oss;
    for (size_t i = 0; i < rule.clauses.size(); ++i) {
        if (i) oss << " or ";
        const FilterClause& c = rule.clauses[i];
        oss << metric_name(c.metric) << " " << cmp_name(c.cmp) << " " << c.threshold;
    }
    return oss.str();
}

std::optional<QueryPlan> parse_query_plan(const std::string& raw) {
    // QUERY text runs until the FILTER line; everything after the filter value
    // line is tolerated as trailing prose.
    std::istringstream iss(raw);
    std::string line;
    std::string query;
    std::optional<std::string> filter_text;
    bool in_query = false;
    while (std::getline(iss, line)) {
        std::string t = trim(line);
        if (t.rfind("QUERY:", 0) == 0) {
            query = trim(t.substr(6));
            in_query = true;
        } else if (t.rfind("FILTER:", 0) == 0) {
            filter_text = trim(t.substr(7));
            break;
        } else if (in_query && !t.empty()) {
            if (!query.empty()) query += " ";
            query += t;
        }
    }
    if (!in_query || !filter_text || query.empty()) return std::nullopt;
    auto filter = parse_filter(*filter_text);
    if (!filter) return std::nullopt;
    QueryPlan plan;
    plan.query_text = query;
    plan.filter = *filter;
    return plan;
}

std::string serialize_query_plan(const QueryPlan& plan) {
    return "QUERY: " + plan.query_text + "\nFILTER: " + filter_to_string(plan.filter) + "\n";
}

std::optional<EdgeDraft> parse_edge_draft(const std::string& raw, int num_categories) {
    auto label = find_line_value(raw, "LABEL:");
    if (!label) return std::nullopt;
    int category;
    try {
        size_t used = 0;
        category = std::stoi(*label, &used);
        if (used != label->size()) return std::nullopt;
    } catch (...) {
        return std::nullopt;
    }
    if (category < 1 || category > num_categories) return std::nullopt;

    // TEXT captures the remainder of the line plus any following lines.
    std::istringstream iss(raw);
    std::string line;
    std::string message;
    bool in_text = false;
    while (std::getline(iss, line)) {
        std::string t = trim(line);
        if (!in_text && t.rfind("TEXT:", 0) == 0) {
            message = trim(t.substr(5));
            in_text = true;
        } else if (in_text) {
            if (!message.empty() && !t.empty()) message += " ";
            message += t;
        }
    }
    if (!in_text) return std::nullopt;
    EdgeDraft draft;
    draft.message = message;
    draft.category = category;
    return draft;
}

std::string serialize_edge_draft(const EdgeDraft& draft) {
    return "LABEL: " + std::to_string(draft.category) + "\nTEXT: " + draft.message + "\n";
}

bool validate_format(const std::string& raw, WireSchema schema) {
    if (schema == WireSchema::query) return parse_query_plan(raw).has_value();
    // Label range is a semantic check, not a format one; any integer passes here.
    auto label = find_line_value(raw, "LABEL:");
    if (!label) return false;
    try {
        size_t used = 0;
        (void)std::stoi(*label, &used);
        if (used != label->size()) return false;
    } catch (...) {
        return false;
    }
    return find_line_value(raw, "TEXT:").has_value();
}

QueryPlan HeuristicBackend::propose_query(const NodeProfile& src, const NodeMemory& memory,
                                          const std::string&) {
    QueryPlan plan;
    size_t n = memory.entries.size();
    for (size_t i = n > 3 ? n - 3 : 0; i < n; ++i) {
        if (!plan.query_text.empty()) plan.query_text += " ";
        plan.query_text += memory.entries[i].dst_profile;
    }
    if (plan.query_text.empty()) plan.query_text = src.profile.empty() ? src.id : src.profile;
    plan.filter.clauses.push_back({BehaviorMetric::HI, Comparator::GE, 1.0});
    return plan;
}

EdgeDraft HeuristicBackend::propose_edge(const NodeProfile& src, const NodeProfile& dst,
                                         const NodeMemory& pair_memory) {
    EdgeDraft draft;
    std::map<int, int> counts;
    for (const MemoryEntry& e : pair_memory.entries) ++counts[e.category];
    draft.category = 1;
    int best = 0;
    for (const auto& [cat, n] : counts) {
        if (n > best) {  // map iteration is ascending, so ties keep the lowest id
            best = n;
            draft.category = cat;
        }
    }
    draft.message = src.id + " interacts with " + dst.id;
    return draft;
}

ReplayBackend::ReplayBackend(const TemporalGraph& reference, const DayInterval& future)
    : reference_(reference) {
    for (const Interaction& e : reference.window(future)) {
        auto& dsts = destinations_[{e.src, e.t}];
        if (std::find(dsts.begin(), dsts.end(), e.dst) == dsts.end()) dsts.push_back(e.dst);
        attrs_[{e.src, e.dst, e.t}].emplace_back(e.message, e.category);
    }
}

QueryPlan ReplayBackend::propose_query(const NodeProfile& src, const NodeMemory& memory,
                                       const std::string&) {
    QueryPlan plan;
    auto it = destinations_.find({src.id, memory.cut});
    if (it != destinations_.end() && !it->second.empty())
        plan.query_text = reference_.profile_of(it->second.front());
    if (plan.query_text.empty()) plan.query_text = src.profile.empty() ? src.id : src.profile;
    return plan;  // empty filter
}

EdgeDraft ReplayBackend::propose_edge(const NodeProfile& src, const NodeProfile& dst,
                                      const NodeMemory& pair_memory) {
    EdgeDraft draft;
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(src.id, dst.id, pair_memory.cut);
    auto it = attrs_.find(key);
    if (it != attrs_.end()) {
        size_t& cur = cursors_[key];
        const auto& [message, category] = it->second[std::min(cur, it->second.size() - 1)];
        draft.message = message;
        draft.category = category;
        if (cur + 1 < it->second.size()) ++cur;
    } else {
        draft.message = src.id + " interacts with " + dst.id;
        draft.format_ok = false;
    }
    return draft;
}

std::optional<std::vector<NodeId>> ReplayBackend::replay_destinations(const NodeId& u, int day) {
    auto it = destinations_.find({u, day});
    if (it == destinations_.end()) return std::vector<NodeId>{};
    return it->second;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw GraphError("cannot open file: " + path);
    std::ostringstream oss;
    oss << f.rdbuf();
    return oss.str();
}

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string out = tmpl;
    for (const auto& [key, value] : values) {
        std::string needle = "{" + key + "}";
        size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

std::string format_memory(const NodeMemory& memory, size_t max_entries) {
    std::ostringstream oss;
    size_t n = memory.entries.size();
    size_t start = n > max_entries ? n - max_entries : 0;
    for (size_t i = start; i < n; ++i) {
        const MemoryEntry& e = memory.entries[i];
        oss << "- day " << e.t << ", to [" << e.dst << "] (" << e.dst_profile
            << "), category " << e.category << ": " << e.message << "\n";
    }
    if (n == 0) oss << "(no prior interactions)\n";
    return oss.str();
}

LlmBackend::LlmBackend(LlmBackendConfig cfg) : cfg_(std::move(cfg)) {
    query_template_ = read_text_file(cfg_.query_template_path);
    edge_template_ = read_text_file(cfg_.edge_template_path);
    HttpClientConfig hc;
    hc.base_url = cfg_.base_url;
    hc.api_key = cfg_.api_key;
    hc.max_retries = cfg_.max_retries;
    hc.timeout_sec = cfg_.timeout_sec;
    hc.max_in_flight = cfg_.max_in_flight;
    hc.audit_log_path = cfg_.audit_log_path;
    client_ = std::make_unique<JsonHttpClient>(hc);
}

LlmBackend::~LlmBackend() = default;

std::string LlmBackend::complete(const std::string& prompt) {
    nlohmann::json body{{"model", cfg_.model},
                        {"temperature", cfg_.temperature},
                        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
    nlohmann::json resp = client_->post_json(cfg_.path, body);
    return resp.at(nlohmann::json::json_pointer("/choices/0/message/content")).get<std::string>();
}

QueryPlan LlmBackend::propose_query(const NodeProfile& src, const NodeMemory& memory,
                                    const std::string& neighbor_context) {
    std::string prompt = render_template(
        query_template_, {{"src_id", src.id},
                          {"src_profile", src.profile},
                          {"memory", format_memory(memory)},
                          {"neighbor_memory", neighbor_context},
                          {"degree", std::to_string(memory.entries.size())}});
    for (int attempt = 0; attempt <= cfg_.parse_retries; ++attempt) {
        std::string raw;
        try {
            raw = complete(prompt);
        } catch (const HttpError&) {
            break;
        }
        if (auto plan = parse_query_plan(raw)) return *plan;
    }
    QueryPlan fallback;  // flagged invalid-format
    fallback.query_text = src.profile.empty() ? src.id : src.profile;
    fallback.format_ok = false;
    return fallback;
}

EdgeDraft LlmBackend::propose_edge(const NodeProfile& src, const NodeProfile& dst,
                                   const NodeMemory& pair_memory) {
    std::string prompt = render_template(edge_template_,
                                         {{"src_id", src.id},
                                          {"src_profile", src.profile},
                                          {"dst_id", dst.id},
                                          {"dst_profile", dst.profile},
                                          {"memory", format_memory(pair_memory)}});
    for (int attempt = 0; attempt <= cfg_.parse_retries; ++attempt) {
        std::string raw;
        try {
            raw = complete(prompt);
        } catch (const HttpError&) {
            break;
        }
        if (auto draft = parse_edge_draft(raw, cfg_.num_categories)) return *draft;
    }
    EdgeDraft fallback;
    fallback.message = src.id + " interacts with " + dst.id;
    fallback.category = 1;
    fallback.format_ok = false;
    return fallback;
}

}  // namespace graphsim
