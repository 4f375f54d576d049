#include "graphsim/edge_rewards.hpp"

#include <algorithm>
#include <sstream>

#include "graphsim/http_client.hpp"
#include "graphsim/policy.hpp"

namespace graphsim {

double curriculum_alpha(const CurriculumState& state) {
    if (state.step < 0) throw GraphError("curriculum step must be >= 0");
    return std::max(1.0 - state.gamma * static_cast<double>(state.step), state.epsilon);
}

void FrequencyScorer::fit(const TemporalGraph& graph, int cut) {
    num_categories_ = graph.num_categories();
    counts_.clear();
    for (const Interaction& e : graph.edges()) {
        if (e.t >= cut) break;  // edges are t-sorted
        auto& c = counts_[{e.src, e.dst}];
        if (c.empty()) c.assign(static_cast<size_t>(num_categories_), 0);
        ++c[static_cast<size_t>(e.category - 1)];
    }
    fitted_ = true;
}

ClassifierScore FrequencyScorer::score(const NodeId& u, const NodeId& v) const {
    if (!fitted()) throw GraphError("scorer not fitted");
    ClassifierScore s(static_cast<size_t>(num_categories_), 0.0);
    auto it = counts_.find({u, v});
    double total = 0.0;
    for (size_t c = 0; c < s.size(); ++c) {
        double n = it == counts_.end() ? 0.0 : it->second[c];
        s[c] = n + smoothing_;
        total += s[c];
    }
    for (double& x : s) x /= total;
    return s;
}

double reward_cat(int pred, int truth, const ClassifierScore& score,
                  const CurriculumState& state, bool format_ok) {
    if (truth < 1 || truth > static_cast<int>(score.size()))
        throw GraphError("truth category out of range");
    double alpha = curriculum_alpha(state);
    double r = alpha * score[static_cast<size_t>(truth - 1)];
    r += (1.0 - alpha) * (pred == truth ? 1.0 : 0.0);
    r += format_ok ? 1.0 : 0.0;
    return r;
}

JudgeScores parse_judge_scores(const std::string& raw) {
    JudgeScores s;
    auto assign = [&](const std::string& key, double& field) {
        std::istringstream iss(raw);
        std::string line;
        while (std::getline(iss, line)) {
            size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            if (line.compare(start, key.size(), key) != 0) continue;
            size_t colon = line.find(':', start + key.size());
            if (colon == std::string::npos) continue;
            try {
                double v = std::stod(line.substr(colon + 1));
                if (v < 0.0 || v > 5.0) {
                    s.clamped = true;
                    v = std::clamp(v, 0.0, 5.0);
                }
                field = v;
            } catch (...) {
                // unparseable dimension stays 0
            }
            return;
        }
    };
    assign("GF", s.gf);
    assign("CF", s.cf);
    assign("PD", s.pd);
    assign("DA", s.da);
    assign("IQ", s.iq);
    assign("CR", s.cr);
    return s;
}

std::string serialize_judge_scores(const JudgeScores& s) {
    std::ostringstream oss;
    oss << "GF: " << s.gf << "\nCF: " << s.cf << "\nPD: " << s.pd << "\nDA: " << s.da
        << "\nIQ: " << s.iq << "\nCR: " << s.cr << "\n";
    return oss.str();
}

double reward_text(const JudgeScores& scores, bool format_ok) {
    return scores.sum() / (6.0 * 5.0) + (format_ok ? 1.0 : 0.0);
}

JudgeClient::JudgeClient(JudgeClientConfig cfg) : cfg_(std::move(cfg)) {
    template_ = read_text_file(cfg_.template_path);
    HttpClientConfig hc;
    hc.base_url = cfg_.base_url;
    hc.api_key = cfg_.api_key;
    hc.max_retries = cfg_.max_retries;
    hc.timeout_sec = cfg_.timeout_sec;
    hc.max_in_flight = cfg_.max_in_flight;
    hc.audit_log_path = cfg_.audit_log_path;
    client_ = std::make_unique<JsonHttpClient>(hc);
}

JudgeClient::~JudgeClient() = default;

std::vector<JudgeScores> JudgeClient::judge(const std::vector<JudgeRequest>& batch) const {
    std::vector<JudgeScores> out;
    out.reserve(batch.size());
    for (const JudgeRequest& req : batch) {
        std::string prompt = render_template(template_, {{"goal", req.goal},
                                                         {"prompt", req.prompt},
                                                         {"response", req.response},
                                                         {"reference", req.reference}});
        nlohmann::json body{
            {"model", cfg_.model},
            {"temperature", cfg_.temperature},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
        try {
            nlohmann::json resp = client_->post_json(cfg_.path, body);
            std::string content =
                resp.at(nlohmann::json::json_pointer("/choices/0/message/content"))
                    .get<std::string>();
            out.push_back(parse_judge_scores(content));
        } catch (const HttpError&) {
            out.push_back(JudgeScores{});  // all zeros, flagged by the zero sum
        }
    }
    return out;
}

std::vector<std::pair<RewardDomain, size_t>> interleave_domains(size_t n_cat, size_t n_msg,
                                                                int ratio_cat, int ratio_msg) {
    if (ratio_cat < 1 || ratio_msg < 1) throw GraphError("interleave ratio must be positive");
    std::vector<std::pair<RewardDomain, size_t>> out;
    out.reserve(n_cat + n_msg);
    size_t i = 0, j = 0;
    while (i < n_cat || j < n_msg) {
        for (int k = 0; k < ratio_cat && i < n_cat; ++k)
            out.emplace_back(RewardDomain::category, i++);
        for (int k = 0; k < ratio_msg && j < n_msg; ++k)
            out.emplace_back(RewardDomain::message, j++);
    }
    return out;
}

}  // namespace graphsim
