#include "graphsim/metrics_micro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace graphsim {

double recall_at_k(const SelectionSample& sample, int k) {
    if (sample.truth.empty()) throw GraphError("recall_at_k: empty truth set");
    size_t top = std::min<size_t>(static_cast<size_t>(k), sample.predicted.size());
    std::unordered_set<NodeId> seen(sample.predicted.begin(),
                                    sample.predicted.begin() + static_cast<long>(top));
    size_t hits = 0;
    for (const NodeId& v : sample.truth)
        if (seen.count(v)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(sample.truth.size());
}

int hit_at_k(const SelectionSample& sample, int k) {
    return recall_at_k(sample, k) > 0.0 ? 1 : 0;
}

std::vector<bool> split_easy_hard(const std::vector<SelectionSample>& samples) {
    if (samples.empty()) throw GraphError("split_easy_hard: no samples");
    std::vector<size_t> sizes;
    sizes.reserve(samples.size());
    for (const SelectionSample& s : samples) sizes.push_back(s.truth.size());
    std::vector<size_t> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    // nearest-rank percentile: value at ceil(p*n), 1-based
    size_t rank = static_cast<size_t>(std::ceil(0.70 * static_cast<double>(sorted.size())));
    rank = std::max<size_t>(rank, 1);
    size_t p70 = sorted[rank - 1];
    std::vector<bool> easy(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) easy[i] = sizes[i] > p70;
    return easy;
}

double category_accuracy(const std::vector<std::pair<int, int>>& pred_truth) {
    if (pred_truth.empty()) throw GraphError("category_accuracy: empty input");
    size_t correct = 0;
    for (const auto& [pred, truth] : pred_truth)
        if (pred == truth) ++correct;
    return static_cast<double>(correct) / static_cast<double>(pred_truth.size());
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    // rolling single-row DP
    std::vector<size_t> row(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        size_t diag = 0;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t tmp = row[j];
            row[j] = (a[i - 1] == b[j - 1]) ? diag + 1 : std::max(row[j], row[j - 1]);
            diag = tmp;
        }
    }
    return row[b.size()];
}

double rouge_l(const std::vector<std::pair<std::string, std::string>>& gen_ref) {
    size_t lcs_sum = 0;
    size_t ref_sum = 0;
    for (const auto& [gen, ref] : gen_ref) {
        std::vector<std::string> g = tokenize(gen);
        std::vector<std::string> r = tokenize(ref);
        lcs_sum += lcs_length(g, r);
        ref_sum += r.size();
    }
    if (ref_sum == 0) throw GraphError("rouge_l: empty reference corpus");
    return static_cast<double>(lcs_sum) / static_cast<double>(ref_sum);
}

double token_f1(const std::vector<std::pair<std::string, std::string>>& gen_ref,
                const EmbeddingProvider& provider) {
    if (gen_ref.empty()) throw GraphError("token_f1: empty input");
    double total = 0.0;
    for (const auto& [gen, ref] : gen_ref) {
        std::vector<std::string> g = tokenize(gen);
        std::vector<std::string> r = tokenize(ref);
        if (g.empty() && r.empty()) {
            total += 1.0;
            continue;
        }
        if (g.empty() || r.empty()) continue;  // F1 = 0
        std::vector<EmbeddingVector> gv, rv;
        gv.reserve(g.size());
        rv.reserve(r.size());
        for (const std::string& t : g) gv.push_back(provider.embed(t));
        for (const std::string& t : r) rv.push_back(provider.embed(t));
        double precision = 0.0;
        for (const EmbeddingVector& a : gv) {
            double best = 0.0;
            for (const EmbeddingVector& b : rv) best = std::max(best, cosine(a, b));
            precision += best;
        }
        precision /= static_cast<double>(gv.size());
        double recall = 0.0;
        for (const EmbeddingVector& b : rv) {
            double best = 0.0;
            for (const EmbeddingVector& a : gv) best = std::max(best, cosine(a, b));
            recall += best;
        }
        recall /= static_cast<double>(rv.size());
        if (precision + recall > 0.0) total += 2.0 * precision * recall / (precision + recall);
    }
    return total / static_cast<double>(gen_ref.size());
}

std::vector<double> minmax_normalize(const std::vector<double>& values, Direction direction) {
    if (values.empty()) throw GraphError("minmax_normalize: empty input");
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    std::vector<double> out(values.size(), 1.0);  // degenerate max==min -> all 1.0
    if (hi > lo) {
        for (size_t i = 0; i < values.size(); ++i) {
            double x = (values[i] - lo) / (hi - lo);
            out[i] = direction == Direction::higher_better ? x : 1.0 - x;
        }
    }
    return out;
}

std::vector<TdggScores> compose_tdgg(const std::vector<MicroReport>& reports) {
    if (reports.empty()) throw GraphError("compose_tdgg: no reports");
    auto column = [&](double MicroReport::* field) {
        std::vector<double> v;
        v.reserve(reports.size());
        for (const MicroReport& r : reports) v.push_back(r.*field);
        return minmax_normalize(v, Direction::higher_better);
    };
    std::vector<double> re = column(&MicroReport::r100_easy);
    std::vector<double> rh = column(&MicroReport::r100_hard);
    std::vector<double> ra = column(&MicroReport::r100_all);
    std::vector<double> acc = column(&MicroReport::acc);
    std::vector<double> rouge = column(&MicroReport::rouge);
    std::vector<double> f1 = column(&MicroReport::f1);

    std::vector<TdggScores> out(reports.size());
    for (size_t i = 0; i < reports.size(); ++i) {
        out[i].s_sel = (re[i] + rh[i] + ra[i]) / 3.0;
        out[i].s_edge = (acc[i] + rouge[i] + f1[i]) / 3.0;
        out[i].s_tdgg = 0.5 * out[i].s_sel + 0.5 * out[i].s_edge;
    }
    return out;
}

std::vector<double> mean_ranks(const std::vector<std::vector<double>>& metric_columns,
                               const std::vector<Direction>& directions) {
    if (metric_columns.empty() || metric_columns.size() != directions.size())
        throw GraphError("mean_ranks: column/direction mismatch");
    size_t n = metric_columns.front().size();
    std::vector<double> sums(n, 0.0);
    for (size_t m = 0; m < metric_columns.size(); ++m) {
        const std::vector<double>& col = metric_columns[m];
        if (col.size() != n) throw GraphError("mean_ranks: ragged columns");
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        bool higher = directions[m] == Direction::higher_better;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return higher ? col[a] > col[b] : col[a] < col[b];
        });
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && col[order[j + 1]] == col[order[i]]) ++j;
            double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (size_t k = i; k <= j; ++k) sums[order[k]] += shared;
            i = j + 1;
        }
    }
    for (double& s : sums) s /= static_cast<double>(metric_columns.size());
    return sums;
}

}  // namespace graphsim
