#pragma once
// Micro-level evaluation: destination recall/hit with Easy/Hard split,
// category accuracy, ROUGE-L, embedding token F1, and composite scores.

#include <set>
#include <string>
#include <vector>

#include "graphsim/embedding.hpp"
#include "graphsim/graph.hpp"

namespace graphsim {

struct SelectionSample {
    NodeId u;
    int t = 0;
    std::set<NodeId> truth;          // non-empty for evaluated samples
    std::vector<NodeId> predicted;   // ranked
};

double recall_at_k(const SelectionSample& sample, int k = 100);
int hit_at_k(const SelectionSample& sample, int k = 100);

// true = Easy: |truth| strictly above the nearest-rank 70th percentile of all
// sample truth sizes.
std::vector<bool> split_easy_hard(const std::vector<SelectionSample>& samples);

double category_accuracy(const std::vector<std::pair<int, int>>& pred_truth);

// Lowercased Unicode-whitespace word split.
std::vector<std::string> tokenize(const std::string& text);
size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Corpus-level: sum LCS(gen, ref) / sum |ref| over all (generated, reference) pairs.
double rouge_l(const std::vector<std::pair<std::string, std::string>>& gen_ref);

// Mean per-pair F1 of greedy max-cosine token alignment under the provider.
double token_f1(const std::vector<std::pair<std::string, std::string>>& gen_ref,
                const EmbeddingProvider& provider);

enum class Direction { higher_better, lower_better };

// (x-min)/(max-min), reversed for lower-better; max==min -> all 1.0.
std::vector<double> minmax_normalize(const std::vector<double>& values, Direction direction);

struct MicroReport {
    std::string model;
    double r100_easy = 0, r100_hard = 0, r100_all = 0;
    double h100_easy = 0, h100_hard = 0, h100_all = 0;
    double acc = 0, rouge = 0, f1 = 0;
};

struct TdggScores {
    double s_sel = 0, s_edge = 0, s_tdgg = 0;
};

// Min-max across models, then S_sel = mean of 3 normalized recalls,
// S_edge = mean of normalized {ACC, ROUGE-L, F1}, S_TDGG = their mean.
std::vector<TdggScores> compose_tdgg(const std::vector<MicroReport>& reports);

// Mean rank across per-metric rankings; ties share the mean occupied position.
std::vector<double> mean_ranks(const std::vector<std::vector<double>>& metric_columns,
                               const std::vector<Direction>& directions);

}  // namespace graphsim
