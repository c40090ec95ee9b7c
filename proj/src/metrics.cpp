#include "rotinv/metrics.hpp"

#include <stdexcept>

namespace rotinv {

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("accuracy: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

std::vector<double> per_class_accuracy(std::span<const int> predictions,
                                       std::span<const int> labels, std::size_t num_classes) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("per_class_accuracy: length mismatch");
  std::vector<std::size_t> hits(num_classes, 0);
  std::vector<std::size_t> totals(num_classes, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes)
      throw std::out_of_range("per_class_accuracy: label out of range");
    ++totals[label];
    if (predictions[i] == label) ++hits[label];
  }
  std::vector<double> out(num_classes, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c)
    if (totals[c] > 0) out[c] = static_cast<double>(hits[c]) / static_cast<double>(totals[c]);
  return out;
}

RetrievalMetrics retrieval_metrics(std::span<const std::vector<std::size_t>> rankings,
                                   std::span<const std::vector<char>> relevance) {
  if (rankings.size() != relevance.size())
    throw std::invalid_argument("retrieval_metrics: length mismatch");

  double ap_sum = 0.0;
  double pn_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t q = 0; q < rankings.size(); ++q) {
    const std::vector<std::size_t>& ranked = rankings[q];
    const std::vector<char>& rel = relevance[q];

    std::size_t total_relevant = 0;
    for (char r : rel) total_relevant += r ? 1 : 0;
    if (total_relevant == 0) continue;

    std::size_t hits = 0;
    double ap = 0.0;
    std::size_t hits_at_r = 0;
    for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
      const std::size_t item = ranked[rank];
      if (item >= rel.size()) throw std::out_of_range("retrieval_metrics: ranked index out of range");
      if (rel[item]) {
        ++hits;
        ap += static_cast<double>(hits) / static_cast<double>(rank + 1);
      }
      if (rank + 1 == total_relevant) hits_at_r = hits;
    }
    if (ranked.size() < total_relevant) hits_at_r = hits;

    ap_sum += ap / static_cast<double>(total_relevant);
    pn_sum += static_cast<double>(hits_at_r) / static_cast<double>(total_relevant);
    ++counted;
  }

  RetrievalMetrics out;
  if (counted > 0) {
    out.mean_average_precision = ap_sum / static_cast<double>(counted);
    out.precision_at_n = pn_sum / static_cast<double>(counted);
  }
  return out;
}

}  // namespace rotinv
