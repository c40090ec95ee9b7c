#pragma once

#include <span>
#include <vector>

namespace rotinv {

struct MetricReport {
  double accuracy = 0.0;
  std::vector<double> per_class_accuracy;
  double mean_average_precision = 0.0;
  double precision_at_n = 0.0;
};

double accuracy(std::span<const int> predictions, std::span<const int> labels);

// Classes with no examples report accuracy 0.
std::vector<double> per_class_accuracy(std::span<const int> predictions,
                                       std::span<const int> labels, std::size_t num_classes);

struct RetrievalMetrics {
  double mean_average_precision = 0.0;
  double precision_at_n = 0.0;  // precision among the top R, R = per-query relevant count
};

// rankings[q] lists gallery indices best first; relevance[q][g] marks the
// relevant gallery items. Queries with no relevant item are skipped.
RetrievalMetrics retrieval_metrics(std::span<const std::vector<std::size_t>> rankings,
                                   std::span<const std::vector<char>> relevance);

}  // namespace rotinv
