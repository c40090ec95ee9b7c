#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "rotinv/metrics.hpp"

using namespace rotinv;

TEST_CASE("accuracy counts exact matches") {
  const std::vector<int> labels = {0, 1, 2, 1};
  CHECK(accuracy(labels, labels) == 1.0);
  CHECK(accuracy(std::vector<int>{0, 1, 2, 2}, labels) == 0.75);
  CHECK(accuracy(std::vector<int>{1, 0, 0, 0}, labels) == 0.0);
}

TEST_CASE("accuracy rejects mismatched or empty inputs") {
  const std::vector<int> labels = {0, 1};
  CHECK_THROWS(accuracy(std::vector<int>{0}, labels));
  CHECK_THROWS(accuracy(std::vector<int>{}, std::vector<int>{}));
}

TEST_CASE("random predictions over four classes sit near chance") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dist(0, 3);
  const std::size_t n = 20000;
  std::vector<int> predictions(n), labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    predictions[i] = dist(rng);
    labels[i] = dist(rng);
  }
  const double acc = accuracy(predictions, labels);
  CHECK(acc > 0.20);
  CHECK(acc < 0.30);
}

TEST_CASE("per class accuracy splits by label") {
  const std::vector<int> labels = {0, 0, 1, 1, 1, 2};
  const std::vector<int> predictions = {0, 1, 1, 1, 0, 0};
  const std::vector<double> per = per_class_accuracy(predictions, labels, 4);
  REQUIRE(per.size() == 4);
  CHECK(per[0] == 0.5);
  CHECK(per[1] == doctest::Approx(2.0 / 3.0));
  CHECK(per[2] == 0.0);
  CHECK(per[3] == 0.0);  // no examples
}

TEST_CASE("a perfect ranking scores full retrieval marks") {
  // Two queries over a four item gallery, relevant items ranked first.
  const std::vector<std::vector<std::size_t>> rankings = {{0, 1, 2, 3}, {2, 3, 0, 1}};
  const std::vector<std::vector<char>> relevance = {{1, 1, 0, 0}, {0, 0, 1, 1}};
  const RetrievalMetrics m = retrieval_metrics(rankings, relevance);
  CHECK(m.mean_average_precision == 1.0);
  CHECK(m.precision_at_n == 1.0);
}

TEST_CASE("a single relevant item in second place gives average precision one half") {
  const std::vector<std::vector<std::size_t>> rankings = {{3, 1, 0, 2}};
  const std::vector<std::vector<char>> relevance = {{0, 1, 0, 0}};
  const RetrievalMetrics m = retrieval_metrics(rankings, relevance);
  CHECK(m.mean_average_precision == 0.5);
  // R = 1, and the top-1 item is not relevant
  CHECK(m.precision_at_n == 0.0);
}

TEST_CASE("average precision follows the textbook formula") {
  // Relevant items at ranks 1, 3, 4: AP = (1/1 + 2/3 + 3/4) / 3.
  const std::vector<std::vector<std::size_t>> rankings = {{5, 0, 4, 2, 1, 3}};
  const std::vector<std::vector<char>> relevance = {{0, 0, 1, 0, 1, 1}};
  const RetrievalMetrics m = retrieval_metrics(rankings, relevance);
  CHECK(m.mean_average_precision == doctest::Approx((1.0 + 2.0 / 3.0 + 3.0 / 4.0) / 3.0));
  // top R = 3 holds items 5, 0, 4: two relevant
  CHECK(m.precision_at_n == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("queries with no relevant items are skipped") {
  const std::vector<std::vector<std::size_t>> rankings = {{0, 1}, {1, 0}};
  const std::vector<std::vector<char>> relevance = {{0, 0}, {1, 0}};
  const RetrievalMetrics m = retrieval_metrics(rankings, relevance);
  // only the second query counts; its relevant item sits at rank 2
  CHECK(m.mean_average_precision == 0.5);
  CHECK(m.precision_at_n == 0.0);
}

TEST_CASE("retrieval metrics validate their inputs") {
  const std::vector<std::vector<std::size_t>> rankings = {{0, 1}};
  CHECK_THROWS(retrieval_metrics(rankings, std::vector<std::vector<char>>{}));
  CHECK_THROWS(retrieval_metrics(rankings, std::vector<std::vector<char>>{{1}}));

  // no queries at all: every aggregate reports zero
  const RetrievalMetrics empty = retrieval_metrics(std::vector<std::vector<std::size_t>>{},
                                                   std::vector<std::vector<char>>{});
  CHECK(empty.mean_average_precision == 0.0);
  CHECK(empty.precision_at_n == 0.0);
}

TEST_CASE("metric values stay within the unit interval") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t gallery = 8;
    std::vector<std::size_t> order(gallery);
    for (std::size_t i = 0; i < gallery; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> rel(gallery);
    bool any = false;
    for (std::size_t i = 0; i < gallery; ++i) {
      rel[i] = static_cast<char>(coin(rng));
      any = any || rel[i];
    }
    if (!any) rel[0] = 1;
    const std::vector<std::vector<std::size_t>> rankings = {order};
    const std::vector<std::vector<char>> relevance = {rel};
    const RetrievalMetrics m = retrieval_metrics(rankings, relevance);
    CHECK(m.mean_average_precision >= 0.0);
    CHECK(m.mean_average_precision <= 1.0);
    CHECK(m.precision_at_n >= 0.0);
    CHECK(m.precision_at_n <= 1.0);
  }
}
