#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "weftprint/eval.hpp"

using namespace weftprint;

namespace {

DistanceMatrix abc(double ab, double ac, double bc) {
  return DistanceMatrix({"a", "b", "c"}, {0, ab, ac, ab, 0, bc, ac, bc, 0});
}

Partition partition(std::vector<std::string> labels) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) ids.push_back(std::string(1, static_cast<char>('a' + i)));
  return Partition::from_labels(ids, labels);
}

DistanceMatrix random_integer_matrix(std::mt19937_64& rng, std::size_t n, int max_value) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("x" + std::to_string(i));
  DistanceMatrix d(ids);
  std::uniform_int_distribution<int> value(1, max_value);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, value(rng));
  return d;
}

}  // namespace

TEST_CASE("partitions use dense ids in order of appearance") {
  const Partition p = partition({"z", "y", "z", "x"});
  CHECK(p.count == 3);
  CHECK(p.cluster == std::vector<int>{0, 1, 0, 2});
  CHECK_THROWS(Partition::from_labels({"a"}, {"x", "y"}));
}

TEST_CASE("UPGMA three point example") {
  const auto merges = upgma_merges(abc(1, 4, 5), 1);
  REQUIRE(merges.size() == 2);
  CHECK(merges[0].left == 0);
  CHECK(merges[0].right == 1);
  CHECK(merges[0].distance == 1.0);
  CHECK(merges[1].left == 0);
  CHECK(merges[1].right == 2);
  CHECK(merges[1].distance == 4.5);
  const Partition two = upgma_cluster(abc(1, 4, 5), 2);
  CHECK(two.cluster == std::vector<int>{0, 0, 1});
}

TEST_CASE("UPGMA bounds and ties") {
  const DistanceMatrix d = abc(2, 2, 2);
  CHECK(upgma_cluster(d, 3).cluster == std::vector<int>{0, 1, 2});
  CHECK(upgma_cluster(d, 1).cluster == std::vector<int>{0, 0, 0});
  const auto merges = upgma_merges(d, 2);
  CHECK(merges[0].left == 0);
  CHECK(merges[0].right == 1);
  CHECK_THROWS_AS(upgma_cluster(d, 0), std::invalid_argument);
  CHECK_THROWS_AS(upgma_cluster(d, 4), std::invalid_argument);
}

TEST_CASE("UPGMA matches the from-scratch oracle") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 9;
    const DistanceMatrix d = random_integer_matrix(rng, n, t % 2 == 0 ? 4 : 100);
    const auto got = upgma_merges(d, 1);
    const auto want = oracle::upgma(d, 1);
    REQUIRE(got.size() == want.size());
    for (std::size_t s = 0; s < got.size(); ++s) {
      CHECK(got[s].left == want[s].left);
      CHECK(got[s].right == want[s].right);
      CHECK(std::abs(got[s].distance - want[s].distance) <= 1e-12);
    }
  }
}

TEST_CASE("UPGMA is invariant under positive scaling") {
  std::mt19937_64 rng(52);
  const DistanceMatrix d = random_integer_matrix(rng, 9, 50);
  std::vector<double> scaled = d.values();
  for (double& v : scaled) v *= 0.25;
  const DistanceMatrix s(d.ids(), scaled);
  const auto a = upgma_merges(d, 1);
  const auto b = upgma_merges(s, 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].left == b[i].left);
    CHECK(a[i].right == b[i].right);
  }
}

TEST_CASE("pair counting scores") {
  const Partition truth = partition({"x", "x", "y"});
  const PairScores same = pair_scores(partition({"p", "p", "q"}), truth);
  CHECK(same.confusion.tp == 1);
  CHECK(same.confusion.tn == 2);
  CHECK(same.rand_index == 1.0);
  CHECK(same.f_measure == 1.0);

  const PairScores off = pair_scores(partition({"p", "q", "q"}), truth);
  CHECK(off.confusion.tp == 0);
  CHECK(off.confusion.fn == 1);
  CHECK(off.confusion.fp == 1);
  CHECK(off.confusion.tn == 1);
  CHECK(off.rand_index == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(off.precision == 0.0);
  CHECK(off.recall == 0.0);
  CHECK(off.f_measure == 0.0);

  // relabeling the found clusters changes nothing
  const PairScores swapped = pair_scores(partition({"q", "p", "p"}), truth);
  CHECK(swapped.rand_index == off.rand_index);

  const PairScores singletons = pair_scores(partition({"a", "b", "c"}), partition({"a", "b", "c"}));
  CHECK(singletons.rand_index == 1.0);
  CHECK(singletons.precision == 0.0);

  std::vector<std::string> other_ids = {"a", "b", "z"};
  CHECK_THROWS(pair_scores(Partition::from_labels(other_ids, {"1", "1", "2"}), truth));
}

TEST_CASE("pair counts add up") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 20;
    std::vector<std::string> a;
    std::vector<std::string> b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(std::to_string(rng() % 4));
      b.push_back(std::to_string(rng() % 3));
    }
    const PairScores s = pair_scores(partition(a), partition(b));
    const auto& c = s.confusion;
    CHECK(c.tp + c.tn + c.fp + c.fn == n * (n - 1) / 2);
    for (double v : {s.rand_index, s.precision, s.recall, s.f_measure}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("ranking") {
  const DistanceMatrix d({"q", "a", "b", "c"}, {0, 0.1, 0.3, 0.2, 0.1, 0, 1, 1, 0.3, 1, 0, 1, 0.2, 1, 1, 0});
  CHECK(rank_for_query(d, 0) == std::vector<std::size_t>{1, 3, 2});
  const DistanceMatrix flat({"d", "b", "a", "c"}, std::vector<double>(16, 0.0));
  CHECK(rank_for_query(flat, 0) == std::vector<std::size_t>{2, 1, 3});
  CHECK_THROWS(rank_for_query(d, 4));
}

TEST_CASE("average precision fixtures") {
  CHECK(average_precision({0, 1, 2, 3}, {0, 1}) == 1.0);
  CHECK(average_precision({0, 1, 2, 3}, {0, 2}) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(average_precision({0, 1, 2, 3, 4}, {0, 3}) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(average_precision({0, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(average_precision({0, 1}, {5}), std::invalid_argument);
}

TEST_CASE("interpolated precision fixture") {
  const auto p = interpolated_precision({0, 1, 2, 3, 4}, {0, 3});
  for (std::size_t l = 0; l <= 5; ++l) CHECK(p[l] == 1.0);
  for (std::size_t l = 6; l < kRecallLevels; ++l) CHECK(p[l] == 0.5);
}

TEST_CASE("MAP and curves on a hand-built matrix") {
  // a,b in one category, c,d in the other
  const DistanceMatrix d({"a", "b", "c", "d"},
                         {0, 0.5, 0.2, 0.9,
                          0.5, 0, 0.6, 0.3,
                          0.2, 0.6, 0, 0.4,
                          0.9, 0.3, 0.4, 0});
  const std::vector<std::string> labels = {"x", "x", "y", "y"};
  // a: c,b,d -> b at rank 2 -> 1/2
  // b: d,a,c -> a at rank 2 -> 1/2
  // c: a,d,b -> d at rank 2 -> 1/2
  // d: b,c,a -> c at rank 2 -> 1/2
  CHECK(map_score(d, labels) == doctest::Approx(0.5).epsilon(1e-12));

  const DistanceMatrix separated({"a", "b", "c", "d"}, {0, 1, 5, 5, 1, 0, 5, 5, 5, 5, 0, 1, 5, 5, 1, 0});
  const RetrievalCurves perfect = interpolated_curves(separated, labels);
  CHECK(perfect.map == 1.0);
  for (double v : perfect.precision) CHECK(v == 1.0);
  CHECK(perfect.f_measure[0] == 0.0);
  CHECK(perfect.f_measure[10] == 1.0);
  CHECK(perfect.recall[3] == doctest::Approx(0.3));

  // monotone transform leaves MAP unchanged
  std::vector<double> cubed = d.values();
  for (double& v : cubed) v = v * v * v;
  CHECK(map_score(DistanceMatrix(d.ids(), cubed), labels) == map_score(d, labels));
}

TEST_CASE("singleton categories are skipped") {
  const DistanceMatrix d({"a", "b", "c"}, {0, 1, 2, 1, 0, 3, 2, 3, 0});
  const RetrievalCurves c = interpolated_curves(d, {"x", "x", "y"});
  CHECK(c.queries == 2);
  CHECK(c.skipped == std::vector<std::string>{"c"});
  CHECK(c.map == 1.0);
}

TEST_CASE("curves are non-increasing, bounded and thread independent") {
  std::mt19937_64 rng(54);
  const DistanceMatrix d = random_integer_matrix(rng, 40, 1000);
  std::vector<std::string> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(std::to_string(i % 5));
  const RetrievalCurves c = interpolated_curves(d, labels, 1);
  for (std::size_t l = 1; l < kRecallLevels; ++l) CHECK(c.precision[l] <= c.precision[l - 1]);
  for (std::size_t l = 0; l < kRecallLevels; ++l) {
    CHECK(c.precision[l] >= 0.0);
    CHECK(c.precision[l] <= 1.0);
    CHECK(c.f_measure[l] <= 1.0);
  }
  CHECK(format_curves_csv(interpolated_curves(d, labels, 3)) == format_curves_csv(c));

  std::vector<double> scaled = d.values();
  for (double& v : scaled) v *= 3.0;
  CHECK(format_curves_csv(interpolated_curves(DistanceMatrix(d.ids(), scaled), labels)) == format_curves_csv(c));
}

TEST_CASE("report formats") {
  const std::string csv = format_curves_csv(interpolated_curves(abc(1, 2, 3), {"x", "x", "y"}));
  CHECK(csv.rfind("recall_level,avg_precision,avg_fmeasure\n0.0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  const std::string scores = format_scores(pair_scores(partition({"p", "q", "q"}), partition({"x", "x", "y"})));
  CHECK(scores.find("RI=0.333333") != std::string::npos);
}
