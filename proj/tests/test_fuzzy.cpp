#include <cmath>

#include "doctest.h"
#include "fpc/fuzzy.hpp"
#include "fpc/rng.hpp"

using namespace fpc;

namespace {

std::vector<std::pair<ClassLabel, double>> ranked_of(double a, double l, double r, double w) {
  std::vector<std::pair<ClassLabel, double>> out{{ClassLabel::A, a}, {ClassLabel::L, l},
                                                 {ClassLabel::R, r}, {ClassLabel::W, w}};
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  return out;
}

// Random softmax-style decisions with known labels.
void random_decisions(int n, std::uint64_t seed, std::vector<FuzzyDecision>& decisions,
                      std::vector<ClassLabel>& labels) {
  Rng rng(seed);
  decisions.clear();
  labels.clear();
  for (int i = 0; i < n; ++i) {
    double p[4];
    double sum = 0.0;
    for (double& v : p) {
      v = std::exp(rng.uniform(0.0, 3.0));
      sum += v;
    }
    for (double& v : p) v /= sum;
    decisions.push_back(fuzzy_classify(ranked_of(p[0], p[1], p[2], p[3]), 0.6));
    labels.push_back(static_cast<ClassLabel>(rng.next_u64() % 4));
  }
}

double top1(const std::vector<FuzzyDecision>& ds, const std::vector<ClassLabel>& ls) {
  int ok = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) ok += ds[i].primary == ls[i];
  return static_cast<double>(ok) / static_cast<double>(ds.size());
}

double top2(const std::vector<FuzzyDecision>& ds, const std::vector<ClassLabel>& ls) {
  int ok = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    ok += ds[i].ranked[0].first == ls[i] || ds[i].ranked[1].first == ls[i];
  return static_cast<double>(ok) / static_cast<double>(ds.size());
}

}  // namespace

TEST_CASE("fuzzy_classify: confident sample keeps only the primary class") {
  FuzzyDecision d = fuzzy_classify(ranked_of(0.9, 0.05, 0.03, 0.02), 0.6);
  CHECK(d.primary == ClassLabel::A);
  CHECK_FALSE(d.secondary.has_value());
  CHECK(d.fp() == 0.9);
  CHECK(d.sp() == 0.05);
  CHECK(d.tp() == 0.03);
}

TEST_CASE("fuzzy_classify: below-threshold sample gains a secondary class") {
  FuzzyDecision d = fuzzy_classify(ranked_of(0.55, 0.30, 0.10, 0.05), 0.6);
  CHECK(d.primary == ClassLabel::A);
  REQUIRE(d.secondary.has_value());
  CHECK(*d.secondary == ClassLabel::L);
}

TEST_CASE("fuzzy_classify: threshold 1 always assigns a secondary class") {
  FuzzyDecision d = fuzzy_classify(ranked_of(0.97, 0.01, 0.01, 0.01), 1.0);
  CHECK(d.secondary.has_value());
}

TEST_CASE("fuzzy_classify: invalid thresholds and rankings are rejected") {
  auto ranked = ranked_of(0.7, 0.1, 0.1, 0.1);
  CHECK_THROWS_AS(fuzzy_classify(ranked, -0.01), Error);
  CHECK_THROWS_AS(fuzzy_classify(ranked, 1.01), Error);

  auto ascending = ranked_of(0.7, 0.1, 0.1, 0.1);
  std::swap(ascending[0], ascending[3]);
  CHECK_THROWS_AS(fuzzy_classify(ascending, 0.5), Error);
}

TEST_CASE("rescue_condition: flags low top-two mass") {
  // Ranked output of a hard sample: top two sum to 0.7187.
  FuzzyDecision d = fuzzy_classify(ranked_of(0.4873, 0.2314, 0.1586, 0.1226), 0.6);
  CHECK(rescue_condition(d, 0.8));

  FuzzyDecision confident = fuzzy_classify(ranked_of(0.8, 0.15, 0.03, 0.02), 0.6);
  CHECK_FALSE(rescue_condition(confident, 0.8));  // 0.95 >= 0.8

  CHECK_FALSE(rescue_condition(d, 0.0));  // nothing is below zero
}

TEST_CASE("reject_lowest: fraction 0 rejects nothing") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;
  random_decisions(50, 1, ds, ls);
  reject_lowest(ds, 0.0);
  for (const FuzzyDecision& d : ds) CHECK_FALSE(d.rejected);
}

TEST_CASE("reject_lowest: 1.8% of 2000 rejects exactly 36, the lowest-fp ones") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;
  random_decisions(2000, 2, ds, ls);
  reject_lowest(ds, 0.018);

  int rejected = 0;
  double max_rejected_fp = -1.0, min_kept_fp = 2.0;
  for (const FuzzyDecision& d : ds) {
    if (d.rejected) {
      ++rejected;
      max_rejected_fp = std::max(max_rejected_fp, d.fp());
    } else {
      min_kept_fp = std::min(min_kept_fp, d.fp());
    }
  }
  CHECK(rejected == 36);
  CHECK(max_rejected_fp <= min_kept_fp);
}

TEST_CASE("reject_lowest: equal confidences break ties by input order") {
  std::vector<FuzzyDecision> ds(10, fuzzy_classify(ranked_of(0.4, 0.3, 0.2, 0.1), 0.6));
  reject_lowest(ds, 0.25);  // ceil(2.5) = 3
  for (int i = 0; i < 10; ++i) CHECK(ds[i].rejected == (i < 3));
}

TEST_CASE("reject_lowest: fraction outside [0,1) is rejected") {
  std::vector<FuzzyDecision> ds(3, fuzzy_classify(ranked_of(0.4, 0.3, 0.2, 0.1), 0.6));
  CHECK_THROWS_AS(reject_lowest(ds, 1.0), Error);
  CHECK_THROWS_AS(reject_lowest(ds, -0.1), Error);
}

TEST_CASE("sweep: boundary identities and monotonicity") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;
  random_decisions(400, 3, ds, ls);

  std::vector<double> thresholds{0.0, 0.3, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0};
  std::vector<SweepRow> rows = sweep(ds, ls, thresholds);
  REQUIRE(rows.size() == thresholds.size());

  CHECK(rows.front().acc_fuzzy == top1(ds, ls));
  CHECK(rows.back().acc_fuzzy == top2(ds, ls));

  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].first_correct_below + rows[i].first_wrong_below == rows[i].n_below);
    CHECK(rows[i].n_considered == 400 + rows[i].n_below);
    if (i > 0) {
      CHECK(rows[i].acc_fuzzy >= rows[i - 1].acc_fuzzy);
      CHECK(rows[i].n_below >= rows[i - 1].n_below);
    }
  }
}

TEST_CASE("sweep: a perfect classifier scores 1 at every threshold") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;
  for (int i = 0; i < 40; ++i) {
    const auto cls = static_cast<ClassLabel>(i % 4);
    double p[4] = {0.05, 0.05, 0.05, 0.05};
    p[i % 4] = 0.85;
    ds.push_back(fuzzy_classify(ranked_of(p[0], p[1], p[2], p[3]), 0.6));
    ls.push_back(cls);
  }
  std::vector<double> thresholds{0.0, 0.5, 0.9, 1.0};
  for (const SweepRow& row : sweep(ds, ls, thresholds)) CHECK(row.acc_fuzzy == 1.0);
}

TEST_CASE("sweep: mismatched lengths error") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;
  random_decisions(5, 4, ds, ls);
  ls.pop_back();
  std::vector<double> thresholds{0.5};
  CHECK_THROWS_AS(sweep(ds, ls, thresholds), DimError);
}

TEST_CASE("recall_rate: counts below-threshold samples whose third class is right") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;

  // fp+sp = 0.7 < 0.8, third-ranked class is correct -> recalled.
  ds.push_back(fuzzy_classify(ranked_of(0.40, 0.30, 0.20, 0.10), 0.6));
  ls.push_back(ClassLabel::R);
  // fp+sp = 0.7 < 0.8 but third class wrong.
  ds.push_back(fuzzy_classify(ranked_of(0.40, 0.30, 0.20, 0.10), 0.6));
  ls.push_back(ClassLabel::W);
  // fp+sp = 0.9 >= 0.8, not counted at all.
  ds.push_back(fuzzy_classify(ranked_of(0.60, 0.30, 0.06, 0.04), 0.6));
  ls.push_back(ClassLabel::R);

  auto [num, recall] = recall_rate(ds, ls, 0.8);
  CHECK(num == 2);
  CHECK(recall == doctest::Approx(0.5));
}

TEST_CASE("recall_rate: empty input reports zero") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;
  auto [num, recall] = recall_rate(ds, ls, 0.8);
  CHECK(num == 0);
  CHECK(recall == 0.0);
}

TEST_CASE("sweep_to_tsv: one header plus one line per row") {
  std::vector<FuzzyDecision> ds;
  std::vector<ClassLabel> ls;
  random_decisions(10, 5, ds, ls);
  std::vector<double> thresholds{0.5, 0.9};
  std::string tsv = sweep_to_tsv(sweep(ds, ls, thresholds));
  CHECK(tsv.find("threshold\tn_below") == 0);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 3);
}
