#include <catch2/catch_amalgamated.hpp>

#include "scover/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace scover;

namespace {

// Exact expected distinct-category count for a uniform draw of `n` items
// without replacement, by enumerating every subset of indices. Only viable
// for tiny populations, which is the point: it shares no code with the
// sampler under test.
double exhaustive_expected_distinct(const std::vector<std::string>& labels, int n) {
  const int N = static_cast<int>(labels.size());
  double sum = 0.0;
  long count = 0;
  for (unsigned mask = 0; mask < (1u << N); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    std::set<std::string> seen;
    for (int i = 0; i < N; ++i)
      if (mask & (1u << i)) seen.insert(labels[static_cast<size_t>(i)]);
    sum += static_cast<double>(seen.size());
    ++count;
  }
  return sum / static_cast<double>(count);
}

long direct_singletons(const std::vector<std::string>& labels) {
  std::map<std::string, long> counts;
  for (const auto& l : labels) ++counts[l];
  long s = 0;
  for (const auto& [l, c] : counts)
    if (c == 1) ++s;
  return s;
}

} // namespace

TEST_CASE("discovery curve endpoints are exact") {
  std::vector<std::string> labels = {"a", "a", "b", "c", "c", "c", "d"};
  auto curve = discovery_curve(labels, {1, 7}, 500, 99);

  // one draw always finds one category; a full draw always finds all four
  CHECK(curve.mean_distinct[0] == 1.0);
  CHECK(curve.stddev[0] == 0.0);
  CHECK(curve.mean_distinct[1] == 4.0);
  CHECK(curve.stddev[1] == 0.0);
  CHECK(curve.repetitions == 500);
  CHECK(curve.seed == 99);
}

TEST_CASE("discovery curve means match exhaustive subset enumeration") {
  // small enough to enumerate all subsets, uneven enough to be interesting
  std::vector<std::string> labels = {"x", "x", "x", "y", "y", "z", "w", "x"};
  const long reps = 20000;
  auto curve = discovery_curve(labels, {2, 3, 4, 5, 6}, reps, 7);

  for (size_t i = 0; i < curve.sample_sizes.size(); ++i) {
    double expected =
        exhaustive_expected_distinct(labels, static_cast<int>(curve.sample_sizes[i]));
    INFO("n = " << curve.sample_sizes[i]);
    // standard error of the mean is stddev/sqrt(reps) < 0.01 here
    CHECK(curve.mean_distinct[i] == Catch::Approx(expected).margin(0.05));
  }
}

TEST_CASE("discovery curve depends only on the label multiset") {
  std::vector<std::string> labels;
  std::mt19937 rng(5);
  const char* pool[] = {"car", "truck", "bike", "ped", "tram"};
  for (int i = 0; i < 200; ++i) labels.push_back(pool[rng() % 5]);

  auto curve = discovery_curve(labels, {10, 50, 200}, 300, 42);

  std::vector<std::string> shuffled = labels;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto curve2 = discovery_curve(shuffled, {10, 50, 200}, 300, 42);

  CHECK(curve.mean_distinct == curve2.mean_distinct);
  CHECK(curve.stddev == curve2.stddev);
}

TEST_CASE("serial and parallel runs are identical") {
  std::vector<std::string> labels;
  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) labels.push_back("c" + std::to_string(rng() % 37));

  auto sizes = default_size_grid(static_cast<long>(labels.size()));
  auto serial = discovery_curve(labels, sizes, 100, 123, 1);
  auto parallel = discovery_curve(labels, sizes, 100, 123, 8);

  CHECK(serial.mean_distinct == parallel.mean_distinct);
  CHECK(serial.stddev == parallel.stddev);
  CHECK(export_curve_csv(serial) == export_curve_csv(parallel));
}

TEST_CASE("discovery curve input validation") {
  std::vector<std::string> labels = {"a", "b"};
  CHECK_THROWS_WITH(discovery_curve({}, {1}, 10, 0),
                    Catch::Matchers::ContainsSubstring("empty label list"));
  CHECK_THROWS_WITH(discovery_curve(labels, {1}, 0, 0),
                    Catch::Matchers::ContainsSubstring("repetitions"));
  CHECK_THROWS_WITH(discovery_curve(labels, {0}, 10, 0),
                    Catch::Matchers::ContainsSubstring("outside [1, 2]"));
  CHECK_THROWS_WITH(discovery_curve(labels, {3}, 10, 0),
                    Catch::Matchers::ContainsSubstring("outside [1, 2]"));
  CHECK_THROWS_WITH(discovery_curve({"a", ""}, {1}, 10, 0),
                    Catch::Matchers::ContainsSubstring("empty label"));
}

TEST_CASE("good-turing estimate matches a direct count") {
  SECTION("hand cases") {
    // every label unique: everything is a singleton, estimate 0
    auto all_new = good_turing_coverage({"a", "b", "c", "d"});
    CHECK(all_new.estimate == 0.0);
    CHECK(all_new.singletons == 4);
    CHECK(all_new.total == 4);

    // no singletons: estimate 1
    auto saturated = good_turing_coverage({"a", "a", "b", "b", "b"});
    CHECK(saturated.estimate == 1.0);
    CHECK(saturated.singletons == 0);

    // mixed: 2 singletons of 6 draws
    auto mixed = good_turing_coverage({"a", "a", "b", "c", "d", "d"});
    CHECK(mixed.singletons == 2);
    CHECK(mixed.estimate == Catch::Approx(1.0 - 2.0 / 6.0));
    CHECK(mixed.method == "good_turing");
  }
  SECTION("random multisets") {
    std::mt19937 rng(21);
    for (int iter = 0; iter < 100; ++iter) {
      std::vector<std::string> labels;
      int n = 1 + static_cast<int>(rng() % 60);
      for (int i = 0; i < n; ++i) labels.push_back("l" + std::to_string(rng() % 20));
      auto est = good_turing_coverage(labels);
      long s = direct_singletons(labels);
      CHECK(est.singletons == s);
      CHECK(est.total == n);
      CHECK(est.estimate == Catch::Approx(1.0 - static_cast<double>(s) / n));
    }
  }
  SECTION("empty input rejected") {
    CHECK_THROWS_WITH(good_turing_coverage({}),
                      Catch::Matchers::ContainsSubstring("empty label list"));
  }
}

TEST_CASE("saturation fit recovers known parameters") {
  SECTION("points generated from the model") {
    const double K = 8.0, tau = 40.0;
    SaturationCurve curve;
    for (long n : {5L, 10L, 20L, 40L, 80L, 160L, 320L}) {
      curve.sample_sizes.push_back(n);
      curve.mean_distinct.push_back(K * (1.0 - std::exp(-static_cast<double>(n) / tau)));
      curve.stddev.push_back(0.0);
    }
    auto fit = fit_saturation(curve);
    CHECK(fit.k_hat == Catch::Approx(K).epsilon(0.01));
    CHECK(fit.tau_hat == Catch::Approx(tau).epsilon(0.05));
    CHECK(fit.rmse < 0.01);
  }
  SECTION("flat curve pins the asymptote") {
    SaturationCurve curve;
    for (long n : {10L, 100L, 1000L}) {
      curve.sample_sizes.push_back(n);
      curve.mean_distinct.push_back(6.0);
      curve.stddev.push_back(0.0);
    }
    auto fit = fit_saturation(curve);
    CHECK(fit.k_hat == Catch::Approx(6.0).epsilon(0.01));
    CHECK(fit.rmse < 0.05);
  }
  SECTION("noisy curve still lands close") {
    const double K = 12.0, tau = 25.0;
    std::mt19937 rng(3);
    std::normal_distribution<double> noise(0.0, 0.05);
    SaturationCurve curve;
    for (long n : {4L, 8L, 16L, 32L, 64L, 128L, 256L}) {
      curve.sample_sizes.push_back(n);
      curve.mean_distinct.push_back(
          K * (1.0 - std::exp(-static_cast<double>(n) / tau)) + noise(rng));
      curve.stddev.push_back(0.0);
    }
    auto fit = fit_saturation(curve);
    CHECK(fit.k_hat == Catch::Approx(K).epsilon(0.05));
    CHECK(fit.tau_hat == Catch::Approx(tau).epsilon(0.15));
  }
  SECTION("input validation") {
    SaturationCurve two;
    two.sample_sizes = {1, 2};
    two.mean_distinct = {1.0, 1.5};
    two.stddev = {0, 0};
    CHECK_THROWS_WITH(fit_saturation(two),
                      Catch::Matchers::ContainsSubstring("at least 3"));
  }
}

TEST_CASE("default size grid") {
  CHECK(default_size_grid(0).empty());
  CHECK(default_size_grid(1) == std::vector<long>{1});
  CHECK(default_size_grid(20) ==
        std::vector<long>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                          11, 12, 13, 14, 15, 16, 17, 18, 19, 20});

  for (long n : {21L, 100L, 1000L, 250000L}) {
    auto grid = default_size_grid(n);
    INFO("n = " << n);
    CHECK(grid.size() <= 20);
    CHECK(grid.front() == 10);
    CHECK(grid.back() == n);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
    for (long s : grid) {
      CHECK(s >= 10);
      CHECK(s <= n);
    }
  }
}

TEST_CASE("parameter saturation bins before measuring discovery") {
  std::vector<double> values = {0.1, 0.2, 0.7, 1.3, 1.4, 2.9};
  // floor(v / 0.5): 0 0 1 2 2 5
  auto curve = parameter_saturation(values, 0.5, {1, 3, 6}, 400, 17);
  auto same = discovery_curve({"0", "0", "1", "2", "2", "5"}, {1, 3, 6}, 400, 17);
  CHECK(curve.mean_distinct == same.mean_distinct);
  CHECK(curve.stddev == same.stddev);
  CHECK(curve.mean_distinct[2] == 4.0); // full draw sees all four bins

  SECTION("negative values land in their own bins") {
    // floor(-0.1 / 1.0) = -1, distinct from bin 0
    auto c = parameter_saturation({-0.1, 0.1}, 1.0, {2}, 50, 0);
    CHECK(c.mean_distinct[0] == 2.0);
  }
  SECTION("input validation") {
    CHECK_THROWS_WITH(parameter_saturation({}, 0.5, {1}, 10, 0),
                      Catch::Matchers::ContainsSubstring("empty value list"));
    CHECK_THROWS_WITH(parameter_saturation({1.0}, 0.0, {1}, 10, 0),
                      Catch::Matchers::ContainsSubstring("bin_width"));
    CHECK_THROWS_WITH(parameter_saturation({std::nan("")}, 1.0, {1}, 10, 0),
                      Catch::Matchers::ContainsSubstring("non-finite"));
  }
}

TEST_CASE("coverage exports") {
  SaturationCurve curve;
  curve.sample_sizes = {2, 4};
  curve.mean_distinct = {1.5, 2.0};
  curve.stddev = {0.5, 0.0};
  curve.repetitions = 10;
  curve.seed = 3;
  CHECK(export_curve_csv(curve) ==
        "# seed=3 repetitions=10\n"
        "n,mean_distinct,stddev\n"
        "2,1.5,0.5\n"
        "4,2,0\n");

  CoverageEstimate est;
  est.estimate = 0.75;
  est.singletons = 2;
  est.total = 8;
  CHECK(export_coverage_csv(est) ==
        "estimate,method,singletons,total\n"
        "0.75,good_turing,2,8\n");

  SaturationFit fit{5.25, 12.5, 0.001};
  CHECK(export_fit_csv(fit) ==
        "k_hat,tau_hat,rmse\n"
        "5.25,12.5,0.001\n");
}
