#pragma once

// Saturation analysis: how fast does a growing subsample stop revealing new
// categories? Discovery curves by seeded subsampling without replacement,
// a Good-Turing estimate of the unseen share, and a two-parameter
// exponential saturation fit.

#include "scover/csv.hpp"
#include "scover/error.hpp"
#include "scover/parallel.hpp"
#include "scover/rng.hpp"
#include "scover/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace scover {

struct SaturationCurve {
  std::vector<long> sample_sizes;    // increasing
  std::vector<double> mean_distinct; // aligned, each >= 1
  std::vector<double> stddev;        // aligned, population stddev over repetitions
  long repetitions = 0;
  std::uint64_t seed = 0;
};

struct CoverageEstimate {
  double estimate = 0.0; // 1 - singletons/total
  std::string method = "good_turing";
  long singletons = 0;
  long total = 0;
};

struct SaturationFit {
  double k_hat = 0.0;   // asymptote
  double tau_hat = 0.0; // rate
  double rmse = 0.0;
};

// Default grid: all sizes for tiny populations, otherwise 20 logarithmically
// spaced sizes from 10 up to and including N.
inline std::vector<long> default_size_grid(long n) {
  std::vector<long> sizes;
  if (n <= 0) return sizes;
  if (n <= 20) {
    for (long i = 1; i <= n; ++i) sizes.push_back(i);
    return sizes;
  }
  const int points = 20;
  double lo = std::log(10.0), hi = std::log(static_cast<double>(n));
  for (int i = 0; i < points; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    sizes.push_back(static_cast<long>(std::llround(std::exp(t))));
  }
  sizes.back() = n;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

// Mean/stddev of the distinct-category count among `size` draws without
// replacement, repeated `repetitions` times per size. Labels are sorted
// first so the curve depends only on the multiset; every (size, repetition)
// pair owns its own generator stream, making serial and parallel runs
// byte-identical.
inline SaturationCurve discovery_curve(const std::vector<std::string>& labels,
                                       const std::vector<long>& sizes, long repetitions,
                                       std::uint64_t seed, int threads = 1) {
  if (labels.empty()) throw Error("discovery_curve: empty label list");
  if (repetitions < 1) throw Error("discovery_curve: repetitions must be >= 1");
  const long n = static_cast<long>(labels.size());
  for (long s : sizes)
    if (s < 1 || s > n)
      throw Error("discovery_curve: size " + std::to_string(s) + " outside [1, " +
                  std::to_string(n) + "]");
  for (const auto& l : labels)
    if (l.empty()) throw Error("discovery_curve: empty label");

  // canonical order, then map to dense integer codes for cheap counting
  std::vector<std::string> sorted_labels = labels;
  std::sort(sorted_labels.begin(), sorted_labels.end());
  std::vector<int> codes(sorted_labels.size());
  int n_codes = 0;
  for (size_t i = 0; i < sorted_labels.size(); ++i) {
    if (i > 0 && sorted_labels[i] == sorted_labels[i - 1]) codes[i] = codes[i - 1];
    else codes[i] = n_codes++;
  }

  SaturationCurve curve;
  curve.sample_sizes = sizes;
  curve.repetitions = repetitions;
  curve.seed = seed;
  curve.mean_distinct.resize(sizes.size(), 0.0);
  curve.stddev.resize(sizes.size(), 0.0);

  std::vector<std::vector<double>> distinct(sizes.size());
  for (auto& v : distinct) v.resize(static_cast<size_t>(repetitions));

  const size_t jobs = sizes.size() * static_cast<size_t>(repetitions);
  parallel_for(jobs, threads, [&](size_t job) {
    size_t size_idx = job / static_cast<size_t>(repetitions);
    size_t rep = job % static_cast<size_t>(repetitions);
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(size_idx),
                        static_cast<std::uint64_t>(rep)));
    auto picked = sample_indices(rng, static_cast<std::uint32_t>(labels.size()),
                                 static_cast<std::uint32_t>(sizes[size_idx]));
    std::vector<char> seen(static_cast<size_t>(n_codes), 0);
    int d = 0;
    for (size_t idx : picked) {
      char& flag = seen[static_cast<size_t>(codes[idx])];
      if (!flag) { flag = 1; ++d; }
    }
    distinct[size_idx][rep] = static_cast<double>(d);
  });

  for (size_t i = 0; i < sizes.size(); ++i) {
    double sum = 0.0;
    for (double d : distinct[i]) sum += d;
    double mean = sum / static_cast<double>(repetitions);
    double var = 0.0;
    for (double d : distinct[i]) var += (d - mean) * (d - mean);
    var /= static_cast<double>(repetitions);
    curve.mean_distinct[i] = mean;
    curve.stddev[i] = std::sqrt(var);
  }
  return curve;
}

// Good-Turing missing-mass complement: the probability that one more draw
// shows a known category, estimated as 1 - singletons/N.
inline CoverageEstimate good_turing_coverage(const std::vector<std::string>& labels) {
  if (labels.empty()) throw Error("good_turing_coverage: empty label list");
  std::map<std::string, long> counts;
  for (const auto& l : labels) ++counts[l];
  CoverageEstimate est;
  est.total = static_cast<long>(labels.size());
  for (const auto& [label, c] : counts)
    if (c == 1) ++est.singletons;
  est.estimate = 1.0 - static_cast<double>(est.singletons) / static_cast<double>(est.total);
  return est;
}

namespace detail {

inline double curve_rmse(const SaturationCurve& curve, double k, double tau) {
  double ss = 0.0;
  for (size_t i = 0; i < curve.sample_sizes.size(); ++i) {
    double model = k * (1.0 - std::exp(-static_cast<double>(curve.sample_sizes[i]) / tau));
    double r = curve.mean_distinct[i] - model;
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(curve.sample_sizes.size()));
}

} // namespace detail

// Least-squares fit of c(n) = K (1 - exp(-n / tau)) by a logarithmic grid
// search refined locally. Deterministic. For curves that are already flat,
// tau is unidentifiable and settles on the smallest grid value (0.01).
inline SaturationFit fit_saturation(const SaturationCurve& curve) {
  if (curve.sample_sizes.size() < 3)
    throw Error("fit_saturation: need at least 3 curve points");

  double max_mean = 0.0;
  for (double m : curve.mean_distinct) max_mean = std::max(max_mean, m);
  if (max_mean <= 0.0) throw Error("fit_saturation: curve has no positive values");

  const double k_lo = 0.5 * max_mean, k_hi = 4.0 * max_mean;
  const double tau_lo = 0.01;
  const double tau_hi = 10.0 * static_cast<double>(curve.sample_sizes.back());
  const int grid = 60;

  auto log_grid_value = [](double lo, double hi, int i, int points) {
    double t = static_cast<double>(i) / (points - 1);
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * t);
  };

  double best_k = k_lo, best_tau = tau_lo, best = -1.0;
  for (int i = 0; i < grid; ++i) {
    double k = log_grid_value(k_lo, k_hi, i, grid);
    for (int j = 0; j < grid; ++j) {
      double tau = log_grid_value(tau_lo, tau_hi, j, grid);
      double r = detail::curve_rmse(curve, k, tau);
      if (best < 0.0 || r < best) { best = r; best_k = k; best_tau = tau; }
    }
  }

  // local refinement: shrink a multiplicative window around the best cell,
  // clamped to the outer grid bounds
  double span = std::pow(k_hi / k_lo, 1.0 / (grid - 1)) * 2.0;
  for (int round = 0; round < 40; ++round) {
    const int local = 11;
    double klo = std::max(k_lo, best_k / span), khi = std::min(k_hi, best_k * span);
    double tlo = std::max(tau_lo, best_tau / span), thi = std::min(tau_hi, best_tau * span);
    for (int i = 0; i < local; ++i) {
      double k = log_grid_value(klo, khi, i, local);
      for (int j = 0; j < local; ++j) {
        double tau = log_grid_value(tlo, thi, j, local);
        double r = detail::curve_rmse(curve, k, tau);
        if (r < best) { best = r; best_k = k; best_tau = tau; }
      }
    }
    span = std::max(1.0 + (span - 1.0) * 0.6, 1.0 + 1e-12);
  }

  SaturationFit fit;
  fit.k_hat = best_k;
  fit.tau_hat = best_tau;
  fit.rmse = best;
  return fit;
}

// Bins values at floor(value / bin_width) and measures bin discovery.
inline SaturationCurve parameter_saturation(const std::vector<double>& values, double bin_width,
                                            const std::vector<long>& sizes, long repetitions,
                                            std::uint64_t seed, int threads = 1) {
  if (values.empty()) throw Error("parameter_saturation: empty value list");
  if (!(bin_width > 0.0)) throw Error("parameter_saturation: bin_width must be positive");
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (double v : values) {
    if (!std::isfinite(v)) throw Error("parameter_saturation: non-finite value");
    labels.push_back(std::to_string(static_cast<long long>(std::floor(v / bin_width))));
  }
  return discovery_curve(labels, sizes, repetitions, seed, threads);
}

// -----------------------------
// exports
// -----------------------------

inline std::string export_curve_csv(const SaturationCurve& curve) {
  CsvWriter w({"n", "mean_distinct", "stddev"});
  w.comment("seed=" + std::to_string(curve.seed) +
            " repetitions=" + std::to_string(curve.repetitions));
  for (size_t i = 0; i < curve.sample_sizes.size(); ++i)
    w.row({std::to_string(curve.sample_sizes[i]), fmt_double(curve.mean_distinct[i]),
           fmt_double(curve.stddev[i])});
  return w.render();
}

inline std::string export_coverage_csv(const CoverageEstimate& est) {
  CsvWriter w({"estimate", "method", "singletons", "total"});
  w.row({fmt_double(est.estimate), est.method, std::to_string(est.singletons),
         std::to_string(est.total)});
  return w.render();
}

inline std::string export_fit_csv(const SaturationFit& fit) {
  CsvWriter w({"k_hat", "tau_hat", "rmse"});
  w.row({fmt_double(fit.k_hat), fmt_double(fit.tau_hat), fmt_double(fit.rmse)});
  return w.render();
}

} // namespace scover
