#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zerofec/errors.hpp"
#include "zerofec/scoring.hpp"

namespace zerofec {

// One system output with its source text and gold rewrites.
struct EvalRecord {
  std::string input;
  std::string output;
  std::vector<std::string> references;
};

namespace detail {

// n-grams as '\x1f'-joined keys with fractional counts.
using SariCounts = std::unordered_map<std::string, double>;

inline SariCounts sari_ngrams(const std::vector<std::string>& toks,
                              std::size_t n) {
  SariCounts out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key = toks[i];
    for (std::size_t j = 1; j < n; ++j) {
      key.push_back('\x1f');
      key.append(toks[i + j]);
    }
    out[key] += 1.0;
  }
  return out;
}

inline double sari_total(const SariCounts& c) {
  double s = 0.0;
  for (const auto& [k, v] : c) s += v;
  return s;
}

inline SariCounts sari_min(const SariCounts& a, const SariCounts& b) {
  SariCounts out;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end()) continue;
    double m = std::min(v, it->second);
    if (m > 0.0) out[k] = m;
  }
  return out;
}

inline SariCounts sari_diff(const SariCounts& a, const SariCounts& b) {
  SariCounts out;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    double d = v - (it == b.end() ? 0.0 : it->second);
    if (d > 0.0) out[k] = d;
  }
  return out;
}

inline SariCounts sari_binary(const SariCounts& a) {
  SariCounts out;
  for (const auto& [k, v] : a)
    if (v > 0.0) out[k] = 1.0;
  return out;
}

// Empty-set conventions: both empty => P=R=1; one side empty => that
// side's measure is 0.
struct SariPR {
  double p;
  double r;

  double f1() const { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }
};

inline SariPR sari_pr(const SariCounts& sys, const SariCounts& ref) {
  double sys_total = sari_total(sys);
  double ref_total = sari_total(ref);
  if (sys_total == 0.0 && ref_total == 0.0) return {1.0, 1.0};
  double good = sari_total(sari_min(sys, ref));
  return {sys_total == 0.0 ? 0.0 : good / sys_total,
          ref_total == 0.0 ? 0.0 : good / ref_total};
}

}  // namespace detail

// Edit-aware rewrite quality in [0, 1]: mean over n in 1..max_n of KEEP
// F1, ADD F1 and DELETE precision, averaged across the three operations.
// KEEP and DELETE compare fractional reference counts (counts averaged
// over the references); ADD compares binary n-gram sets. Tokenization is
// the lowercase non-alphanumeric split without stemming.
inline double sari(const EvalRecord& rec, std::size_t max_n = 4) {
  if (rec.references.empty())
    throw InsufficientData("sari needs at least one reference");
  std::vector<std::string> in = tokenize_for_rouge(rec.input, false);
  std::vector<std::string> out = tokenize_for_rouge(rec.output, false);
  std::vector<std::vector<std::string>> refs;
  refs.reserve(rec.references.size());
  for (const std::string& r : rec.references)
    refs.push_back(tokenize_for_rouge(r, false));
  double keep = 0.0, add = 0.0, del = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    detail::SariCounts input_counts = detail::sari_ngrams(in, n);
    detail::SariCounts output_counts = detail::sari_ngrams(out, n);
    detail::SariCounts ref_avg;
    detail::SariCounts ref_union;
    for (const auto& r : refs) {
      for (const auto& [k, v] : detail::sari_ngrams(r, n)) {
        ref_avg[k] += v / static_cast<double>(refs.size());
        ref_union[k] = 1.0;
      }
    }
    keep += detail::sari_pr(detail::sari_min(input_counts, output_counts),
                            detail::sari_min(input_counts, ref_avg))
                .f1();
    detail::SariCounts input_set = detail::sari_binary(input_counts);
    add += detail::sari_pr(
               detail::sari_diff(detail::sari_binary(output_counts), input_set),
               detail::sari_diff(ref_union, input_set))
               .f1();
    del += detail::sari_pr(detail::sari_diff(input_counts, output_counts),
                           detail::sari_diff(input_counts, ref_avg))
               .p;
  }
  double m = static_cast<double>(max_n);
  return (keep / m + add / m + del / m) / 3.0;
}

// Mean of per-record SARI, reported as a percentage.
inline double corpus_sari(const std::vector<EvalRecord>& records,
                          std::size_t max_n = 4) {
  if (records.empty()) throw InsufficientData("no records to evaluate");
  double sum = 0.0;
  for (const EvalRecord& r : records) sum += sari(r, max_n);
  return 100.0 * sum / static_cast<double>(records.size());
}

namespace detail {

// Counts pairs i<j with v[i] > v[j] by merge sort. Equal elements merge
// from the left and are never counted.
inline std::uint64_t merge_count_inversions(std::vector<double>& v,
                                            std::vector<double>& buf,
                                            std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = merge_count_inversions(v, buf, lo, mid) +
                        merge_count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      count += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return count;
}

}  // namespace detail

// Tie-corrected rank correlation (tau-b) in O(n log n):
// (C - D) / sqrt((n0 - ties_x)(n0 - ties_y)). Ties are exact value
// equality. Throws DegenerateInput when either variable is constant.
inline double kendall_tau(const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size())
    throw LengthMismatch("rank vectors differ in length");
  std::size_t n = x.size();
  if (n < 2) throw DegenerateInput("need at least two observations");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });

  auto pairs_in_runs = [](auto begin, auto end, auto same) {
    std::uint64_t total = 0;
    auto it = begin;
    while (it != end) {
      auto run = it;
      std::uint64_t len = 0;
      while (run != end && same(*it, *run)) {
        ++run;
        ++len;
      }
      total += len * (len - 1) / 2;
      it = run;
    }
    return total;
  };

  std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::uint64_t ties_x = pairs_in_runs(
      order.begin(), order.end(),
      [&](std::size_t a, std::size_t b) { return x[a] == x[b]; });
  std::uint64_t ties_xy = pairs_in_runs(
      order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] == x[b] && y[a] == y[b];
      });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  std::vector<double> sorted_y = ys;
  std::sort(sorted_y.begin(), sorted_y.end());
  std::uint64_t ties_y =
      pairs_in_runs(sorted_y.begin(), sorted_y.end(),
                    [](double a, double b) { return a == b; });

  if (n0 == ties_x || n0 == ties_y)
    throw DegenerateInput("constant ranking has no defined correlation");

  std::vector<double> buf(n);
  std::uint64_t discordant = detail::merge_count_inversions(ys, buf, 0, n);
  std::int64_t non_tied = static_cast<std::int64_t>(n0) +
                          static_cast<std::int64_t>(ties_xy) -
                          static_cast<std::int64_t>(ties_x) -
                          static_cast<std::int64_t>(ties_y);
  std::int64_t concordant =
      non_tied - static_cast<std::int64_t>(discordant);
  double numerator = static_cast<double>(concordant) -
                     static_cast<double>(discordant);
  double denominator = std::sqrt(static_cast<double>(n0 - ties_x) *
                                 static_cast<double>(n0 - ties_y));
  return numerator / denominator;
}

// Nominal-level chance-corrected inter-rater agreement via the
// coincidence-matrix identity: alpha = 1 - (n-1) * sum_u (m_u^2 -
// sum_c n_uc^2)/(m_u - 1) / (n^2 - sum_c n_c^2). ratings[rater][item];
// items rated fewer than twice are dropped; a single pooled category
// (expected disagreement zero) scores 1.0 by convention.
inline double krippendorff_alpha(
    const std::vector<std::vector<std::optional<std::string>>>& ratings) {
  std::size_t n_items = ratings.empty() ? 0 : ratings[0].size();
  for (const auto& row : ratings)
    if (row.size() != n_items)
      throw LengthMismatch("ragged ratings matrix");
  std::map<std::string, double> category_totals;
  double n_total = 0.0;
  double observed_num = 0.0;
  std::size_t usable = 0;
  for (std::size_t item = 0; item < n_items; ++item) {
    std::map<std::string, double> unit;
    double m = 0.0;
    for (const auto& rater : ratings) {
      if (!rater[item].has_value()) continue;
      unit[*rater[item]] += 1.0;
      m += 1.0;
    }
    if (m < 2.0) continue;
    ++usable;
    double sum_sq = 0.0;
    for (const auto& [cat, cnt] : unit) {
      sum_sq += cnt * cnt;
      category_totals[cat] += cnt;
    }
    observed_num += (m * m - sum_sq) / (m - 1.0);
    n_total += m;
  }
  if (usable < 2)
    throw InsufficientData("need at least two items with two or more ratings");
  double pooled_sq = 0.0;
  for (const auto& [cat, cnt] : category_totals) pooled_sq += cnt * cnt;
  double expected_num = n_total * n_total - pooled_sq;
  if (expected_num == 0.0) return 1.0;
  return 1.0 - (n_total - 1.0) * observed_num / expected_num;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-resample seed derivation. Part of the determinism contract: resample
// r draws its indices from mt19937_64 seeded here, so p-values do not
// depend on how resamples are partitioned across workers.
inline std::uint64_t resample_seed(std::uint64_t seed, std::uint64_t r) {
  return splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (r + 1)));
}

// The exact index stream resample r consumes, exposed so independent
// reimplementations can replay it.
inline std::vector<std::size_t> bootstrap_resample_indices(std::uint64_t seed,
                                                           std::uint64_t r,
                                                           std::size_t n) {
  std::mt19937_64 eng(resample_seed(seed, r));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i)
    idx[i] = static_cast<std::size_t>(eng() % n);
  return idx;
}

// One-sided paired bootstrap for "system a beats system b". Returns the
// fraction of resampled mean deltas at or below zero; if the full-data
// delta is not positive the test is vacuous and p is exactly 1.0.
inline double paired_bootstrap(const std::vector<double>& a,
                               const std::vector<double>& b,
                               std::size_t n_resamples = 10000,
                               std::uint64_t seed = 0) {
  if (a.size() != b.size())
    throw LengthMismatch("paired score vectors differ in length");
  if (a.empty()) throw DegenerateInput("no paired scores");
  if (n_resamples == 0) throw ConfigError("need at least one resample");
  std::size_t n = a.size();
  std::vector<double> delta(n);
  double delta_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = a[i] - b[i];
    delta_sum += delta[i];
  }
  if (delta_sum / static_cast<double>(n) <= 0.0) return 1.0;
  std::size_t at_or_below = 0;
  for (std::uint64_t r = 0; r < n_resamples; ++r) {
    std::mt19937_64 eng(resample_seed(seed, r));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += delta[static_cast<std::size_t>(eng() % n)];
    if (s / static_cast<double>(n) <= 0.0) ++at_or_below;
  }
  return static_cast<double>(at_or_below) / static_cast<double>(n_resamples);
}

}  // namespace zerofec
