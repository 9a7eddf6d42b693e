#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ousia/error.hpp"

namespace ousia {

// ===== numeric formatting ====================================================

// Every number the artifact emits (CSV cells, JSON values) goes through this:
// 6 significant digits, so outputs diff cleanly across runs and platforms.
inline std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Round-trip a double through the 6-significant-digit representation so the
// value stored in JSON matches the printed form exactly.
inline double snap_g6(double v) {
  return std::strtod(format_g6(v).c_str(), nullptr);
}

// ===== small statistics ======================================================

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) raise(Errc::invalid_argument, "mean_of: empty input");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Population variance about the mean.
inline double centered_variance(std::span<const double> xs) {
  const double mu = mean_of(xs);
  double sum = 0.0;
  for (double x : xs) sum += (x - mu) * (x - mu);
  return sum / static_cast<double>(xs.size());
}

inline double population_std(std::span<const double> xs) {
  return std::sqrt(centered_variance(xs));
}

// Percentile with linear interpolation between order statistics
// (the numpy default): rank h = (n-1)*p/100, value = x[floor(h)] plus the
// fractional part of h times the gap to the next order statistic.
inline double percentile(std::vector<double> xs, double p) {
  if (xs.empty()) raise(Errc::invalid_argument, "percentile: empty input");
  if (p < 0.0 || p > 100.0) raise(Errc::invalid_argument, "percentile: p outside [0,100]");
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * p / 100.0;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = h - static_cast<double>(lo);
  return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    raise(Errc::invalid_argument, "pearson_correlation: need two equal-length series");
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    raise(Errc::invalid_argument, "pearson_correlation: zero-variance input");
  return sab / std::sqrt(saa * sbb);
}

// ===== bounded parallelism ===================================================

// Global worker budget shared by all parallel sections. Defaults to the
// hardware thread count; the CLI's --threads flag overrides it.
int thread_budget();
void set_thread_budget(int n);

// Run fn(i) for i in [0, count). Work is split into contiguous chunks, one per
// worker; with a budget of 1 (or a single job) everything runs on the calling
// thread. Exceptions propagate to the caller (first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

// FNV-1a over bytes; used to fold identifiers into seed derivation.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// ===== tiny string/file helpers =============================================

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::vector<std::string> split_on(const std::string& line, char sep);
std::string trim_copy(const std::string& s);
std::string lower_ascii_copy(std::string s);

}  // namespace ousia
