#include "ousia/emd.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ousia/error.hpp"
#include "ousia/rng.hpp"
#include "ousia/util.hpp"

namespace ousia {

namespace {

// ===== natural cubic spline ==================================================

// Spline through (t_i, y_i) with zero second derivative at both ends,
// evaluated at the integer positions 0..n-1. Knot positions are strictly
// increasing and bracket [0, n-1] by construction (mirrored extrema).
// Second derivatives come from the standard tridiagonal system, solved with
// the Thomas algorithm.
std::vector<double> natural_spline_at_integers(const std::vector<double>& t,
                                               const std::vector<double>& y,
                                               std::size_t n) {
  const std::size_t m = t.size();
  std::vector<double> m2(m, 0.0);  // second derivatives at knots

  if (m > 2) {
    const std::size_t rows = m - 2;
    std::vector<double> diag(rows), upper(rows), rhs(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const double h0 = t[i + 1] - t[i];
      const double h1 = t[i + 2] - t[i + 1];
      diag[i] = 2.0 * (h0 + h1);
      upper[i] = h1;
      rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
    }
    // forward sweep (lower diagonal equals the previous row's upper)
    for (std::size_t i = 1; i < rows; ++i) {
      const double lower = t[i + 1] - t[i];
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m2[rows] = rhs[rows - 1] / diag[rows - 1];
    for (std::size_t i = rows - 1; i > 0; --i)
      m2[i] = (rhs[i - 1] - upper[i - 1] * m2[i + 1]) / diag[i - 1];
  }

  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pos = static_cast<double>(k);
    while (seg + 2 < m && t[seg + 1] < pos) ++seg;
    const double h = t[seg + 1] - t[seg];
    const double a = (t[seg + 1] - pos) / h;
    const double b = (pos - t[seg]) / h;
    out[k] = a * y[seg] + b * y[seg + 1] +
             ((a * a * a - a) * m2[seg] + (b * b * b - b) * m2[seg + 1]) * h * h / 6.0;
  }
  return out;
}

// Envelope through one set of extrema, extended by mirroring the two
// outermost extrema across each end sample before fitting.
std::vector<double> spline_envelope(const std::vector<std::size_t>& idx,
                                    const std::vector<double>& val, std::size_t n) {
  const std::size_t k = idx.size();
  const double last = static_cast<double>(n - 1);

  std::vector<double> t, y;
  t.reserve(k + 4);
  y.reserve(k + 4);
  t.push_back(-static_cast<double>(idx[1]));
  y.push_back(val[1]);
  t.push_back(-static_cast<double>(idx[0]));
  y.push_back(val[0]);
  for (std::size_t i = 0; i < k; ++i) {
    t.push_back(static_cast<double>(idx[i]));
    y.push_back(val[i]);
  }
  t.push_back(2.0 * last - static_cast<double>(idx[k - 1]));
  y.push_back(val[k - 1]);
  t.push_back(2.0 * last - static_cast<double>(idx[k - 2]));
  y.push_back(val[k - 2]);

  return natural_spline_at_integers(t, y, n);
}

bool all_zero(std::span<const double> x) {
  for (double v : x)
    if (v != 0.0) return false;
  return true;
}

}  // namespace

ExtremaSet find_extrema(std::span<const double> x) {
  if (x.size() < 3)
    raise(Errc::too_short, "find_extrema: need at least 3 samples");

  ExtremaSet set;
  // Compress equal-value runs so plateaus register once, at their midpoint.
  std::size_t run_begin = 0;
  double prev_value = x[0];
  bool have_prev = false;  // a run strictly before the current one exists
  double before = 0.0;     // value of that previous run

  const std::size_t n = x.size();
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && x[i] == prev_value) continue;
    // run [run_begin, i) of prev_value just ended
    const bool is_last_run = i == n;
    if (have_prev && !is_last_run) {
      const double after = x[i];
      const std::size_t mid = (run_begin + i - 1) / 2;
      if (prev_value > before && prev_value > after) {
        set.max_indices.push_back(mid);
        set.max_values.push_back(prev_value);
      } else if (prev_value < before && prev_value < after) {
        set.min_indices.push_back(mid);
        set.min_values.push_back(prev_value);
      }
    }
    if (i < n) {
      before = prev_value;
      have_prev = true;
      run_begin = i;
      prev_value = x[i];
    }
  }
  return set;
}

std::size_t count_zero_crossings(std::span<const double> x) {
  std::size_t count = 0;
  int prev_sign = 0;
  for (double v : x) {
    const int sign = (v > 0.0) - (v < 0.0);
    if (sign != 0) {
      if (prev_sign != 0 && sign != prev_sign) ++count;
      prev_sign = sign;
    }
  }
  return count;
}

bool imf_condition_a(std::span<const double> x) {
  if (x.size() < 3) return false;
  const ExtremaSet ex = find_extrema(x);
  const auto extrema =
      static_cast<long long>(ex.max_indices.size() + ex.min_indices.size());
  const auto crossings = static_cast<long long>(count_zero_crossings(x));
  return std::llabs(extrema - crossings) <= 1;
}

std::optional<std::vector<double>> envelope_mean(std::span<const double> x) {
  if (x.size() < 3) return std::nullopt;
  const ExtremaSet ex = find_extrema(x);
  if (ex.max_indices.size() < 2 || ex.min_indices.size() < 2) return std::nullopt;

  const std::vector<double> upper = spline_envelope(ex.max_indices, ex.max_values, x.size());
  const std::vector<double> lower = spline_envelope(ex.min_indices, ex.min_values, x.size());
  std::vector<double> mean(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mean[i] = 0.5 * (upper[i] + lower[i]);
  return mean;
}

SiftResult sift(std::span<const double> x, const EmdOptions& opts) {
  if (opts.max_sifts < 1) raise(Errc::invalid_argument, "sift: max_sifts must be >= 1");
  {
    if (x.size() < 3) raise(Errc::too_short, "sift: input too short");
    const ExtremaSet ex = find_extrema(x);
    if (ex.max_indices.size() < 2 || ex.min_indices.size() < 2)
      raise(Errc::invalid_argument, "sift: input needs >= 2 maxima and >= 2 minima");
  }

  SiftResult result;
  result.values.assign(x.begin(), x.end());
  std::vector<double>& h = result.values;

  for (int k = 1; k <= opts.max_sifts; ++k) {
    const auto mean = envelope_mean(h);
    if (!mean) {
      // Extrema vanished mid-sift; the current h is as close to an IMF as
      // this mode gets. Converged iff the count condition still holds.
      result.converged = imf_condition_a(h);
      return result;
    }
    double step_sq = 0.0, prev_sq = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double m = (*mean)[i];
      step_sq += m * m;
      prev_sq += h[i] * h[i];
      h[i] -= m;
    }
    result.sifts = k;
    const double sd = prev_sq > 0.0 ? step_sq / prev_sq : 0.0;
    if (sd < opts.sd_threshold && imf_condition_a(h)) return result;
  }
  result.converged = false;
  return result;
}

Decomposition emd(std::span<const double> x, const EmdOptions& opts) {
  if (x.size() < 8) raise(Errc::too_short, "emd: need at least 8 samples");

  Decomposition d;
  d.input_length = x.size();
  d.residual.assign(x.begin(), x.end());

  while (d.order_count() < opts.max_imfs) {
    const ExtremaSet ex = find_extrema(d.residual);
    if (ex.max_indices.size() < 2 || ex.min_indices.size() < 2) break;

    SiftResult s = sift(d.residual, opts);
    if (all_zero(s.values)) break;  // degenerate mode; avoid an empty loop

    for (std::size_t i = 0; i < d.residual.size(); ++i)
      d.residual[i] -= s.values[i];

    Imf imf;
    imf.values = std::move(s.values);
    imf.order = d.order_count() + 1;
    imf.sift_count = s.sifts;
    imf.converged = s.converged;
    d.imfs.push_back(std::move(imf));
  }
  return d;
}

Decomposition eemd(std::span<const double> x, const EemdConfig& cfg) {
  if (cfg.ensemble_size < 1)
    raise(Errc::invalid_argument, "eemd: ensemble_size must be >= 1");
  if (cfg.noise_ratio < 0.0)
    raise(Errc::invalid_argument, "eemd: noise_ratio must be >= 0");
  if (x.size() < 8) raise(Errc::too_short, "eemd: need at least 8 samples");

  const std::size_t n = x.size();
  const double sigma = population_std(x);
  const double noise_std = cfg.noise_ratio * sigma;
  const auto ensemble = static_cast<std::size_t>(cfg.ensemble_size);

  std::vector<Decomposition> members(ensemble);
  if (noise_std == 0.0) {
    // Zero noise makes every member identical; decompose once and reuse.
    members.assign(ensemble, emd(x, cfg.emd));
  } else {
    parallel_for(ensemble, [&](std::size_t j) {
      std::vector<double> noisy(x.begin(), x.end());
      Rng rng = Rng::keyed(cfg.seed, j);
      for (double& v : noisy) v += noise_std * rng.gaussian();
      members[j] = emd(noisy, cfg.emd);
    });
  }

  std::size_t max_orders = 0;
  for (const auto& m : members)
    max_orders = std::max(max_orders, m.imfs.size());

  Decomposition out;
  out.input_length = n;
  out.residual.assign(n, 0.0);
  out.imfs.resize(max_orders);
  for (std::size_t i = 0; i < max_orders; ++i) {
    out.imfs[i].values.assign(n, 0.0);
    out.imfs[i].order = static_cast<int>(i) + 1;
  }

  EnsembleInfo info;
  info.ensemble_size = cfg.ensemble_size;
  info.noise_ratio = cfg.noise_ratio;
  info.seed = cfg.seed;
  info.members_at_order.assign(max_orders, 0);
  info.unconverged_at_order.assign(max_orders, 0);

  // Reduce in member-index order: determinism down to floating-point bits.
  for (const auto& m : members) {
    for (std::size_t i = 0; i < m.imfs.size(); ++i) {
      const Imf& src = m.imfs[i];
      Imf& dst = out.imfs[i];
      for (std::size_t k = 0; k < n; ++k) dst.values[k] += src.values[k];
      ++info.members_at_order[i];
      if (!src.converged) ++info.unconverged_at_order[i];
      dst.sift_count = std::max(dst.sift_count, src.sift_count);
    }
    for (std::size_t k = 0; k < n; ++k) out.residual[k] += m.residual[k];
  }
  const double inv = 1.0 / static_cast<double>(ensemble);
  for (auto& imf : out.imfs)
    for (double& v : imf.values) v *= inv;
  for (double& v : out.residual) v *= inv;
  for (std::size_t i = 0; i < max_orders; ++i)
    out.imfs[i].converged = info.unconverged_at_order[i] == 0;

  // Success criterion: the mean of the summed output must stay within 10% of
  // the input mean, else the decomposition is rejected wholesale.
  std::vector<double> total = out.residual;
  for (const auto& imf : out.imfs)
    for (std::size_t k = 0; k < n; ++k) total[k] += imf.values[k];
  const double mean_in = mean_of(x);
  const double mean_out = mean_of(total);
  info.mean_error = std::abs(mean_out - mean_in);
  out.ensemble = info;
  if (info.mean_error > 0.10 * std::abs(mean_in))
    raise(Errc::decomposition_failed,
          "eemd: output mean " + format_g6(mean_out) + " deviates from input mean " +
              format_g6(mean_in) + " by more than 10%");
  return out;
}

std::vector<double> partial_reconstruction(const Decomposition& d, int from_order) {
  if (from_order < 1 || from_order > d.order_count() + 1)
    raise(Errc::invalid_argument,
          "partial_reconstruction: from_order " + std::to_string(from_order) +
              " outside [1, " + std::to_string(d.order_count() + 1) + "]");
  std::vector<double> sum = d.residual;
  for (const auto& imf : d.imfs) {
    if (imf.order < from_order) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += imf.values[i];
  }
  return sum;
}

void write_decomposition_csv(std::ostream& out, const Decomposition& d) {
  out << "window_index";
  for (const auto& imf : d.imfs) out << ",imf_" << imf.order;
  out << ",residual\n";
  for (std::size_t i = 0; i < d.input_length; ++i) {
    out << i;
    for (const auto& imf : d.imfs) out << ',' << format_g6(imf.values[i]);
    out << ',' << format_g6(d.residual[i]) << '\n';
  }
}

}  // namespace ousia
