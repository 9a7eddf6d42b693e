#include "ousia/cutoff.hpp"

#include <cmath>
#include <limits>

#include "ousia/error.hpp"
#include "ousia/hht.hpp"
#include "ousia/util.hpp"

namespace ousia {

double imf_variance(std::span<const double> xs) {
  if (xs.empty()) raise(Errc::invalid_argument, "imf_variance: empty series");
  double sum = 0.0;
  for (double x : xs) sum += x * x;
  return sum / static_cast<double>(xs.size());
}

double NullEnsemble::first_imf_median() const {
  if (order_variances.empty() || order_variances[0].empty())
    raise(Errc::null_failed, "null ensemble has no first-IMF variances");
  return percentile(order_variances[0], 50.0);
}

double NullEnsemble::first_imf_p01() const {
  if (order_variances.empty() || order_variances[0].empty())
    raise(Errc::null_failed, "null ensemble has no first-IMF variances");
  return percentile(order_variances[0], 1.0);
}

NullEnsemble::Threshold NullEnsemble::imf_percentile(int order, double pct,
                                                     int min_support) const {
  if (order < 1) raise(Errc::invalid_argument, "imf_percentile: order must be >= 1");
  if (max_order() == 0)
    raise(Errc::null_failed, "null ensemble has no IMF variances at all");
  const std::size_t need = static_cast<std::size_t>(
      std::max(1, std::min(min_support, realizations_ok)));

  int use = std::min(order, max_order());
  while (use > 1 && order_variances[static_cast<std::size_t>(use - 1)].size() < need)
    --use;
  if (order_variances[static_cast<std::size_t>(use - 1)].size() < need && use == 1 &&
      order_variances[0].empty())
    raise(Errc::null_failed, "null ensemble has an empty first-order pool");

  Threshold t;
  t.order_used = use;
  t.fallback = use != order;
  t.value = percentile(order_variances[static_cast<std::size_t>(use - 1)], pct);
  return t;
}

double NullEnsemble::trend_percentile(double pct) const {
  if (trend_variances.empty())
    raise(Errc::null_failed, "null ensemble has no trend variances");
  return percentile(trend_variances, pct);
}

namespace {

struct RealizationOutcome {
  bool ok = false;
  std::vector<double> variances;  // per IMF order, uncentered
  std::vector<double> periods;    // per IMF order, NaN when undefined
  double trend_variance = 0.0;
};

}  // namespace

NullEnsemble build_null_resolved(const ResolvedTokens& resolved,
                                 const WindowConfig& cfg, Dimension dim,
                                 int realizations, std::uint64_t seed,
                                 const NullOptions& opts) {
  if (realizations < 1)
    raise(Errc::invalid_argument, "build_null: need at least one realization");
  cfg.validate();

  const double rate = 1.0 / static_cast<double>(cfg.skip);
  std::vector<RealizationOutcome> outcomes(static_cast<std::size_t>(realizations));

  parallel_for(static_cast<std::size_t>(realizations), [&](std::size_t k) {
    RealizationOutcome& res = outcomes[k];
    try {
      const auto perm = shuffle_permutation(resolved.size(), seed + k + 1);
      const ResolvedTokens shuffled = apply_permutation(resolved, perm);
      const OusioSeries series = window_scores_resolved(shuffled, cfg, dim);
      if (series.has_missing()) return;  // empty window: unusable realization
      const Decomposition d = emd(series.values, opts.emd);
      res.variances.reserve(d.imfs.size());
      for (const auto& imf : d.imfs) res.variances.push_back(imf_variance(imf.values));
      if (opts.compute_periods) {
        res.periods.reserve(d.imfs.size());
        for (const auto& imf : d.imfs) {
          double period = std::numeric_limits<double>::quiet_NaN();
          try {
            period = characteristic_period(imf.values, FrequencyBins::standard(), rate);
          } catch (const Error&) {
            // all-zero or out-of-range IMF: leave the period undefined
          }
          res.periods.push_back(period);
        }
      }
      res.trend_variance = centered_variance(d.residual);
      res.ok = true;
    } catch (const Error&) {
      // this realization is simply not counted
    }
  });

  NullEnsemble ensemble;
  ensemble.realizations_requested = realizations;
  for (const auto& res : outcomes) {
    if (!res.ok) continue;
    ++ensemble.realizations_ok;
    ensemble.realization_imf_counts.push_back(static_cast<int>(res.variances.size()));
    if (res.variances.size() > ensemble.order_variances.size()) {
      ensemble.order_variances.resize(res.variances.size());
      if (opts.compute_periods) ensemble.order_periods.resize(res.variances.size());
    }
    for (std::size_t o = 0; o < res.variances.size(); ++o) {
      ensemble.order_variances[o].push_back(res.variances[o]);
      if (opts.compute_periods) ensemble.order_periods[o].push_back(res.periods[o]);
    }
    ensemble.trend_variances.push_back(res.trend_variance);
  }

  const double need = opts.min_success * static_cast<double>(realizations);
  if (static_cast<double>(ensemble.realizations_ok) < need)
    raise(Errc::null_failed,
          "only " + std::to_string(ensemble.realizations_ok) + " of " +
              std::to_string(realizations) + " shuffled realizations were usable");
  return ensemble;
}

NullEnsemble build_null(const TokenSequence& tokens, const Lexicon& lex,
                        const WindowConfig& cfg, Dimension dim, int realizations,
                        std::uint64_t seed, const NullOptions& opts) {
  return build_null_resolved(resolve_tokens(tokens, lex), cfg, dim, realizations,
                             seed, opts);
}

double rescale_factor(double target_first_variance, const NullEnsemble& null_ensemble,
                      RescalingMode mode) {
  if (mode == RescalingMode::NoRescaling) return 1.0;
  if (target_first_variance == 0.0)
    raise(Errc::rescaling_undefined,
          "rescale: target first-IMF variance is zero; factor undefined");
  const double reference = mode == RescalingMode::MedianFirst
                               ? null_ensemble.first_imf_median()
                               : null_ensemble.first_imf_p01();
  return reference / target_first_variance;
}

std::vector<double> rescale(std::span<const double> target_variances,
                            const NullEnsemble& null_ensemble, RescalingMode mode) {
  if (target_variances.empty())
    raise(Errc::invalid_argument, "rescale: target has no IMF variances");
  const double factor = rescale_factor(target_variances[0], null_ensemble, mode);
  std::vector<double> out(target_variances.begin(), target_variances.end());
  for (double& v : out) v *= factor;
  return out;
}

CutoffResult detect_cutoff(const Decomposition& target,
                           const NullEnsemble& null_ensemble,
                           const CutoffOptions& opts) {
  if (opts.skip < 1) raise(Errc::invalid_argument, "detect_cutoff: skip must be >= 1");

  CutoffResult result;
  result.mode = opts.mode;
  result.period_words = std::numeric_limits<double>::quiet_NaN();
  result.variance = std::numeric_limits<double>::quiet_NaN();

  const int orders = target.order_count();
  if (orders == 0) return result;  // nothing but a trend: trivially trend_only

  std::vector<double> raw(static_cast<std::size_t>(orders));
  for (int o = 0; o < orders; ++o)
    raw[static_cast<std::size_t>(o)] = imf_variance(target.imfs[static_cast<std::size_t>(o)].values);
  const double factor = rescale_factor(raw[0], null_ensemble, opts.mode);

  const int first_order = opts.mode == RescalingMode::NoRescaling ? 2 : 1;
  for (int order = first_order; order <= orders; ++order) {
    const auto threshold =
        null_ensemble.imf_percentile(order, opts.percentile, opts.min_support);
    if (threshold.fallback) result.percentile_fallback = true;
    if (raw[static_cast<std::size_t>(order - 1)] * factor <= threshold.value) continue;

    result.trend_only = false;
    result.cutoff_order = order;
    result.variance = raw[static_cast<std::size_t>(order - 1)];
    try {
      result.period_words = characteristic_period(
          target.imfs[static_cast<std::size_t>(order - 1)].values,
          FrequencyBins::standard(), 1.0 / static_cast<double>(opts.skip));
    } catch (const Error&) {
      result.period_words = std::numeric_limits<double>::quiet_NaN();
    }
    if (opts.book_length > 0 && result.period_words > static_cast<double>(opts.book_length))
      result.period_exceeds_length = true;
    return result;
  }

  // Final scanned "order": the trend itself. Exceedance here means the trend
  // wanders more than shuffled trends do, but it is not a fluctuation.
  const double trend_var = centered_variance(target.residual) * factor;
  if (trend_var > null_ensemble.trend_percentile(opts.percentile))
    result.trend_exceeded = true;
  return result;
}

}  // namespace ousia
