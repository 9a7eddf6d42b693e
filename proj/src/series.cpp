#include "ousia/series.hpp"

#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>

#include "ousia/error.hpp"
#include "ousia/rng.hpp"
#include "ousia/util.hpp"

namespace ousia {

void WindowConfig::validate() const {
  if (window_size < 1) raise(Errc::invalid_argument, "window_size must be >= 1");
  if (skip < 1) raise(Errc::invalid_argument, "skip must be >= 1");
}

bool OusioSeries::has_missing() const {
  for (double v : values)
    if (std::isnan(v)) return true;
  return false;
}

std::vector<bool> OusioSeries::hit_flags() const {
  std::vector<bool> flags(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) flags[i] = !std::isnan(values[i]);
  return flags;
}

std::size_t window_count(std::size_t token_count, const WindowConfig& cfg) {
  cfg.validate();
  const auto w = static_cast<std::size_t>(cfg.window_size);
  if (token_count < w) return 0;
  return (token_count - w) / static_cast<std::size_t>(cfg.skip) + 1;
}

ResolvedTokens resolve_tokens(const TokenSequence& tokens, const Lexicon& lex) {
  ResolvedTokens r;
  r.source_id = tokens.source_id;
  const std::size_t n = tokens.tokens.size();
  r.power.resize(n, 0.0);
  r.danger.resize(n, 0.0);
  r.hit.resize(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (const PdsPoint* p = lex.find(tokens.tokens[i])) {
      r.power[i] = p->power;
      r.danger[i] = p->danger;
      r.hit[i] = 1;
    }
  }
  return r;
}

OusioSeries window_scores_resolved(const ResolvedTokens& resolved,
                                   const WindowConfig& cfg, Dimension dim) {
  cfg.validate();
  const std::size_t n = resolved.size();
  if (n == 0) raise(Errc::empty_input, "window_scores: no tokens");
  const std::size_t windows = window_count(n, cfg);
  if (windows == 0)
    raise(Errc::empty_series,
          "window_scores: " + std::to_string(n) + " tokens yield no full window of " +
              std::to_string(cfg.window_size));

  const std::vector<double>& score =
      dim == Dimension::power ? resolved.power : resolved.danger;

  OusioSeries series;
  series.dimension = dim;
  series.config = cfg;
  series.source_id = resolved.source_id;
  series.values.resize(windows);

  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t begin = w * static_cast<std::size_t>(cfg.skip);
    const std::size_t end = begin + static_cast<std::size_t>(cfg.window_size);
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (resolved.hit[i]) {
        sum += score[i];
        ++hits;
      }
    }
    series.values[w] = hits == 0 ? std::numeric_limits<double>::quiet_NaN()
                                 : sum / static_cast<double>(hits);
  }
  return series;
}

OusioSeries window_scores(const TokenSequence& tokens, const Lexicon& lex,
                          const WindowConfig& cfg, Dimension dim) {
  return window_scores_resolved(resolve_tokens(tokens, lex), cfg, dim);
}

std::vector<std::uint32_t> shuffle_permutation(std::size_t n, std::uint64_t seed) {
  if (n > std::numeric_limits<std::uint32_t>::max())
    raise(Errc::invalid_argument, "shuffle_permutation: sequence too long");
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

TokenSequence shuffle(const TokenSequence& tokens, std::uint64_t seed) {
  const auto perm = shuffle_permutation(tokens.tokens.size(), seed);
  TokenSequence out;
  out.source_id = tokens.source_id;
  out.tokens.reserve(tokens.tokens.size());
  for (std::uint32_t idx : perm) out.tokens.push_back(tokens.tokens[idx]);
  return out;
}

ResolvedTokens apply_permutation(const ResolvedTokens& resolved,
                                 const std::vector<std::uint32_t>& perm) {
  if (perm.size() != resolved.size())
    raise(Errc::invalid_argument, "apply_permutation: size mismatch");
  ResolvedTokens out;
  out.source_id = resolved.source_id;
  out.power.resize(perm.size());
  out.danger.resize(perm.size());
  out.hit.resize(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const std::uint32_t j = perm[i];
    out.power[i] = resolved.power[j];
    out.danger[i] = resolved.danger[j];
    out.hit[i] = resolved.hit[j];
  }
  return out;
}

void write_series_csv(std::ostream& out, const OusioSeries& series) {
  out << "window_index,word_time_start,score\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double v = series.values[i];
    out << i << ',' << i * static_cast<std::size_t>(series.config.skip) << ','
        << (std::isnan(v) ? "nan" : format_g6(v)) << '\n';
  }
}

OusioSeries read_series_csv(std::istream& in, Dimension dim, std::string source_id,
                            int skip_override) {
  OusioSeries series;
  series.dimension = dim;
  series.source_id = std::move(source_id);

  std::string line;
  if (!std::getline(in, line)) raise(Errc::io_error, "series CSV: empty file");

  std::vector<long long> starts;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_copy(line).empty()) continue;
    const auto cells = split_on(line, ',');
    if (cells.size() < 3)
      raise(Errc::io_error, "series CSV: too few columns on line " + std::to_string(line_no));
    starts.push_back(std::atoll(cells[1].c_str()));
    const std::string cell = trim_copy(cells[2]);
    if (lower_ascii_copy(cell) == "nan") {
      series.values.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        raise(Errc::io_error,
              "series CSV: unparsable score on line " + std::to_string(line_no));
      series.values.push_back(v);
    }
  }
  if (series.values.empty()) raise(Errc::io_error, "series CSV: no data rows");

  if (skip_override > 0) {
    series.config.skip = skip_override;
    series.config.window_size = skip_override;
  } else if (starts.size() >= 2 && starts[1] > starts[0]) {
    series.config.skip = static_cast<int>(starts[1] - starts[0]);
    series.config.window_size = series.config.skip;
  }
  return series;
}

}  // namespace ousia
