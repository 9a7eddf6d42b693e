#include "ousia/corpus.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ousia/error.hpp"
#include "ousia/hht.hpp"
#include "ousia/rng.hpp"
#include "ousia/util.hpp"

namespace ousia {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* boilerplate_name(BoilerplateFlag f) {
  switch (f) {
    case BoilerplateFlag::markers_found: return "markers_found";
    case BoilerplateFlag::no_markers: return "no_markers";
    case BoilerplateFlag::no_end_marker: return "no_end_marker";
  }
  return "?";
}

// Window hit flags straight from the resolved tokens (dimension-independent).
std::vector<bool> window_hit_flags(const ResolvedTokens& resolved,
                                   const WindowConfig& cfg) {
  const std::size_t windows = window_count(resolved.size(), cfg);
  std::vector<bool> flags(windows, false);
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t begin = w * static_cast<std::size_t>(cfg.skip);
    const std::size_t end = begin + static_cast<std::size_t>(cfg.window_size);
    for (std::size_t i = begin; i < end; ++i) {
      if (resolved.hit[i]) {
        flags[w] = true;
        break;
      }
    }
  }
  return flags;
}

std::vector<std::string> parse_lcc_field(const std::string& field) {
  std::vector<std::string> labels;
  std::string current;
  for (char c : field + ";") {
    if (c == ';' || c == ',' || c == ' ' || c == '\t') {
      if (!current.empty()) {
        std::string label;
        for (char lc : current)
          if ((lc >= 'A' && lc <= 'Z') || (lc >= 'a' && lc <= 'z'))
            label.push_back(lc >= 'a' ? static_cast<char>(lc - 'a' + 'A') : lc);
        if (!label.empty()) labels.push_back(label);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  return labels;
}

double snap_or_nan(double v) { return std::isnan(v) ? v : snap_g6(v); }

ordered_json cutoff_to_json(const CutoffResult& r) {
  ordered_json j;
  j["classification"] = r.trend_only ? "trend_only" : "fluctuation";
  if (r.trend_only) {
    j["cutoff_order"] = nullptr;
    j["period_words"] = nullptr;
    j["variance"] = nullptr;
  } else {
    j["cutoff_order"] = r.cutoff_order;
    j["period_words"] =
        std::isnan(r.period_words) ? ordered_json(nullptr) : ordered_json(snap_g6(r.period_words));
    j["variance"] = snap_or_nan(r.variance);
  }
  j["trend_exceeded"] = r.trend_exceeded;
  j["percentile_fallback"] = r.percentile_fallback;
  j["period_exceeds_length"] = r.period_exceeds_length;
  return j;
}

}  // namespace

std::vector<BookMeta> read_manifest(const std::string& path) {
  const std::string content = read_text_file(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<BookMeta> books;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_copy(line).empty()) continue;
    const auto cells = split_on(line, '\t');
    if (line_no == 1 && !cells.empty() &&
        lower_ascii_copy(trim_copy(cells[0])) == "book_id")
      continue;  // header row
    if (cells.size() < 2)
      raise(Errc::io_error,
            path + ": manifest line " + std::to_string(line_no) +
                " needs at least book_id and path");
    BookMeta meta;
    meta.book_id = trim_copy(cells[0]);
    meta.path = trim_copy(cells[1]);
    if (cells.size() > 2) meta.title = trim_copy(cells[2]);
    if (cells.size() > 3) meta.lcc = parse_lcc_field(cells[3]);
    if (meta.book_id.empty())
      raise(Errc::io_error,
            path + ": empty book_id on line " + std::to_string(line_no));
    if (!meta.path.empty() && std::filesystem::path(meta.path).is_relative())
      meta.path = (base / meta.path).string();
    books.push_back(std::move(meta));
  }
  if (books.empty()) raise(Errc::io_error, path + ": manifest has no rows");
  return books;
}

BookRecord process_text(const std::string& raw_text, const BookMeta& meta,
                        const Lexicon& lex, const PipelineConfig& config) {
  config.window.validate();
  BookRecord record;
  record.meta = meta;
  record.seed = config.seed;
  record.window = config.window;

  StripResult stripped = strip_boilerplate(raw_text);
  record.boilerplate = stripped.flag;
  const std::string expanded = expand_contractions(stripped.text);
  const TokenSequence tokens = tokenize(expanded, meta.book_id);
  record.word_count = tokens.tokens.size();

  if (tokens.tokens.empty()) {
    record.reasons.push_back("empty_input");
    return record;
  }
  record.coverage_stats = coverage(tokens, lex);

  const ResolvedTokens resolved = resolve_tokens(tokens, lex);
  if (window_count(resolved.size(), config.window) == 0) {
    record.reasons.push_back("empty_series");
    return record;
  }

  const Eligibility gate =
      eligible(record.coverage_stats, window_hit_flags(resolved, config.window));
  record.is_eligible = gate.eligible;
  record.reasons = gate.reasons;
  if (!gate.eligible) return record;  // no decomposition for ineligible books

  for (Dimension dim : config.dimensions) {
    DimensionOutcome outcome;
    const OusioSeries series = window_scores_resolved(resolved, config.window, dim);
    outcome.series_length = series.values.size();

    Decomposition target;
    try {
      EemdConfig eemd_cfg;
      eemd_cfg.ensemble_size = config.ensemble_size;
      eemd_cfg.noise_ratio = config.noise_ratio;
      eemd_cfg.seed = config.seed;
      eemd_cfg.emd = config.emd;
      target = eemd(series.values, eemd_cfg);
    } catch (const Error& e) {
      outcome.status = e.code() == Errc::decomposition_failed ? "eemd_failed" : "error";
      outcome.detail = e.what();
      record.dimensions[dimension_name(dim)] = std::move(outcome);
      continue;
    }
    outcome.n_imfs = target.order_count();
    outcome.ensemble = target.ensemble;

    NullEnsemble null_ensemble;
    try {
      NullOptions null_opts;
      null_opts.emd = config.emd;
      null_opts.compute_periods = config.null_diagnostics;
      null_ensemble = build_null_resolved(resolved, config.window, dim,
                                          config.shuffles, config.seed, null_opts);
    } catch (const Error& e) {
      outcome.status = e.code() == Errc::null_failed ? "null_failed" : "error";
      outcome.detail = e.what();
      record.dimensions[dimension_name(dim)] = std::move(outcome);
      continue;
    }

    for (RescalingMode mode : config.modes) {
      CutoffOptions opts;
      opts.mode = mode;
      opts.skip = config.window.skip;
      opts.book_length = record.word_count;
      try {
        outcome.modes[rescaling_mode_name(mode)] =
            detect_cutoff(target, null_ensemble, opts);
      } catch (const Error& e) {
        outcome.mode_errors[rescaling_mode_name(mode)] = e.what();
      }
    }

    if (config.null_diagnostics) {
      const double rate = 1.0 / static_cast<double>(config.window.skip);
      for (const auto& imf : target.imfs) {
        double period = std::numeric_limits<double>::quiet_NaN();
        try {
          period = characteristic_period(imf.values, FrequencyBins::standard(), rate);
        } catch (const Error&) {
        }
        outcome.target_periods.push_back(period);
      }
      outcome.null_ensemble = std::move(null_ensemble);
    }
    record.dimensions[dimension_name(dim)] = std::move(outcome);
  }
  return record;
}

BookRecord process_book(const std::string& path, const BookMeta& meta,
                        const Lexicon& lex, const PipelineConfig& config) {
  return process_text(read_text_file(path), meta, lex, config);
}

std::string record_to_json(const BookRecord& record) {
  ordered_json j;
  j["book_id"] = record.meta.book_id;
  j["title"] = record.meta.title;
  j["lcc"] = record.meta.lcc;
  j["seed"] = record.seed;
  j["window"] = {{"size", record.window.window_size}, {"skip", record.window.skip}};
  j["word_count"] = record.word_count;
  j["boilerplate"] = boilerplate_name(record.boilerplate);
  j["coverage"] = {{"unique", snap_g6(record.coverage_stats.unique_coverage)},
                   {"token", snap_g6(record.coverage_stats.token_coverage)},
                   {"unique_types", record.coverage_stats.unique_types},
                   {"total_tokens", record.coverage_stats.total_tokens}};
  j["eligible"] = record.is_eligible;
  j["reasons"] = record.reasons;

  ordered_json dims = ordered_json::object();
  for (const auto& [name, outcome] : record.dimensions) {
    ordered_json d;
    d["status"] = outcome.status;
    if (!outcome.detail.empty()) d["detail"] = outcome.detail;
    d["series_length"] = outcome.series_length;
    d["n_imfs"] = outcome.n_imfs;
    if (outcome.ensemble) {
      int unconverged = 0;
      for (int c : outcome.ensemble->unconverged_at_order) unconverged += c;
      d["eemd"] = {{"ensemble", outcome.ensemble->ensemble_size},
                   {"noise_ratio", snap_g6(outcome.ensemble->noise_ratio)},
                   {"mean_error", snap_g6(outcome.ensemble->mean_error)},
                   {"unconverged_members", unconverged}};
    }
    ordered_json modes = ordered_json::object();
    for (const auto& [mode_name, result] : outcome.modes)
      modes[mode_name] = cutoff_to_json(result);
    for (const auto& [mode_name, err] : outcome.mode_errors)
      modes[mode_name] = {{"error", err}};
    d["modes"] = std::move(modes);
    dims[name] = std::move(d);
  }
  j["dimensions"] = std::move(dims);
  j["diagnostics"] = record.diagnostics;
  return j.dump(2) + "\n";
}

// ===== aggregation ===========================================================

const std::vector<std::string>& title_keywords() {
  static const std::vector<std::string> keywords{
      "poem", "manual", "play", "collection", "short stor", "report", "essay"};
  return keywords;
}

namespace {

const char* grouping_name(Grouping g) {
  switch (g) {
    case Grouping::all: return "all";
    case Grouping::lcc_class: return "lcc_class";
    case Grouping::lcc_subclass: return "lcc_subclass";
    case Grouping::title_keyword: return "title_keyword";
  }
  return "?";
}

// Keys a record belongs to under a grouping. The all-group key is "".
std::vector<std::string> group_keys(const BookRecord& record, Grouping grouping) {
  std::vector<std::string> keys;
  switch (grouping) {
    case Grouping::all:
      keys.push_back("");
      break;
    case Grouping::lcc_class: {
      std::set<std::string> unique;
      for (const auto& label : record.meta.lcc)
        if (!label.empty()) unique.insert(label.substr(0, 1));
      keys.assign(unique.begin(), unique.end());
      break;
    }
    case Grouping::lcc_subclass: {
      std::set<std::string> unique(record.meta.lcc.begin(), record.meta.lcc.end());
      keys.assign(unique.begin(), unique.end());
      break;
    }
    case Grouping::title_keyword: {
      const TokenSequence title_tokens = tokenize(record.meta.title);
      std::string joined;
      for (const auto& t : title_tokens.tokens) {
        if (!joined.empty()) joined.push_back(' ');
        joined += t;
      }
      for (const auto& keyword : title_keywords()) {
        // prefix match at any word start of the tokenized title
        std::size_t pos = joined.find(keyword);
        bool matched = false;
        while (pos != std::string::npos && !matched) {
          if (pos == 0 || joined[pos - 1] == ' ') matched = true;
          pos = joined.find(keyword, pos + 1);
        }
        if (matched) keys.push_back(keyword);
      }
      break;
    }
  }
  return keys;
}

}  // namespace

std::vector<AggregateSummary> aggregate(const std::vector<BookRecord>& records,
                                        Grouping grouping) {
  // group key -> dimension -> mode -> contributing values
  struct Cell {
    int books = 0;
    int fluctuation = 0;
    int trend_only = 0;
    std::vector<double> periods;
    std::vector<double> variances;
  };
  std::map<std::string, std::map<std::string, std::map<std::string, Cell>>> table;
  std::vector<std::string> mode_order;  // first-seen order, stable across records

  for (const auto& record : records) {
    if (!record.is_eligible) continue;
    const auto keys = group_keys(record, grouping);
    if (keys.empty()) continue;
    for (const auto& [dim_name, outcome] : record.dimensions) {
      if (outcome.status != "ok") continue;  // per-dimension exclusion
      for (const auto& [mode_name, result] : outcome.modes) {
        if (std::find(mode_order.begin(), mode_order.end(), mode_name) ==
            mode_order.end())
          mode_order.push_back(mode_name);
        for (const auto& key : keys) {
          Cell& cell = table[key][dim_name][mode_name];
          ++cell.books;
          if (result.trend_only) {
            ++cell.trend_only;
          } else {
            ++cell.fluctuation;
            if (!std::isnan(result.period_words))
              cell.periods.push_back(result.period_words);
            if (!std::isnan(result.variance))
              cell.variances.push_back(result.variance);
          }
        }
      }
    }
  }

  static const int percentile_points[] = {9, 25, 50, 75, 91};
  std::vector<AggregateSummary> out;
  for (const auto& [key, by_dim] : table) {
    for (const auto& [dim_name, by_mode] : by_dim) {
      for (const auto& mode_name : mode_order) {
        const auto it = by_mode.find(mode_name);
        if (it == by_mode.end()) continue;
        const Cell& cell = it->second;
        AggregateSummary s;
        s.grouping = grouping_name(grouping);
        s.key = key;
        s.dimension = dim_name;
        s.mode = mode_name;
        s.books = cell.books;
        s.fluctuation = cell.fluctuation;
        s.trend_only = cell.trend_only;
        for (int p : percentile_points) {
          if (!cell.periods.empty())
            s.period_percentiles[p] = percentile(cell.periods, p);
          if (!cell.variances.empty())
            s.variance_percentiles[p] = percentile(cell.variances, p);
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<AggregateSummary> aggregate_all(const std::vector<BookRecord>& records) {
  std::vector<AggregateSummary> out;
  for (Grouping g : {Grouping::all, Grouping::lcc_class, Grouping::lcc_subclass,
                     Grouping::title_keyword}) {
    auto part = aggregate(records, g);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void write_aggregates_csv(std::ostream& out,
                          const std::vector<AggregateSummary>& summaries) {
  out << "grouping,key,dimension,mode,books,fluctuation,trend_only";
  for (const char* metric : {"period", "variance"})
    for (int p : {9, 25, 50, 75, 91}) out << ',' << metric << "_p" << p;
  out << '\n';
  for (const auto& s : summaries) {
    out << s.grouping << ',' << s.key << ',' << s.dimension << ',' << s.mode << ','
        << s.books << ',' << s.fluctuation << ',' << s.trend_only;
    for (const auto* pct : {&s.period_percentiles, &s.variance_percentiles}) {
      for (int p : {9, 25, 50, 75, 91}) {
        out << ',';
        const auto it = pct->find(p);
        if (it != pct->end()) out << format_g6(it->second);
      }
    }
    out << '\n';
  }
}

}  // namespace ousia
