#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ousia/cutoff.hpp"
#include "ousia/emd.hpp"
#include "ousia/preprocess.hpp"
#include "ousia/series.hpp"

namespace ousia {

// One manifest row. LCC labels are subclass codes ("PS"); the class is their
// first letter. Multiple labels per book are allowed.
struct BookMeta {
  std::string book_id;
  std::string path;
  std::string title;
  std::vector<std::string> lcc;
};

// TSV manifest: columns book_id, path, title, lcc (lcc entries separated by
// ';' or whitespace inside the field). An optional header row starting with
// "book_id" is skipped. Relative paths resolve against the manifest's
// directory.
std::vector<BookMeta> read_manifest(const std::string& path);

struct PipelineConfig {
  WindowConfig window{};
  int ensemble_size = 100;
  double noise_ratio = 0.2;
  int shuffles = 100;
  std::uint64_t seed = 0;
  std::vector<Dimension> dimensions{Dimension::danger, Dimension::power};
  std::vector<RescalingMode> modes{RescalingMode::MedianFirst,
                                   RescalingMode::FirstPercentileFirst,
                                   RescalingMode::NoRescaling};
  EmdOptions emd{};
  bool null_diagnostics = false;  // collect per-realization periods
};

// Everything the pipeline learned about one dimension of one book.
struct DimensionOutcome {
  // ok | eemd_failed | null_failed | empty_series | error
  std::string status = "ok";
  std::string detail;  // human-readable cause when status != ok
  std::size_t series_length = 0;
  int n_imfs = 0;
  std::optional<EnsembleInfo> ensemble;
  // Keyed by rescaling-mode name, in the config's mode order.
  std::map<std::string, CutoffResult> modes;
  std::map<std::string, std::string> mode_errors;
  std::optional<NullEnsemble> null_ensemble;  // retained only for diagnostics
  std::vector<double> target_periods;         // per-order, when diagnostics on
};

struct BookRecord {
  BookMeta meta;
  std::uint64_t seed = 0;
  WindowConfig window{};
  std::size_t word_count = 0;
  BoilerplateFlag boilerplate = BoilerplateFlag::no_markers;
  CoverageStats coverage_stats{};
  bool is_eligible = false;
  std::vector<std::string> reasons;  // failed gate criteria when ineligible
  std::map<std::string, DimensionOutcome> dimensions;  // keyed by dimension name
  std::vector<std::string> diagnostics;  // paths of extra files written
};

// Full pipeline for one book: strip, expand, tokenize, gate, then per
// dimension EEMD target + shuffled-EMD null + cutoff per mode. Partial
// failures land in the record as reason codes; only I/O failure throws.
BookRecord process_book(const std::string& path, const BookMeta& meta,
                        const Lexicon& lex, const PipelineConfig& config);
// Same pipeline on in-memory text (the file layer split off for tests).
BookRecord process_text(const std::string& raw_text, const BookMeta& meta,
                        const Lexicon& lex, const PipelineConfig& config);

// Stable JSON rendering of a record (numbers snapped to 6 significant
// digits; insertion-ordered keys; trailing newline).
std::string record_to_json(const BookRecord& record);

// ===== aggregation ===========================================================

enum class Grouping { all, lcc_class, lcc_subclass, title_keyword };

// Title keywords matched as case-insensitive prefixes at word starts of the
// tokenized title ("poem" matches "Poems of the Sea"; "short stor" matches
// "short stories").
const std::vector<std::string>& title_keywords();

struct AggregateSummary {
  std::string grouping;
  std::string key;        // "" for the all-group
  std::string dimension;  // "power" / "danger"
  std::string mode;       // rescaling-mode name
  int books = 0;          // records with an ok pipeline for this dimension
  int fluctuation = 0;
  int trend_only = 0;
  // Percentiles over fluctuation-class books; keys 9, 25, 50, 75, 91.
  std::map<int, double> period_percentiles;
  std::map<int, double> variance_percentiles;
};

std::vector<AggregateSummary> aggregate(const std::vector<BookRecord>& records,
                                        Grouping grouping);
// All four groupings concatenated in fixed order.
std::vector<AggregateSummary> aggregate_all(const std::vector<BookRecord>& records);

void write_aggregates_csv(std::ostream& out,
                          const std::vector<AggregateSummary>& summaries);

// ===== command-line interface ================================================

// argv-style entry point (without the program name). Returns the process
// exit status: 0 success, 1 usage error, 2 data/processing error.
int run_cli(const std::vector<std::string>& args);

}  // namespace ousia
