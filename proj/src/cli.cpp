#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ousia/corpus.hpp"
#include "ousia/error.hpp"
#include "ousia/hht.hpp"
#include "ousia/rng.hpp"
#include "ousia/util.hpp"

namespace ousia {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct CliOptions {
  std::string input;
  std::string lexicon;
  std::string out = ".";
  std::string dimension = "both";
  std::string mode = "all";
  int window = 50;
  int skip = 50;
  int ensemble = 100;
  int shuffles = 100;
  int threads = 0;
  double noise_ratio = 0.2;
  std::uint64_t seed = 0;
};

std::vector<Dimension> selected_dimensions(const std::string& name) {
  if (name == "power") return {Dimension::power};
  if (name == "danger") return {Dimension::danger};
  return {Dimension::danger, Dimension::power};
}

std::vector<RescalingMode> selected_modes(const std::string& name) {
  if (name == "median") return {RescalingMode::MedianFirst};
  if (name == "p01") return {RescalingMode::FirstPercentileFirst};
  if (name == "none") return {RescalingMode::NoRescaling};
  return {RescalingMode::MedianFirst, RescalingMode::FirstPercentileFirst,
          RescalingMode::NoRescaling};
}

PipelineConfig config_from(const CliOptions& o) {
  PipelineConfig config;
  config.window.window_size = o.window;
  config.window.skip = o.skip;
  config.ensemble_size = o.ensemble;
  config.noise_ratio = o.noise_ratio;
  config.shuffles = o.shuffles;
  config.seed = o.seed;
  config.dimensions = selected_dimensions(o.dimension);
  config.modes = selected_modes(o.mode);
  return config;
}

std::string book_id_for(const std::string& input) {
  const std::string stem = fs::path(input).stem().string();
  return stem.empty() ? std::string("book") : stem;
}

void ensure_out_dir(const std::string& out) {
  if (!out.empty() && out != ".") fs::create_directories(out);
}

std::string out_path(const CliOptions& o, const std::string& filename) {
  return (fs::path(o.out) / filename).string();
}

TokenSequence load_tokens(const CliOptions& o, const std::string& book_id) {
  const std::string raw = read_text_file(o.input);
  const StripResult stripped = strip_boilerplate(raw);
  return tokenize(expand_contractions(stripped.text), book_id);
}

// ===== score =================================================================

int cmd_score(const CliOptions& o) {
  const Lexicon lex = Lexicon::load(o.lexicon);
  const std::string book_id = book_id_for(o.input);
  const TokenSequence tokens = load_tokens(o, book_id);
  const WindowConfig cfg{o.window, o.skip};

  ensure_out_dir(o.out);
  for (Dimension dim : selected_dimensions(o.dimension)) {
    const OusioSeries series = window_scores(tokens, lex, cfg, dim);
    std::ostringstream csv;
    write_series_csv(csv, series);
    const std::string path =
        out_path(o, book_id + "." + dimension_name(dim) + ".series.csv");
    write_text_file(path, csv.str());
    std::cerr << "wrote " << path << "\n";
  }
  return 0;
}

// ===== decompose =============================================================

int cmd_decompose(const CliOptions& o, bool skip_given) {
  std::ifstream in(o.input);
  if (!in) raise(Errc::io_error, "cannot open series CSV: " + o.input);
  const std::string book_id = book_id_for(o.input);
  const OusioSeries series =
      read_series_csv(in, Dimension::danger, book_id, skip_given ? o.skip : 0);
  if (series.has_missing())
    raise(Errc::empty_window, "series contains missing windows; cannot decompose");

  EemdConfig cfg;
  cfg.ensemble_size = o.ensemble;
  cfg.noise_ratio = o.noise_ratio;
  cfg.seed = o.seed;
  const Decomposition d = eemd(series.values, cfg);

  ensure_out_dir(o.out);
  std::ostringstream csv;
  write_decomposition_csv(csv, d);
  const std::string csv_path = out_path(o, book_id + ".imfs.csv");
  write_text_file(csv_path, csv.str());

  ordered_json j;
  j["source"] = o.input;
  j["length"] = d.input_length;
  j["n_imfs"] = d.order_count();
  j["config"] = {{"ensemble", cfg.ensemble_size},
                 {"noise_ratio", snap_g6(cfg.noise_ratio)},
                 {"seed", cfg.seed},
                 {"skip", series.config.skip}};
  if (d.ensemble) j["mean_error"] = snap_g6(d.ensemble->mean_error);
  ordered_json imfs = ordered_json::array();
  const double rate = 1.0 / static_cast<double>(series.config.skip);
  for (const auto& imf : d.imfs) {
    ordered_json ji;
    ji["order"] = imf.order;
    ji["sift_count"] = imf.sift_count;
    ji["converged"] = imf.converged;
    try {
      ji["period_words"] =
          snap_g6(characteristic_period(imf.values, FrequencyBins::standard(), rate));
    } catch (const Error&) {
      ji["period_words"] = nullptr;
    }
    imfs.push_back(std::move(ji));
  }
  j["imfs"] = std::move(imfs);
  const std::string json_path = out_path(o, book_id + ".decomp.json");
  write_text_file(json_path, j.dump(2) + "\n");
  std::cerr << "wrote " << csv_path << " and " << json_path << "\n";
  return 0;
}

// ===== cutoff ================================================================

int cmd_cutoff(const CliOptions& o, bool out_given) {
  const Lexicon lex = Lexicon::load(o.lexicon);
  const std::string book_id = book_id_for(o.input);
  BookMeta meta;
  meta.book_id = book_id;
  meta.path = o.input;
  meta.title = book_id;

  const BookRecord record = process_book(o.input, meta, lex, config_from(o));
  const std::string json = record_to_json(record);
  std::cout << json;
  if (out_given) {
    ensure_out_dir(o.out);
    write_text_file(out_path(o, book_id + ".json"), json);
  }
  return 0;
}

// ===== corpus ================================================================

int cmd_corpus(const CliOptions& o) {
  const Lexicon lex = Lexicon::load(o.lexicon);
  const auto manifest = read_manifest(o.input);
  ensure_out_dir(o.out);

  std::vector<BookRecord> records;
  records.reserve(manifest.size());
  for (const auto& meta : manifest) {
    PipelineConfig config = config_from(o);
    // Per-book seed derived from the master seed and the book id, so batch
    // results do not depend on manifest order or partitioning.
    config.seed = mix_seed(o.seed, fnv1a64(meta.book_id));
    BookRecord record;
    try {
      record = process_book(meta.path, meta, lex, config);
    } catch (const Error& e) {
      record.meta = meta;
      record.seed = config.seed;
      record.window = config.window;
      record.reasons.push_back(std::string(errc_name(e.code())) + ": " + e.what());
    }
    write_text_file(out_path(o, record.meta.book_id + ".json"),
                    record_to_json(record));
    std::cerr << "processed " << record.meta.book_id << "\n";
    records.push_back(std::move(record));
  }

  std::ostringstream csv;
  write_aggregates_csv(csv, aggregate_all(records));
  const std::string agg_path = out_path(o, "aggregates.csv");
  write_text_file(agg_path, csv.str());
  std::cerr << "wrote " << agg_path << "\n";
  return 0;
}

// ===== null diagnostics ======================================================

int cmd_null(const CliOptions& o) {
  const Lexicon lex = Lexicon::load(o.lexicon);
  const std::string book_id = book_id_for(o.input);
  BookMeta meta;
  meta.book_id = book_id;
  meta.path = o.input;
  meta.title = book_id;

  PipelineConfig config = config_from(o);
  config.null_diagnostics = true;
  BookRecord record = process_book(o.input, meta, lex, config);
  ensure_out_dir(o.out);

  for (auto& [dim_name, outcome] : record.dimensions) {
    if (!outcome.null_ensemble) continue;
    const NullEnsemble& null_ensemble = *outcome.null_ensemble;

    // Pooled per-order variances, trend pool included as order "trend".
    {
      std::ostringstream csv;
      csv << "order,variance\n";
      for (std::size_t oi = 0; oi < null_ensemble.order_variances.size(); ++oi)
        for (double v : null_ensemble.order_variances[oi])
          csv << (oi + 1) << ',' << format_g6(v) << '\n';
      for (double v : null_ensemble.trend_variances)
        csv << "trend," << format_g6(v) << '\n';
      const std::string path = out_path(o, book_id + "." + dim_name + ".nullvar.csv");
      write_text_file(path, csv.str());
      record.diagnostics.push_back(path);
    }

    // Per-order null thresholds and reference statistics.
    {
      std::ostringstream csv;
      csv << "order,count,p99\n";
      for (int order = 1; order <= null_ensemble.max_order(); ++order) {
        const auto& pool =
            null_ensemble.order_variances[static_cast<std::size_t>(order - 1)];
        csv << order << ',' << pool.size() << ','
            << (pool.empty() ? "" : format_g6(percentile(pool, 99.0))) << '\n';
      }
      csv << "trend," << null_ensemble.trend_variances.size() << ','
          << format_g6(null_ensemble.trend_percentile(99.0)) << '\n';
      csv << "first_imf_median,," << format_g6(null_ensemble.first_imf_median()) << '\n';
      csv << "first_imf_p01,," << format_g6(null_ensemble.first_imf_p01()) << '\n';
      const std::string path = out_path(o, book_id + "." + dim_name + ".nullstats.csv");
      write_text_file(path, csv.str());
      record.diagnostics.push_back(path);
    }

    // Ratio of the target IMF period to each null realization's period at
    // the same order (pairwise comparison diagnostic).
    {
      std::ostringstream csv;
      csv << "order,target_period,median_ratio,n\n";
      const std::size_t orders =
          std::min(outcome.target_periods.size(), null_ensemble.order_periods.size());
      for (std::size_t oi = 0; oi < orders; ++oi) {
        const double target_period = outcome.target_periods[oi];
        std::vector<double> ratios;
        if (!std::isnan(target_period)) {
          for (double null_period : null_ensemble.order_periods[oi])
            if (!std::isnan(null_period) && null_period > 0.0)
              ratios.push_back(target_period / null_period);
        }
        csv << (oi + 1) << ','
            << (std::isnan(target_period) ? "" : format_g6(target_period)) << ','
            << (ratios.empty() ? "" : format_g6(percentile(ratios, 50.0))) << ','
            << ratios.size() << '\n';
      }
      const std::string path =
          out_path(o, book_id + "." + dim_name + ".period_ratio.csv");
      write_text_file(path, csv.str());
      record.diagnostics.push_back(path);
    }
    outcome.null_ensemble.reset();  // keep the JSON slim
  }

  const std::string json = record_to_json(record);
  write_text_file(out_path(o, book_id + ".json"), json);
  std::cout << json;
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"ousiometric decomposition of book structure"};
  app.require_subcommand(1);

  CliOptions o;
  bool skip_given = false;
  bool out_given = false;

  const auto add_common = [&](CLI::App* cmd, bool needs_lexicon) {
    cmd->add_option("--lexicon", o.lexicon, "word score table (TSV/CSV)")
        ->required(needs_lexicon);
    cmd->add_option("--dimension", o.dimension, "power, danger, or both")
        ->check(CLI::IsMember({"power", "danger", "both"}))
        ->capture_default_str();
    cmd->add_option("--window", o.window, "window size in words")
        ->check(CLI::Range(1, std::numeric_limits<int>::max()))
        ->capture_default_str();
    cmd->add_option("--skip", o.skip, "words between window starts")
        ->check(CLI::Range(1, std::numeric_limits<int>::max()))
        ->capture_default_str()
        ->each([&](const std::string&) { skip_given = true; });
    cmd->add_option("--ensemble", o.ensemble, "ensemble size for the target decomposition")
        ->check(CLI::Range(1, std::numeric_limits<int>::max()))
        ->capture_default_str();
    cmd->add_option("--shuffles", o.shuffles, "number of shuffled null realizations")
        ->check(CLI::Range(1, std::numeric_limits<int>::max()))
        ->capture_default_str();
    cmd->add_option("--noise-ratio", o.noise_ratio, "ensemble noise std as a fraction of series std")
        ->check(CLI::Range(0.0, 1e6))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--mode", o.mode, "rescaling mode: median, p01, none, or all")
        ->check(CLI::IsMember({"median", "p01", "none", "all"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "output directory")
        ->capture_default_str()
        ->each([&](const std::string&) { out_given = true; });
    cmd->add_option("--threads", o.threads, "worker thread budget (0 = hardware)")
        ->check(CLI::Range(0, 4096))
        ->capture_default_str();
  };

  CLI::App* score = app.add_subcommand("score", "book text to windowed score series CSV");
  score->add_option("input", o.input, "book text file")->required();
  add_common(score, true);

  CLI::App* decompose =
      app.add_subcommand("decompose", "series CSV to IMF table and metadata");
  decompose->add_option("input", o.input, "series CSV file")->required();
  add_common(decompose, false);

  CLI::App* cutoff =
      app.add_subcommand("cutoff", "full per-book cutoff analysis to JSON");
  cutoff->add_option("input", o.input, "book text file")->required();
  add_common(cutoff, true);

  CLI::App* corpus =
      app.add_subcommand("corpus", "batch analysis over a manifest TSV");
  corpus->add_option("input", o.input, "manifest TSV")->required();
  add_common(corpus, true);

  CLI::App* null_cmd =
      app.add_subcommand("null", "shuffled-text null-model diagnostics for one book");
  null_cmd->add_option("input", o.input, "book text file")->required();
  add_common(null_cmd, true);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ousia");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (o.threads > 0) set_thread_budget(o.threads);
    if (score->parsed()) return cmd_score(o);
    if (decompose->parsed()) return cmd_decompose(o, skip_given);
    if (cutoff->parsed()) return cmd_cutoff(o, out_given);
    if (corpus->parsed()) return cmd_corpus(o);
    if (null_cmd->parsed()) return cmd_null(o);
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace ousia
