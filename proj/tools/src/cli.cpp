#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lexbias/corpus.hpp"
#include "lexbias/crosscorpus.hpp"
#include "lexbias/embedding.hpp"
#include "lexbias/pipeline.hpp"
#include "lexbias/report.hpp"
#include "lexbias/synthgen.hpp"
#include "lexbias/weat.hpp"

namespace lexbias::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct TrainFlags {
  embedding::TrainConfig cfg;
  std::string format = "binary";
};

void add_train_flags(CLI::App* app, TrainFlags& f) {
  app->add_option("--dim", f.cfg.dim, "Vector dimension");
  app->add_option("--window", f.cfg.window, "Symmetric co-occurrence window");
  app->add_option("--min-count", f.cfg.min_count, "Minimum term count for the vocabulary");
  app->add_option("--iters", f.cfg.iterations, "Training iterations");
  app->add_option("--x-max", f.cfg.x_max, "Weighting cutoff");
  app->add_option("--weight-alpha", f.cfg.alpha, "Weighting exponent");
  app->add_option("--learning-rate", f.cfg.learning_rate, "AdaGrad learning rate");
}

void add_weat_flags(CLI::App* app, weat::WeatConfig& w, std::string& sets_dir, std::string& form) {
  app->add_option("--sets", sets_dir, "Directory with the four word-set files (default: shipped sets)");
  app->add_option("--shuffles", w.shuffles, "Randomization shuffles");
  app->add_option("--alpha", w.alpha, "Significance level");
  app->add_option("--form", form, "Statistic form")->check(CLI::IsMember({"sum", "mean"}));
}

weat::WordSets load_sets(const std::string& dir) {
  return dir.empty() ? weat::WordSets::defaults() : weat::WordSets::load_dir(dir);
}

weat::StatisticForm to_form(const std::string& s) { return *weat::parse_form(s); }

/// Every option of `app` with its resolved value, for the run manifest.
json resolved_config(const CLI::App* app) {
  json cfg = json::object();
  for (const auto* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (r.size() == 1) {
        cfg[name] = r.front();
      } else {
        cfg[name] = r;
      }
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

void write_manifest(report::RunManifest& m, const fs::path& path, Clock::time_point start) {
  m.timings["total"] = seconds_since(start);
  write_file(path, report::dump(report::to_json(m)));
}

fs::path manifest_path_for(const fs::path& out) {
  return fs::path(out.string() + ".manifest.json");
}

corpus::ShardKey key_from_stem(const fs::path& p) {
  const auto stem = p.stem().string();
  const auto pos = stem.find('_');
  if (pos == std::string::npos) return {stem, ""};
  return {stem.substr(0, pos), stem.substr(pos + 1)};
}

/// Reads `key = value` lines (optionally under a [subcommand] section) and
/// turns the entries the command line does not already set into flags.
std::vector<std::string> config_args(const CLI::App& sub, const fs::path& file,
                                     const std::vector<std::string>& given) {
  std::ifstream in(file);
  if (!in) throw InvalidInput("cannot open config file " + file.string());
  const auto items = CLI::ConfigINI().from_config(in);
  std::vector<std::string> out;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub.get_name())) {
      continue;
    }
    const std::string flag = "--" + item.name;
    const CLI::Option* opt = nullptr;
    for (const auto* o : sub.get_options()) {
      if (o->check_lname(item.name)) opt = o;
    }
    if (opt == nullptr || item.name == "config") {
      throw InvalidInput("config file " + file.string() + ": unknown key '" + item.name + "' for " +
                         sub.get_name());
    }
    bool present = false;
    for (const auto& g : given) {
      if (g == flag || g.rfind(flag + "=", 0) == 0) present = true;
    }
    if (present) continue;
    if (opt->get_expected_min() == 0) {
      const std::string v = item.inputs.empty() ? "true" : item.inputs.front();
      if (v == "true" || v == "1" || v == "yes" || v == "on") out.push_back(flag);
      continue;
    }
    for (const auto& v : item.inputs) {
      out.push_back(flag);
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw) {
  CLI::App app{"lexbias: regional and temporal bias measurement in legal text"};
  app.name(raw.empty() ? "lexbias" : fs::path(raw.front()).filename().string());
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string config_file;
  auto common = [&](CLI::App* s) {
    s->add_option("--seed", seed, "Seed for every random stream");
    s->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    s->add_option("--config", config_file, "Flat key = value file; flags take precedence");
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse JSONL case records into region/period shards");
  std::string ingest_input, regions_file, periods_file, ingest_out;
  bool keep_stopwords = false, no_lemmatize = false, keep_case = false;
  ingest->add_option("--input", ingest_input, "JSONL file or directory of *.jsonl")->required();
  ingest->add_option("--regions", regions_file, "Jurisdiction -> region map (default: census regions)");
  ingest->add_option("--periods", periods_file, "Period scheme (default: 30-year periods 1860-2009)");
  ingest->add_option("--out", ingest_out, "Output directory for shard files")->required();
  ingest->add_flag("--keep-stopwords", keep_stopwords, "Do not remove stopwords");
  ingest->add_flag("--no-lemmatize", no_lemmatize, "Do not lemmatize");
  ingest->add_flag("--keep-case", keep_case, "Do not lowercase");
  common(ingest);

  // stats
  auto* stats = app.add_subcommand("stats", "Document and token counts per shard");
  std::string stats_shards, stats_out;
  stats->add_option("--shards", stats_shards, "Shard directory")->required();
  stats->add_option("--out", stats_out, "CSV output (default: stdout)");
  common(stats);

  // train
  auto* train = app.add_subcommand("train", "Train GloVe vectors on one shard");
  TrainFlags train_flags;
  std::string train_shard, train_out;
  train->add_option("--shard", train_shard, "Shard file")->required();
  train->add_option("--out", train_out, "Embedding output file")->required();
  train->add_option("--format", train_flags.format, "Output format")
      ->check(CLI::IsMember({"binary", "text"}));
  add_train_flags(train, train_flags);
  common(train);

  // weat
  auto* weat_cmd = app.add_subcommand("weat", "Run the randomization test on one embedding set");
  weat::WeatConfig weat_cfg;
  std::string weat_emb, weat_sets, weat_out, weat_form = "sum", weat_key;
  weat_cmd->add_option("--embeddings", weat_emb, "Embedding file (binary or text)")->required();
  weat_cmd->add_option("--out", weat_out, "Result JSON")->required();
  weat_cmd->add_option("--key", weat_key, "Corpus label region_period (default: file stem)");
  add_weat_flags(weat_cmd, weat_cfg, weat_sets, weat_form);
  common(weat_cmd);

  // make-reference
  auto* mkref = app.add_subcommand("make-reference", "Build the cross-corpus reference distribution");
  TrainFlags ref_train;
  weat::WeatConfig ref_weat;
  crosscorpus::SyntheticCorpusSpec ref_spec;
  std::string ref_shards, ref_out, ref_sets, ref_form = "sum", ref_mode = "signed", ref_corpora_dir;
  double min_mb = 1.0, max_mb = 2.0;
  mkref->add_option("--shards", ref_shards, "Source shard directory")->required();
  mkref->add_option("--out", ref_out, "Reference report JSON")->required();
  mkref->add_option("--k", ref_spec.count, "Number of reference corpora")->check(CLI::Range(2, 100000));
  mkref->add_option("--min-mb", min_mb, "Smallest corpus size in MB");
  mkref->add_option("--max-mb", max_mb, "Largest corpus size in MB");
  mkref->add_option("--segment-docs", ref_spec.segment_docs, "Documents per sampled segment");
  mkref->add_option("--mode", ref_mode, "Difference mode")->check(CLI::IsMember({"signed", "absolute"}));
  mkref->add_option("--save-corpora", ref_corpora_dir, "Also write the generated corpora here");
  add_train_flags(mkref, ref_train);
  add_weat_flags(mkref, ref_weat, ref_sets, ref_form);
  common(mkref);

  // compare
  auto* compare = app.add_subcommand("compare", "Evaluate observed differences against a reference");
  std::string cmp_results, cmp_reference, cmp_out;
  std::vector<std::string> cmp_pairs, cmp_mean_pairs;
  double cmp_level = 0.05;
  compare->add_option("--results", cmp_results, "Directory of WEAT result JSON")->required();
  compare->add_option("--reference", cmp_reference, "Reference report JSON")->required();
  compare->add_option("--out", cmp_out, "Comparison report JSON")->required();
  compare->add_option("--alpha", cmp_level, "Significance level");
  compare->add_option("--pair", cmp_pairs, "LABEL_V:LABEL_W difference to evaluate (repeatable)");
  compare->add_option("--mean-pair", cmp_mean_pairs,
                      "REGION_V:REGION_W mean difference over shared periods (repeatable)");
  common(compare);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted bias");
  double synth_beta = 0.0;
  std::size_t synth_docs = 5000;
  std::string synth_out, synth_spec, synth_sets_out;
  synth->add_option("--beta", synth_beta, "Bias strength in [0, 1]");
  synth->add_option("--docs", synth_docs, "Document count");
  synth->add_option("--spec", synth_spec, "Bias spec JSON (overrides --beta/--docs)");
  synth->add_option("--out", synth_out, "Shard file")->required();
  synth->add_option("--sets-out", synth_sets_out, "Write matching word-set files here");
  common(synth);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the full pipeline over a list of bias specs");
  TrainFlags sweep_train;
  weat::WeatConfig sweep_weat;
  std::string sweep_specs, sweep_out, sweep_form = "sum";
  std::vector<double> sweep_betas;
  std::size_t sweep_docs = 5000;
  sweep_cmd->add_option("--specs", sweep_specs, "JSON file: array of bias specs or {\"specs\": [...]}");
  sweep_cmd->add_option("--betas", sweep_betas, "Beta values (alternative to --specs)")->delimiter(',');
  sweep_cmd->add_option("--docs", sweep_docs, "Document count for --betas");
  sweep_cmd->add_option("--out", sweep_out, "CSV output")->required();
  sweep_cmd->add_option("--shuffles", sweep_weat.shuffles, "Randomization shuffles");
  sweep_cmd->add_option("--alpha", sweep_weat.alpha, "Significance level");
  sweep_cmd->add_option("--form", sweep_form, "Statistic form")->check(CLI::IsMember({"sum", "mean"}));
  add_train_flags(sweep_cmd, sweep_train);
  common(sweep_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "Assemble grids, histograms and top-term tables");
  std::string rep_results, rep_out, rep_shards, rep_periods;
  report::ReportOptions rep_opts;
  report_cmd->add_option("--results", rep_results, "Directory of WEAT/comparison JSON")->required();
  report_cmd->add_option("--out", rep_out, "Output directory")->required();
  report_cmd->add_option("--shards", rep_shards, "Shard directory for top-term tables");
  report_cmd->add_option("--periods", rep_periods, "Period scheme (default: 30-year periods 1860-2009)");
  report_cmd->add_option("--bins", rep_opts.histogram_bins, "Histogram bins")->check(CLI::Range(1, 100000));
  report_cmd->add_option("--top-k", rep_opts.top_terms, "Terms per top-terms table");
  common(report_cmd);

  // Config file entries become flags before parsing so flags keep precedence.
  std::vector<std::string> args = raw.empty() ? std::vector<std::string>{"lexbias"} : raw;
  try {
    for (std::size_t i = 1; i + 1 < args.size(); ++i) {
      if (args[i] != "--config") continue;
      CLI::App* sub = nullptr;
      for (auto* s : app.get_subcommands([](CLI::App*) { return true; })) {
        if (s->get_name() == args[1]) sub = s;
      }
      if (sub == nullptr) break;
      auto extra = config_args(*sub, args[i + 1], args);
      args.insert(args.begin() + 2, extra.begin(), extra.end());
      break;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    const auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return 1;
  }

  const auto start = Clock::now();
  CLI::App* active = app.get_subcommands().front();
  report::RunManifest manifest;
  manifest.subcommand = active->get_name();
  manifest.config = resolved_config(active);
  manifest.seed = seed;

  try {
    if (active == ingest) {
      manifest.add_input(ingest_input);
      const auto regions = regions_file.empty() ? corpus::RegionMap::census_default()
                                                : corpus::RegionMap::parse(read_file(regions_file));
      const auto periods = periods_file.empty() ? corpus::PeriodScheme::default_scheme()
                                                : corpus::PeriodScheme::parse(read_file(periods_file));
      if (!regions_file.empty()) manifest.add_input(regions_file);
      if (!periods_file.empty()) manifest.add_input(periods_file);
      corpus::IngestOptions opts;
      opts.preprocess.remove_stopwords = !keep_stopwords;
      opts.preprocess.lemmatize = !no_lemmatize;
      opts.preprocess.lowercase = !keep_case;
      opts.threads = threads;
      const auto result = corpus::ingest(ingest_input, regions, periods, opts);
      manifest.timings["ingest"] = seconds_since(start);
      for (const auto& s : result.shards) {
        manifest.outputs.push_back(corpus::write_shard(s, ingest_out).filename().string());
      }
      write_file(fs::path(ingest_out) / "stats.csv", corpus::stats_csv(corpus::shard_stats(result.shards)));
      json skipped = json::object();
      for (const auto& [reason, n] : result.skipped) skipped[std::string(corpus::skip_reason_name(reason))] = n;
      json summary = {{"schema", "lexbias.ingest_summary/1"},
                      {"records", result.records},
                      {"assigned", result.assigned_total()},
                      {"skipped", skipped},
                      {"diagnostics", result.diagnostics},
                      {"manifest", manifest.id()}};
      write_file(fs::path(ingest_out) / "ingest.json", report::dump(summary));
      manifest.outputs.push_back("stats.csv");
      manifest.outputs.push_back("ingest.json");
      write_manifest(manifest, fs::path(ingest_out) / "manifest.json", start);
      std::cout << result.assigned_total() << " documents in " << result.shards.size() << " shards, "
                << result.skipped_total() << " skipped\n";
    } else if (active == stats) {
      manifest.add_input(stats_shards);
      const auto csv = corpus::stats_csv(corpus::shard_stats(corpus::read_shard_dir(stats_shards)));
      if (stats_out.empty()) {
        std::cout << csv;
      } else {
        write_file(stats_out, csv);
        manifest.outputs.push_back(stats_out);
        write_manifest(manifest, manifest_path_for(stats_out), start);
      }
    } else if (active == train) {
      manifest.add_input(train_shard);
      auto cfg = train_flags.cfg;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.validate();
      const auto shard = corpus::read_shard(train_shard);
      const auto vocab = embedding::build_vocab(shard, cfg.min_count);
      const auto table = embedding::count_cooccurrences(shard, vocab, cfg.window, threads);
      manifest.timings["cooccurrence"] = seconds_since(start);
      const auto emb = embedding::train(table, cfg);
      embedding::save(emb, train_out,
                      train_flags.format == "text" ? embedding::FileFormat::kText
                                                   : embedding::FileFormat::kBinary);
      manifest.outputs.push_back(train_out);
      manifest.config["final_loss"] = emb.metadata().final_loss;
      write_manifest(manifest, manifest_path_for(train_out), start);
      std::cout << emb.size() << " vectors, final loss " << format_number(emb.metadata().final_loss) << "\n";
    } else if (active == weat_cmd) {
      manifest.add_input(weat_emb);
      if (!weat_sets.empty()) manifest.add_input(weat_sets);
      auto cfg = weat_cfg;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.form = to_form(weat_form);
      const auto emb = embedding::load(weat_emb);
      const auto sets = weat::resolve(load_sets(weat_sets), emb);
      auto result = weat::randomization_test(sets, emb, cfg);
      result.key = weat_key.empty() ? key_from_stem(weat_emb) : key_from_stem(weat_key + ".x");
      result.manifest = manifest.id();
      write_file(weat_out, report::dump(weat::to_json(result)));
      manifest.outputs.push_back(weat_out);
      write_manifest(manifest, manifest_path_for(weat_out), start);
      std::cout << "T_obs " << format_number(result.observed) << ", p " << format_number(result.p_value)
                << (result.significant ? ", significant\n" : ", not significant\n");
    } else if (active == mkref) {
      manifest.add_input(ref_shards);
      if (!ref_sets.empty()) manifest.add_input(ref_sets);
      if (!(min_mb > 0.0) || max_mb < min_mb) throw InvalidInput("need 0 < --min-mb <= --max-mb");
      ref_spec.min_bytes = static_cast<std::uint64_t>(min_mb * 1e6);
      ref_spec.max_bytes = static_cast<std::uint64_t>(max_mb * 1e6);
      ref_spec.seed = derive_seed(seed, 0);
      auto tcfg = ref_train.cfg;
      tcfg.threads = threads;
      tcfg.validate();
      auto wcfg = ref_weat;
      wcfg.seed = derive_seed(seed, 2);
      wcfg.threads = threads;
      wcfg.form = to_form(ref_form);
      const auto sets = load_sets(ref_sets);
      const auto corpora = crosscorpus::generate_reference_corpora(corpus::read_shard_dir(ref_shards), ref_spec);
      manifest.timings["generate"] = seconds_since(start);
      std::vector<std::pair<corpus::ShardKey, embedding::EmbeddingSet>> embedded;
      std::vector<std::string> train_warnings;
      for (std::size_t k = 0; k < corpora.size(); ++k) {
        const auto& c = corpora[k];
        if (!ref_corpora_dir.empty()) corpus::write_shard(c, ref_corpora_dir);
        auto cfg = tcfg;
        cfg.seed = derive_seed(derive_seed(seed, 1), k);
        try {
          const auto vocab = embedding::build_vocab(c, cfg.min_count);
          const auto table = embedding::count_cooccurrences(c, vocab, cfg.window, threads);
          embedded.emplace_back(c.key, embedding::train(table, cfg));
        } catch (const InvalidInput& e) {
          train_warnings.push_back(c.key.label() + ": " + e.what());
        }
      }
      manifest.timings["train"] = seconds_since(start);
      auto rep = crosscorpus::reference_distribution(
          embedded, sets, wcfg,
          ref_mode == "absolute" ? crosscorpus::DifferenceMode::kAbsolute : crosscorpus::DifferenceMode::kSigned);
      rep.warnings.insert(rep.warnings.begin(), train_warnings.begin(), train_warnings.end());
      rep.manifest = manifest.id();
      write_file(ref_out, report::dump(crosscorpus::to_json(rep)));
      const fs::path csv = fs::path(ref_out).replace_extension(".csv");
      write_file(csv, crosscorpus::corpus_table_csv(rep));
      manifest.outputs = {ref_out, csv.string()};
      write_manifest(manifest, manifest_path_for(ref_out), start);
      std::cout << rep.reference.size() << " reference differences from " << rep.corpus_stats.size()
                << " corpora, threshold " << format_number(rep.threshold()) << "\n";
    } else if (active == compare) {
      manifest.add_input(cmp_results);
      manifest.add_input(cmp_reference);
      auto rep = crosscorpus::report_from_json(json::parse(read_file(cmp_reference)));
      if (!(cmp_level > 0.0 && cmp_level < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
      rep.level = cmp_level;
      rep.observed.clear();
      const auto inputs = report::load_results(cmp_results);
      std::map<std::string, crosscorpus::NormalizedStat> stats_by_label;
      std::vector<std::string> skipped;
      for (const auto& r : inputs.results) {
        if (!r.normalized) {
          skipped.push_back(r.key.label() + ": normalized statistic undefined");
          continue;
        }
        stats_by_label.emplace(r.key.label(), crosscorpus::normalized_stat(r));
      }
      auto diff = [&](const crosscorpus::NormalizedStat& v, const crosscorpus::NormalizedStat& w) {
        const double d = crosscorpus::stat_difference(v, w);
        return rep.mode == crosscorpus::DifferenceMode::kAbsolute ? std::abs(d) : d;
      };
      auto split_pair = [](const std::string& s) {
        const auto pos = s.find(':');
        if (pos == std::string::npos) throw InvalidInput("expected A:B, got '" + s + "'");
        return std::pair{s.substr(0, pos), s.substr(pos + 1)};
      };
      if (cmp_pairs.empty() && cmp_mean_pairs.empty()) {
        // Default: every region pair within each period, canonical region order.
        std::vector<const crosscorpus::NormalizedStat*> ordered;
        for (const auto& [label, st] : stats_by_label) ordered.push_back(&st);
        std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return corpus::shard_key_less(a->key, b->key); });
        for (std::size_t i = 0; i < ordered.size(); ++i) {
          for (std::size_t j = i + 1; j < ordered.size(); ++j) {
            if (ordered[i]->key.period != ordered[j]->key.period) continue;
            crosscorpus::add_comparison(rep, ordered[i]->key.label() + ":" + ordered[j]->key.label(),
                                        diff(*ordered[i], *ordered[j]));
          }
        }
      }
      for (const auto& p : cmp_pairs) {
        const auto [v, w] = split_pair(p);
        const auto iv = stats_by_label.find(v);
        const auto iw = stats_by_label.find(w);
        if (iv == stats_by_label.end() || iw == stats_by_label.end()) {
          throw InvalidInput("no result with a defined normalized statistic for pair '" + p + "'");
        }
        crosscorpus::add_comparison(rep, p, diff(iv->second, iw->second));
      }
      for (const auto& p : cmp_mean_pairs) {
        const auto [rv, rw] = split_pair(p);
        std::vector<crosscorpus::NormalizedStat> a, b;
        for (const auto& [label, st] : stats_by_label) {
          if (st.key.region != rv) continue;
          const auto other = stats_by_label.find(corpus::ShardKey{rw, st.key.period}.label());
          if (other == stats_by_label.end()) continue;
          a.push_back(st);
          b.push_back(other->second);
        }
        if (a.empty()) throw InvalidInput("regions in '" + p + "' share no period");
        crosscorpus::add_comparison(rep, "mean(" + p + ")", crosscorpus::mean_pairwise_difference(a, b, rep.mode));
      }
      rep.warnings.insert(rep.warnings.end(), skipped.begin(), skipped.end());
      rep.warnings.insert(rep.warnings.end(), inputs.warnings.begin(), inputs.warnings.end());
      rep.manifest = manifest.id();
      write_file(cmp_out, report::dump(crosscorpus::to_json(rep)));
      std::string csv = "comparison,value,significant\n";
      for (const auto& c : rep.observed) {
        csv += c.label + "," + format_number(c.value) + "," + (c.significant ? "yes" : "no") + "\n";
      }
      const fs::path csv_path = fs::path(cmp_out).replace_extension(".csv");
      write_file(csv_path, csv);
      manifest.outputs = {cmp_out, csv_path.string()};
      write_manifest(manifest, manifest_path_for(cmp_out), start);
      std::size_t flagged = 0;
      for (const auto& c : rep.observed) flagged += c.significant ? 1 : 0;
      std::cout << rep.observed.size() << " comparisons, " << flagged << " significant\n";
    } else if (active == synth) {
      synthgen::BiasSpec spec;
      if (!synth_spec.empty()) {
        manifest.add_input(synth_spec);
        json j = json::parse(read_file(synth_spec), nullptr, false);
        if (j.is_discarded()) throw InvalidInput("spec file is not valid JSON");
        if (!j.contains("seed")) j["seed"] = seed;
        spec = synthgen::spec_from_json(j);
      } else {
        spec = synthgen::BiasSpec::standard(synth_beta, synth_docs, seed);
      }
      const auto shard = synthgen::generate(spec);
      write_file(synth_out, corpus::serialize_shard(shard));
      manifest.outputs.push_back(synth_out);
      if (!synth_sets_out.empty()) {
        spec.word_sets().save_dir(synth_sets_out);
        manifest.outputs.push_back(synth_sets_out);
      }
      manifest.config["spec"] = synthgen::to_json(spec);
      write_manifest(manifest, manifest_path_for(synth_out), start);
      std::cout << shard.document_count() << " documents, " << shard.token_count() << " tokens\n";
    } else if (active == sweep_cmd) {
      std::vector<synthgen::BiasSpec> specs;
      if (!sweep_specs.empty()) {
        manifest.add_input(sweep_specs);
        json j = json::parse(read_file(sweep_specs), nullptr, false);
        if (j.is_discarded()) throw InvalidInput("spec file is not valid JSON");
        const json& list = j.is_object() && j.contains("specs") ? j.at("specs") : j;
        if (!list.is_array()) throw InvalidInput("spec file must hold an array of specs");
        for (std::size_t i = 0; i < list.size(); ++i) {
          json s = list[i];
          if (!s.contains("seed")) s["seed"] = derive_seed(seed, i);
          specs.push_back(synthgen::spec_from_json(s));
        }
      }
      for (std::size_t i = 0; i < sweep_betas.size(); ++i) {
        specs.push_back(synthgen::BiasSpec::standard(sweep_betas[i], sweep_docs, derive_seed(seed, i)));
      }
      auto tcfg = sweep_train.cfg;
      tcfg.threads = threads;
      auto wcfg = sweep_weat;
      wcfg.threads = threads;
      wcfg.form = to_form(sweep_form);
      const auto rows = synthgen::sweep(specs, tcfg, wcfg);
      write_file(sweep_out, synthgen::sweep_csv(rows));
      manifest.outputs.push_back(sweep_out);
      write_manifest(manifest, manifest_path_for(sweep_out), start);
      std::cout << rows.size() << " rows\n";
    } else if (active == report_cmd) {
      manifest.add_input(rep_results);
      if (!rep_shards.empty()) manifest.add_input(rep_shards);
      if (!rep_periods.empty()) {
        manifest.add_input(rep_periods);
        rep_opts.periods = corpus::PeriodScheme::parse(read_file(rep_periods)).labels();
      }
      const auto inputs = report::load_results(rep_results);
      const auto shards =
          rep_shards.empty() ? std::vector<corpus::CorpusShard>{} : corpus::read_shard_dir(rep_shards);
      const auto bundle = report::build_report(inputs, shards, rep_opts, manifest.id());
      for (const auto& p : report::write_bundle(bundle, rep_out)) {
        manifest.outputs.push_back(p.filename().string());
      }
      write_manifest(manifest, fs::path(rep_out) / "manifest.json", start);
      std::cout << inputs.results.size() << " results, " << bundle.files.size() << " files\n";
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace lexbias::cli
