#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "patchad/coreset.hpp"
#include "patchad/defect_config.hpp"
#include "patchad/defectmaker.hpp"
#include "patchad/errors.hpp"
#include "patchad/eval.hpp"
#include "patchad/feature_bank.hpp"
#include "patchad/image.hpp"
#include "patchad/manifest.hpp"
#include "patchad/rng.hpp"
#include "patchad/scoring.hpp"
#include "patchad/tensor_io.hpp"

namespace patchad::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::string_view kH2Suffix = ".h2.rebf";
constexpr std::string_view kH3Suffix = ".h3.rebf";
constexpr std::string_view kMapSuffix = ".map.rebf";

// ---------------------------------------------------------------- helpers

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Sorted stems of regular files in `dir` whose names end in `suffix`.
std::vector<std::string> stems_with_suffix(const fs::path& dir, std::string_view suffix) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + ": not a directory");
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (ends_with(name, suffix)) stems.push_back(name.substr(0, name.size() - suffix.size()));
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

struct FeatureSets {
  std::vector<std::string> stems;
  std::vector<PatchFeatureSet> sets;
};

/// Pairs `<stem>.h2.rebf` with `<stem>.h3.rebf` and aggregates each pair.
FeatureSets load_features(const fs::path& dir, std::size_t pool_window) {
  FeatureSets out;
  out.stems = stems_with_suffix(dir, kH2Suffix);
  if (out.stems.empty()) throw EmptinessError(dir.string() + ": no *" + std::string(kH2Suffix) + " feature files");
  for (const auto& stem : out.stems) {
    const fs::path h3 = dir / (stem + std::string(kH3Suffix));
    if (!fs::exists(h3)) throw InputError(h3.string() + ": missing hierarchy-3 tensor for " + stem);
    out.sets.push_back(
        aggregate_hierarchies(load_tensor(dir / (stem + std::string(kH2Suffix))), load_tensor(h3), pool_window));
  }
  return out;
}

std::vector<fs::path> image_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".ppm" || ext == ".pgm" || ext == ".pnm")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string image_stem(const std::string& path) { return fs::path(path).stem().string(); }

const CLI::Validator kProportion(
    [](std::string& v) {
      double p = 0.0;
      if (!CLI::detail::lexical_cast(v, p) || !(p > 0.0 && p <= 1.0)) {
        return "proportion must lie in (0, 1], got " + v;
      }
      return std::string{};
    },
    "(0,1]");

void require(const CLI::Option* opt) {
  if (opt->count() == 0) throw UsageError("--" + opt->get_single_name() + " is required");
}

std::ostream& precise(std::ostream& os) { return os << std::setprecision(17); }

// ------------------------------------------------------------ run config

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Flat `key = value` lines; `#` starts a comment. Keys are long flag names
/// without the leading dashes.
std::map<std::string, std::string> parse_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path.string() + ": cannot open run config");
  std::map<std::string, std::string> kv;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void collect_names(const CLI::App& app, std::set<std::string>& names) {
  for (const CLI::Option* opt : app.get_options()) names.insert(opt->get_single_name());
  for (const CLI::App* sub : app.get_subcommands({})) collect_names(*sub, names);
}

/// Fills options the command line left unset, in the active subcommand chain.
void apply_run_config(const std::map<std::string, std::string>& kv, const CLI::App& root,
                      const std::vector<CLI::App*>& chain) {
  std::set<std::string> known;
  collect_names(root, known);
  for (const auto& [key, value] : kv) {
    if (!known.count(key)) throw UsageError("run config: unknown key '" + key + "'");
  }
  for (CLI::App* app : chain) {
    for (CLI::Option* opt : app->get_options()) {
      const auto it = kv.find(opt->get_single_name());
      if (it == kv.end() || opt->count() > 0 || opt->get_single_name() == "run-config") continue;
      opt->add_result(it->second);
      opt->run_callback();
    }
  }
}

// ------------------------------------------------------------ subcommands

struct SynthArgs {
  fs::path input_dir, saliency_dir, out_dir, config;
  std::size_t count = 100;
};

void cmd_synth(const SynthArgs& a, bool with_saliency, bool with_config, std::uint64_t seed, std::ostream& out) {
  const DefectConfig cfg = with_config ? load_defect_config(a.config) : DefectConfig{};
  cfg.validate();
  const auto files = image_files(a.input_dir);
  if (files.empty()) throw EmptinessError(a.input_dir.string() + ": no .ppm/.pgm/.pnm images");

  std::vector<Image> images;
  std::vector<std::optional<BinaryMask>> saliency;
  for (const auto& f : files) {
    images.push_back(read_pnm(f));
    if (!with_saliency) {
      saliency.emplace_back();
      continue;
    }
    const fs::path mask_path = a.saliency_dir / (f.stem().string() + ".pgm");
    BinaryMask m = read_mask(mask_path);
    if (m.height != images.back().height || m.width != images.back().width) {
      throw DimensionError(mask_path.string() + ": saliency mask size differs from its image");
    }
    saliency.emplace_back(std::move(m));
  }

  fs::create_directories(a.out_dir);
  std::vector<SampleManifestRow> rows;
  std::size_t defects = 0;
  for (std::size_t i = 0; i < a.count; ++i) {
    const std::size_t src = i % images.size();
    // cut-paste donor: the next image of the same split, or the image itself
    const Image* donor = images.size() > 1 ? &images[(src + 1) % images.size()] : nullptr;
    Rng rng(derive_seed(seed, i));
    const SynthSample s =
        make_sample(images[src], saliency[src] ? &*saliency[src] : nullptr, donor, cfg, rng);

    std::ostringstream name;
    name << files[src].stem().string() << '_' << std::setw(5) << std::setfill('0') << i;
    const std::string image_name = name.str() + (s.image.channels == 3 ? ".ppm" : ".pgm");
    write_pnm(s.image, a.out_dir / image_name);
    std::string mask_name;
    if (s.label != 0) {
      mask_name = name.str() + "_mask.pgm";
      write_mask(s.mask, a.out_dir / mask_name);
      ++defects;
    }
    rows.push_back({image_name, s.label, mask_name});
  }
  save_manifest(rows, a.out_dir / "synth.rebm");
  out << "synth: " << a.count << " samples (" << defects << " defective) -> " << (a.out_dir / "synth.rebm").string()
      << '\n';
}

struct BankArgs {
  fs::path features_dir, bank, out;
  std::size_t pool_window = kDefaultPoolWindow;
  std::size_t k = 9;
};

void cmd_bank_build(const BankArgs& a, std::ostream& out) {
  const auto features = load_features(a.features_dir, a.pool_window);
  const MemoryBank bank = build_memory_bank(features.sets);
  save_memory_bank(bank, a.out);
  out << "bank: " << bank.size() << " x " << bank.dim() << " from " << features.sets.size() << " images\n";
}

void cmd_bank_density(const BankArgs& a, std::ostream& out) {
  const LocalDensityBank ld = learn_local_density(load_memory_bank(a.bank), a.k);
  save_bank(ld, a.out);
  out << "density: K = " << a.k << " over " << ld.size() << " entries\n";
}

struct CoresetArgs {
  fs::path bank, out, indices_out;
  double proportion = 0.1;
  std::size_t seed_index = 0;
};

void cmd_coreset(const CoresetArgs& a, bool with_indices, std::ostream& out) {
  const MemoryBank bank = load_memory_bank(a.bank);
  const CoresetSelection sel = greedy_kcenter(bank, a.proportion, a.seed_index);
  save_memory_bank(select_entries(bank, sel), a.out);
  if (with_indices) save_index_list(sel, a.indices_out);
  out << "coreset: " << sel.indices.size() << " of " << bank.size() << " entries\n";
}

struct ScoreArgs {
  fs::path bank, features_dir, out, maps_dir, truth;
  std::string method = "ldknn";
  std::size_t k = 9;
  double alpha = 1.0;
  std::size_t pool_window = kDefaultPoolWindow;
  std::size_t map_height = 0, map_width = 0;
  double sigma = 4.0;
  std::vector<double> proportions{1.0};
  std::size_t repetitions = 3;
  std::size_t seed_index = 0;
};

/// Bank for scoring. LDKNN reuses stored densities when their K matches
/// (or no K was given) and learns them otherwise.
struct LoadedBank {
  std::unique_ptr<MemoryBank> plain;
  std::unique_ptr<LocalDensityBank> dense;

  std::unique_ptr<Scorer> scorer(const ScorerConfig& cfg) const {
    return dense ? std::make_unique<Scorer>(*dense, cfg) : std::make_unique<Scorer>(*plain, cfg);
  }
  std::size_t size() const { return dense ? dense->size() : plain->size(); }
};

LoadedBank load_for_scoring(const fs::path& path, ScoringMethod method, std::size_t k, bool k_given) {
  LoadedBank b;
  if (method != ScoringMethod::kLdknn) {
    b.plain = std::make_unique<MemoryBank>(load_memory_bank(path));
    return b;
  }
  try {
    auto ld = load_bank(path);
    if (!k_given || ld.k_used() == k) {
      b.dense = std::make_unique<LocalDensityBank>(std::move(ld));
      return b;
    }
  } catch (const ConsistencyError&) {
    // plain bank: densities are learned below
  }
  b.dense = std::make_unique<LocalDensityBank>(learn_local_density(load_memory_bank(path), k));
  return b;
}

void cmd_score(const ScoreArgs& a, bool k_given, bool with_maps, std::ostream& out) {
  const ScorerConfig cfg{parse_scoring_method(a.method), a.k, a.alpha};
  if (with_maps && (a.map_height == 0 || a.map_width == 0)) {
    throw UsageError("--maps-dir needs --map-height and --map-width");
  }
  const LoadedBank bank = load_for_scoring(a.bank, cfg.method, a.k, k_given);
  const auto scorer = bank.scorer(cfg);
  const auto features = load_features(a.features_dir, a.pool_window);
  std::optional<MapRequest> request;
  if (with_maps) {
    request = MapRequest{a.map_height, a.map_width, a.sigma};
    fs::create_directories(a.maps_dir);
  }

  std::ofstream file;
  std::ostream* dst = &out;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IoError(a.out.string() + ": cannot open for writing");
    dst = &file;
  }
  precise(*dst) << "image\tscore\n";
  for (std::size_t i = 0; i < features.sets.size(); ++i) {
    const AnomalyResult r = scorer->score_image(features.sets[i], request);
    *dst << features.stems[i] << '\t' << r.image_score << '\n';
    if (r.pixel_map) {
      const auto& m = *r.pixel_map;
      RawTensor t{{static_cast<std::uint32_t>(m.height), static_cast<std::uint32_t>(m.width)},
                  std::vector<float>(m.values.begin(), m.values.end())};
      save_raw_tensor(t, a.maps_dir / (features.stems[i] + std::string(kMapSuffix)));
    }
  }
  if (!*dst) throw IoError("failed writing scores");
}

/// `image<TAB>score` rows with a header line.
std::map<std::string, double> read_scores(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open scores");
  std::map<std::string, double> scores;
  std::string line;
  std::getline(in, line);  // header
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected image<TAB>score");
    }
    try {
      scores[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
    } catch (const std::logic_error&) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": bad score value");
    }
  }
  return scores;
}

struct EvalArgs {
  fs::path scores, truth, maps_dir, out;
};

void cmd_eval(const EvalArgs& a, bool pixel, std::ostream& out) {
  const auto scores = read_scores(a.scores);
  // only masks are read; image files need not be present
  const auto rows = load_manifest(a.truth, kSynthClassCount, false);
  const fs::path base = a.truth.parent_path();
  std::vector<AnomalyResult> results;
  std::vector<GroundTruth> truth;
  for (const auto& row : rows) {
    const std::string stem = image_stem(row.image_path);
    const auto it = scores.find(stem);
    if (it == scores.end()) throw InputError(a.scores.string() + ": no score for image " + stem);
    AnomalyResult r;
    r.image_score = it->second;
    GroundTruth g{row.label != 0 ? 1 : 0, std::nullopt};
    if (pixel) {
      const RawTensor t = load_raw_tensor(a.maps_dir / (stem + std::string(kMapSuffix)));
      if (t.dims.size() != 2) throw DimensionError(stem + ": anomaly map must be rank 2");
      r.pixel_map = PixelMap{t.dims[0], t.dims[1], std::vector<double>(t.data.begin(), t.data.end())};
      if (!row.mask_path.empty()) g.mask = read_mask(base / row.mask_path);
    }
    results.push_back(std::move(r));
    truth.push_back(std::move(g));
  }
  const DatasetMetrics m = evaluate_dataset(results, truth, pixel);

  std::ostringstream report;
  precise(report) << "images\t" << results.size() << "\nimage_auroc\t" << m.image_auroc << '\n';
  if (m.pixel_auroc) report << "pixel_auroc\t" << *m.pixel_auroc << '\n';
  out << report.str();
  if (!a.out.empty()) {
    std::ofstream file(a.out);
    if (!(file << report.str())) throw IoError(a.out.string() + ": cannot write report");
  }
}

void cmd_bench(const ScoreArgs& a, bool with_truth, std::ostream& out) {
  const ScorerConfig cfg{parse_scoring_method(a.method), a.k, a.alpha};
  const MemoryBank full = load_memory_bank(a.bank);
  const auto features = load_features(a.features_dir, a.pool_window);

  std::vector<int> labels;
  if (with_truth) {
    std::map<std::string, int> by_stem;
    for (const auto& row : load_manifest(a.truth, kSynthClassCount, false)) {
      by_stem[image_stem(row.image_path)] = row.label != 0 ? 1 : 0;
    }
    for (const auto& stem : features.stems) {
      const auto it = by_stem.find(stem);
      if (it == by_stem.end()) throw InputError(a.truth.string() + ": no label for image " + stem);
      labels.push_back(it->second);
    }
  }

  std::vector<BenchmarkRecord> records;
  for (double p : a.proportions) {
    const MemoryBank reduced = p == 1.0 ? full : select_entries(full, greedy_kcenter(full, p, a.seed_index));
    if (cfg.method == ScoringMethod::kLdknn) {
      // densities are learned on the subsampled bank
      const LocalDensityBank ld = learn_local_density(reduced, a.k);
      records.push_back(benchmark_fps(Scorer(ld, cfg), features.sets, a.repetitions, p, labels));
    } else {
      records.push_back(benchmark_fps(Scorer(reduced, cfg), features.sets, a.repetitions, p, labels));
    }
  }

  if (a.out.empty()) {
    write_benchmark_table(records, out);
    return;
  }
  std::ofstream file(a.out);
  if (!file) throw IoError(a.out.string() + ": cannot open for writing");
  write_benchmark_table(records, file);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"patchad: local-density patch anomaly scoring and synthetic defect generation", "patchad"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  fs::path run_config;
  app.add_option("--seed", seed, "Master seed for every random draw")->capture_default_str();
  auto* run_config_opt = app.add_option("--run-config", run_config, "Flat key = value file; flags override it");

  // synth
  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate DefectMaker samples and a .rebm manifest");
  auto* synth_in = synth_cmd->add_option("--input-dir", synth.input_dir, "Directory of .ppm/.pgm images");
  auto* synth_sal = synth_cmd->add_option("--saliency-dir", synth.saliency_dir, "Masks named <stem>.pgm");
  auto* synth_out = synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory");
  auto* synth_cfg = synth_cmd->add_option("--config", synth.config, "DefectConfig key = value file");
  synth_cmd->add_option("--count", synth.count, "Number of samples")->capture_default_str()->check(CLI::PositiveNumber);

  // bank build / bank density
  BankArgs bank;
  auto* bank_cmd = app.add_subcommand("bank", "Build memory banks and learn local densities");
  bank_cmd->require_subcommand(1);
  auto* build_cmd = bank_cmd->add_subcommand("build", "Aggregate <stem>.h2.rebf/.h3.rebf pairs into a bank");
  auto* build_dir = build_cmd->add_option("--features-dir", bank.features_dir, "Feature tensor directory");
  build_cmd->add_option("--pool-window", bank.pool_window, "Mean-pool window")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  auto* build_out = build_cmd->add_option("--out", bank.out, "Output bank file");
  auto* density_cmd = bank_cmd->add_subcommand("density", "Learn per-entry local densities");
  auto* density_in = density_cmd->add_option("--bank", bank.bank, "Input bank file");
  density_cmd->add_option("--k", bank.k, "Neighbors per density")->capture_default_str()->check(CLI::PositiveNumber);
  auto* density_out = density_cmd->add_option("--out", bank.out, "Output bank file");

  // coreset
  CoresetArgs coreset;
  auto* coreset_cmd = app.add_subcommand("coreset", "Greedy k-center subsampling of a bank");
  auto* coreset_in = coreset_cmd->add_option("--bank", coreset.bank, "Input bank file");
  coreset_cmd->add_option("--proportion", coreset.proportion, "Kept fraction in (0, 1]")
      ->capture_default_str()
      ->check(kProportion);
  coreset_cmd->add_option("--seed-index", coreset.seed_index, "First selected entry")->capture_default_str();
  auto* coreset_out = coreset_cmd->add_option("--out", coreset.out, "Output bank file");
  auto* coreset_idx = coreset_cmd->add_option("--indices-out", coreset.indices_out, "Selected indices, one per line");

  // score / bench share scorer flags
  ScoreArgs score;
  ScoreArgs bench;
  auto add_scorer_flags = [](CLI::App* cmd, ScoreArgs& s) {
    cmd->add_option("--method", s.method, "ldknn, knn, kthnn, lof or ldof")->capture_default_str();
    auto* k = cmd->add_option("--k", s.k, "Neighbor count")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", s.alpha, "Local density coefficient (LDKNN)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--pool-window", s.pool_window, "Mean-pool window")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    return k;
  };
  auto* score_cmd = app.add_subcommand("score", "Score test feature tensors against a bank");
  auto* score_bank = score_cmd->add_option("--bank", score.bank, "Bank file");
  auto* score_dir = score_cmd->add_option("--features-dir", score.features_dir, "Test feature tensor directory");
  auto* score_k = add_scorer_flags(score_cmd, score);
  score_cmd->add_option("--out", score.out, "Score table (default: standard output)");
  auto* score_maps = score_cmd->add_option("--maps-dir", score.maps_dir, "Write <stem>.map.rebf anomaly maps");
  score_cmd->add_option("--map-height", score.map_height, "Anomaly map height in pixels");
  score_cmd->add_option("--map-width", score.map_width, "Anomaly map width in pixels");
  score_cmd->add_option("--sigma", score.sigma, "Gaussian smoothing of maps, 0 disables")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  // eval
  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Image and pixel AUROC from score tables and maps");
  auto* eval_scores = eval_cmd->add_option("--scores", eval.scores, "Score table from `score`");
  auto* eval_truth = eval_cmd->add_option("--truth", eval.truth, ".rebm manifest with labels and masks");
  auto* eval_maps = eval_cmd->add_option("--maps-dir", eval.maps_dir, "Anomaly maps; enables pixel AUROC");
  eval_cmd->add_option("--out", eval.out, "Also write the report here");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Engine FPS and AUROC across coreset proportions");
  auto* bench_bank = bench_cmd->add_option("--bank", bench.bank, "Full bank file");
  auto* bench_dir = bench_cmd->add_option("--features-dir", bench.features_dir, "Query feature tensor directory");
  add_scorer_flags(bench_cmd, bench);
  bench_cmd->add_option("--proportions", bench.proportions, "Comma-separated coreset proportions")
      ->delimiter(',')
      ->capture_default_str()
      ->check(kProportion);
  bench_cmd->add_option("--repetitions", bench.repetitions, "Timed passes, median reported (>= 3)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{3}, std::size_t{1000000}));
  bench_cmd->add_option("--seed-index", bench.seed_index, "First coreset entry")->capture_default_str();
  auto* bench_truth = bench_cmd->add_option("--truth", bench.truth, ".rebm manifest; enables image AUROC");
  bench_cmd->add_option("--out", bench.out, "Table file (default: standard output)");

  try {
    app.parse(argc, argv);
    std::vector<CLI::App*> chain{&app};
    for (CLI::App* a = &app; !a->get_subcommands().empty();) {
      a = a->get_subcommands().front();
      chain.push_back(a);
    }
    if (run_config_opt->count() > 0) apply_run_config(parse_run_config(run_config), app, chain);

    if (synth_cmd->parsed()) {
      require(synth_in);
      require(synth_out);
      cmd_synth(synth, synth_sal->count() > 0, synth_cfg->count() > 0, seed, out);
    } else if (build_cmd->parsed()) {
      require(build_dir);
      require(build_out);
      cmd_bank_build(bank, out);
    } else if (density_cmd->parsed()) {
      require(density_in);
      require(density_out);
      cmd_bank_density(bank, out);
    } else if (coreset_cmd->parsed()) {
      require(coreset_in);
      require(coreset_out);
      cmd_coreset(coreset, coreset_idx->count() > 0, out);
    } else if (score_cmd->parsed()) {
      require(score_bank);
      require(score_dir);
      cmd_score(score, score_k->count() > 0, score_maps->count() > 0, out);
    } else if (eval_cmd->parsed()) {
      require(eval_scores);
      require(eval_truth);
      cmd_eval(eval, eval_maps->count() > 0, out);
    } else if (bench_cmd->parsed()) {
      require(bench_bank);
      require(bench_dir);
      cmd_bench(bench, bench_truth->count() > 0, out);
    }
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "patchad: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "patchad: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "patchad: error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "patchad: error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace patchad::cli
