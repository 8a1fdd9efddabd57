#include "patchad/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "patchad/errors.hpp"

namespace patchad {

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw InputError("auroc: score and label counts differ");
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw DataError("auroc: non-finite score at index " + std::to_string(i));
    if (labels[i] > 1) throw InputError("auroc: labels must be 0 or 1");
    positives += labels[i];
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw MetricError("auroc is undefined with a single class (" + std::to_string(positives) + " positive, " +
                      std::to_string(negatives) + " negative)");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // sum of 1-based average ranks of the positives
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t tied_pos = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) tied_pos += labels[order[j++]];
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += avg_rank * static_cast<double>(tied_pos);
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double auroc(std::span<const LabeledScore> samples) {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  scores.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.label != 0 && s.label != 1) throw InputError("auroc: labels must be 0 or 1");
    scores.push_back(s.score);
    labels.push_back(static_cast<std::uint8_t>(s.label));
  }
  return auroc(scores, labels);
}

DatasetMetrics evaluate_dataset(std::span<const AnomalyResult> results, std::span<const GroundTruth> truth,
                                bool pixel_metric) {
  if (results.size() != truth.size()) {
    throw InputError("evaluate_dataset: " + std::to_string(results.size()) + " results but " +
                     std::to_string(truth.size()) + " ground-truth entries");
  }
  std::vector<double> image_scores;
  std::vector<std::uint8_t> image_labels;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (truth[i].label != 0 && truth[i].label != 1) throw InputError("evaluate_dataset: labels must be 0 or 1");
    image_scores.push_back(results[i].image_score);
    image_labels.push_back(static_cast<std::uint8_t>(truth[i].label));
  }
  DatasetMetrics metrics;
  metrics.image_auroc = auroc(image_scores, image_labels);
  if (!pixel_metric) return metrics;

  std::vector<double> pixel_scores;
  std::vector<std::uint8_t> pixel_labels;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].pixel_map) throw InputError("image " + std::to_string(i) + " has no pixel map");
    const auto& map = *results[i].pixel_map;
    const auto& mask = truth[i].mask;
    if (!mask && truth[i].label != 0) {
      throw InputError("image " + std::to_string(i) + " is anomalous but has no mask");
    }
    if (mask && (mask->height != map.height || mask->width != map.width)) {
      throw InputError("image " + std::to_string(i) + ": mask " + std::to_string(mask->width) + "x" +
                       std::to_string(mask->height) + " does not match map " + std::to_string(map.width) + "x" +
                       std::to_string(map.height));
    }
    pixel_scores.insert(pixel_scores.end(), map.values.begin(), map.values.end());
    if (mask) {
      pixel_labels.insert(pixel_labels.end(), mask->bits.begin(), mask->bits.end());
    } else {
      pixel_labels.resize(pixel_labels.size() + map.values.size(), 0);
    }
  }
  metrics.pixel_auroc = auroc(pixel_scores, pixel_labels);
  return metrics;
}

BenchmarkRecord benchmark_fps(const Scorer& scorer, std::span<const PatchFeatureSet> queries,
                              std::size_t repetitions, double proportion, std::span<const int> labels) {
  if (queries.empty()) throw InputError("benchmark_fps: no query images");
  if (repetitions < 3) throw ParameterError("benchmark_fps: repetitions must be >= 3");
  if (!labels.empty() && labels.size() != queries.size()) {
    throw InputError("benchmark_fps: label count does not match query count");
  }

  std::vector<double> seconds;
  std::vector<double> image_scores(queries.size());
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t q = 0; q < queries.size(); ++q) image_scores[q] = scorer.score_image(queries[q]).image_score;
    const auto stop = std::chrono::steady_clock::now();
    seconds.push_back(std::max(1e-9, std::chrono::duration<double>(stop - start).count()));
  }
  std::sort(seconds.begin(), seconds.end());
  const double median = seconds.size() % 2 == 1
                            ? seconds[seconds.size() / 2]
                            : (seconds[seconds.size() / 2 - 1] + seconds[seconds.size() / 2]) / 2.0;

  BenchmarkRecord rec;
  rec.method = std::string(to_string(scorer.config().method));
  rec.k = scorer.config().k;
  rec.alpha = scorer.config().alpha;
  rec.proportion = proportion;
  rec.fps = static_cast<double>(queries.size()) / median;
  rec.bank_size = scorer.bank().size();
  if (!labels.empty()) {
    std::vector<LabeledScore> samples;
    for (std::size_t q = 0; q < queries.size(); ++q) samples.push_back({image_scores[q], labels[q]});
    rec.im_auroc = auroc(samples);
  }
  return rec;
}

void write_benchmark_table(std::span<const BenchmarkRecord> records, std::ostream& out, char separator) {
  const char s = separator;
  out << "method" << s << "k" << s << "alpha" << s << "proportion" << s << "bank_size" << s << "im_auroc" << s
      << "pi_auroc" << s << "fps" << '\n';
  for (const auto& r : records) {
    out << r.method << s << r.k << s << r.alpha << s << r.proportion << s << r.bank_size << s;
    if (r.im_auroc) out << *r.im_auroc;
    out << s;
    if (r.pi_auroc) out << *r.pi_auroc;
    out << s << r.fps << '\n';
  }
}

}  // namespace patchad
