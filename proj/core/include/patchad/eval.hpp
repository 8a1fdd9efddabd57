#pragma once

// AUROC metrics and engine-only throughput measurement.
//
// AUROC is the Mann-Whitney statistic computed from average ranks, so every
// tied positive/negative pair contributes 0.5. Pixel AUROC pools all pixels
// of all images into one ranking. FPS covers score_image only; feature
// extraction is not part of the timed path.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patchad/image.hpp"
#include "patchad/scoring.hpp"

namespace patchad {

struct LabeledScore {
  double score = 0.0;
  int label = 0;  // 0 normal, 1 anomalous
};

/// Throws MetricError unless both classes are present, DataError on
/// non-finite scores, InputError on labels other than 0/1.
double auroc(std::span<const LabeledScore> samples);
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct GroundTruth {
  int label = 0;
  std::optional<BinaryMask> mask;  // absent means all-normal when label == 0
};

struct DatasetMetrics {
  double image_auroc = 0.0;
  std::optional<double> pixel_auroc;
};

/// Image AUROC over image scores. With `pixel_metric`, every result needs a
/// pixel map and every anomalous image a mask of the same dims (normal images
/// without a mask count as all-zero); otherwise InputError.
DatasetMetrics evaluate_dataset(std::span<const AnomalyResult> results, std::span<const GroundTruth> truth,
                                bool pixel_metric);

struct BenchmarkRecord {
  std::string method;
  std::size_t k = 0;
  double alpha = 0.0;
  double proportion = 1.0;
  std::optional<double> im_auroc;
  std::optional<double> pi_auroc;
  double fps = 0.0;  // images per second, median over repetitions
  std::size_t bank_size = 0;
};

/// Times scorer.score_image over every query `repetitions` (>= 3) times and
/// reports the median. With `labels` (one per query), also fills im_auroc
/// from the last repetition's image scores.
BenchmarkRecord benchmark_fps(const Scorer& scorer, std::span<const PatchFeatureSet> queries,
                              std::size_t repetitions, double proportion = 1.0,
                              std::span<const int> labels = {});

/// Header plus one row per record; missing optionals are empty cells.
void write_benchmark_table(std::span<const BenchmarkRecord> records, std::ostream& out, char separator = '\t');

}  // namespace patchad
