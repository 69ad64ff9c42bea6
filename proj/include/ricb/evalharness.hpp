#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricb/bank.hpp"
#include "ricb/search.hpp"

namespace ricb {

// Hits sharing query_label divided by k (even when fewer than k hits exist).
double precision_at_k(const RetrievalResult& result, std::string_view query_label, std::size_t k);

// Mean precision@k over the queries, each run through the same pipeline as
// the bank. A query whose id is in the bank is excluded from its own result
// unless include_self. Error: EmptyQuerySet.
double mean_precision(const FeatureBank& bank, std::span<const LabeledImage> queries,
                      std::size_t k, Metric m, const EstimatorConfig& est,
                      const GroundTruthTable* gt, const DescriptorConfig& desc,
                      bool include_self);

// Precision with orientation correction minus precision without, in
// percentage points.
double improvement(double p_with, double p_without);

struct ExperimentConfig {
  std::filesystem::path dataset_root;
  std::vector<double> percentages = {0, 5, 10, 20, 50, 100};
  std::size_t k = 20;
  Metric metric = Metric::euclidean;
  EstimatorConfig estimator{EstimatorKind::oracle};  // the "with" arm
  DescriptorConfig descriptor;
  std::uint64_t seed = 0;
  bool include_self = false;
  bool integer_angles = true;  // uniform integers in [0, 359], else reals in [0, 360)
};

struct PrecisionRow {
  double n_percent;
  double precision_without;  // percent
  double precision_with;     // percent
  double improvement;        // percentage points

  bool operator==(const PrecisionRow&) const = default;
};

struct PrecisionReport {
  std::vector<PrecisionRow> rows;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  Metric metric = Metric::euclidean;
  std::size_t dataset_size = 0;

  bool operator==(const PrecisionReport&) const = default;
};

/// Which images get rotated and by how much. Row n rotates the first
/// floor(n * N / 100) entries of `order`, so every row draws from one seeded
/// permutation and one angle per image.
struct CorruptionPlan {
  std::vector<std::size_t> order;
  std::vector<AngleDeg> angles;  // indexed by image, not by order position
};

CorruptionPlan plan_corruption(std::size_t n_images, std::uint64_t seed, bool integer_angles);

struct CorruptedSet {
  std::vector<LabeledImage> images;
  GroundTruthTable truth;  // every id present; 0 for untouched images
};

// Rotates (expand canvas) the images selected for `percent`.
CorruptedSet corrupt(std::span<const LabeledImage> images, const CorruptionPlan& plan,
                     double percent);

// Errors: PercentOutOfRange, InvalidArgument (k = 0), plus anything raised
// while loading or processing images.
PrecisionReport rotation_experiment(const ExperimentConfig& cfg);
PrecisionReport rotation_experiment(const ExperimentConfig& cfg,
                                    std::span<const LabeledImage> images);

// Fraction of m sampled images whose estimated angle is more than
// threshold_deg away from upright. Error: SampleTooLarge.
double estimate_rotated_fraction(const DatasetManifest& manifest, std::size_t m,
                                 const EstimatorConfig& est, const GroundTruthTable* gt,
                                 double threshold_deg, std::uint64_t seed);
double estimate_rotated_fraction(std::span<const LabeledImage> images, std::size_t m,
                                 const EstimatorConfig& est, const GroundTruthTable* gt,
                                 double threshold_deg, std::uint64_t seed);

enum class Arm { with_oad, without_oad };
std::string_view to_string(Arm arm);

struct TimingReport {
  Arm arm = Arm::without_oad;
  std::size_t bank_size = 0;
  std::size_t dim = 0;
  std::size_t k = 0;
  std::size_t sample_size = 0;  // records scanned per query
  std::size_t query_count = 0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  // per-phase means
  double orientation_mean_ms = 0.0;
  double extraction_mean_ms = 0.0;
  double scan_mean_ms = 0.0;
  std::string host;
};

// Per-query wall clock from image in to hits out, after one untimed warm-up
// pass. with_oad adds estimate + correction. With sample_size, every query
// scans one seeded sample_bank of that size. Queries run sequentially.
// Errors: EmptyQuerySet, EmptyBank, InvalidArgument (oracle estimator).
TimingReport timing_benchmark(const FeatureBank& bank, std::span<const LabeledImage> queries,
                              std::size_t k, Metric m, const EstimatorConfig& est,
                              const DescriptorConfig& desc, Arm arm,
                              std::optional<std::size_t> sample_size = std::nullopt,
                              std::uint64_t seed = 0);

std::string host_description();

// n_percent,precision_without,precision_with,improvement
void emit_csv(const PrecisionReport& report, const std::filesystem::path& path);
// arm,bank_size,dim,k,sample_size,mean_ms,median_ms,p95_ms
void emit_csv(std::span<const TimingReport> reports, const std::filesystem::path& path);
std::vector<PrecisionRow> read_precision_csv(const std::filesystem::path& path);

}  // namespace ricb
