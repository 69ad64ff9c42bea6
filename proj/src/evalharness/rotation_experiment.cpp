#include <cmath>
#include <numeric>
#include <random>

#include "ricb/error.hpp"
#include "ricb/evalharness.hpp"
#include "ricb/parallel.hpp"

namespace ricb {

namespace {

std::size_t rotated_count(double percent, std::size_t n) {
  return static_cast<std::size_t>(std::floor(percent * static_cast<double>(n) / 100.0 + 1e-9));
}

void check_percentages(const std::vector<double>& percentages) {
  for (double p : percentages) {
    if (!(p >= 0.0 && p <= 100.0)) {
      throw Error(ErrorCode::PercentOutOfRange,
                  "rotation percentage " + std::to_string(p) + " outside [0,100]");
    }
  }
}

}  // namespace

CorruptionPlan plan_corruption(std::size_t n_images, std::uint64_t seed, bool integer_angles) {
  CorruptionPlan plan;
  plan.order.resize(n_images);
  std::iota(plan.order.begin(), plan.order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(plan.order.begin(), plan.order.end(), rng);
  plan.angles.reserve(n_images);
  std::uniform_int_distribution<int> int_angle(0, 359);
  std::uniform_real_distribution<double> real_angle(0.0, 360.0);
  for (std::size_t i = 0; i < n_images; ++i) {
    plan.angles.push_back(integer_angles ? wrap_deg(int_angle(rng)) : wrap_deg(real_angle(rng)));
  }
  return plan;
}

CorruptedSet corrupt(std::span<const LabeledImage> images, const CorruptionPlan& plan,
                     double percent) {
  check_percentages({percent});
  if (plan.order.size() != images.size() || plan.angles.size() != images.size()) {
    throw Error(ErrorCode::InvalidArgument, "corruption plan does not match the image set");
  }
  const std::size_t count = rotated_count(percent, images.size());
  std::vector<AngleDeg> applied(images.size());
  for (std::size_t j = 0; j < count; ++j) applied[plan.order[j]] = plan.angles[plan.order[j]];

  CorruptedSet out;
  out.images.assign(images.begin(), images.end());
  parallel_for(images.size(), [&](std::size_t i) {
    if (applied[i].value() != 0.0) {
      out.images[i].image = rotate(images[i].image, applied[i], Canvas::expand);
    }
  });
  for (std::size_t i = 0; i < images.size(); ++i) out.truth.insert(images[i].id, applied[i]);
  return out;
}

PrecisionReport rotation_experiment(const ExperimentConfig& cfg,
                                    std::span<const LabeledImage> images) {
  check_percentages(cfg.percentages);
  if (cfg.k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (images.empty()) throw Error(ErrorCode::EmptyDataset, "no images");
  cfg.descriptor.validate();
  cfg.estimator.validate();

  PrecisionReport report;
  report.seed = cfg.seed;
  report.k = cfg.k;
  report.metric = cfg.metric;
  report.dataset_size = images.size();

  const CorruptionPlan plan = plan_corruption(images.size(), cfg.seed, cfg.integer_angles);
  const EstimatorConfig without{EstimatorKind::none};
  for (double n : cfg.percentages) {
    CorruptedSet set = corrupt(images, plan, n);
    FeatureBank bank_with = build_bank(set.images, cfg.estimator, &set.truth, cfg.descriptor);
    double p_with = mean_precision(bank_with, set.images, cfg.k, cfg.metric, cfg.estimator,
                                   &set.truth, cfg.descriptor, cfg.include_self);
    FeatureBank bank_without = build_bank(set.images, without, nullptr, cfg.descriptor);
    double p_without = mean_precision(bank_without, set.images, cfg.k, cfg.metric, without,
                                      nullptr, cfg.descriptor, cfg.include_self);
    double with_pct = 100.0 * p_with;
    double without_pct = 100.0 * p_without;
    report.rows.push_back({n, without_pct, with_pct, improvement(with_pct, without_pct)});
  }
  return report;
}

PrecisionReport rotation_experiment(const ExperimentConfig& cfg) {
  check_percentages(cfg.percentages);
  DatasetManifest manifest = ingest_dataset(cfg.dataset_root);
  std::vector<LabeledImage> images(manifest.entries.size());
  parallel_for(manifest.entries.size(), [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    images[i] = {e.id, e.label, e.path.string(), decode_image(e.path)};
  });
  return rotation_experiment(cfg, images);
}

}  // namespace ricb
