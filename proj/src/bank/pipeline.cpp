#include "ricb/bank.hpp"
#include "ricb/error.hpp"
#include "ricb/parallel.hpp"

namespace ricb {

namespace {

template <typename Fn>
auto with_id(const std::string& id, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "[" + id + "] " + e.detail());
  }
}

}  // namespace

PipelineOutput run_pipeline(const RasterImage& img, const std::string& id,
                            const EstimatorConfig& est, const GroundTruthTable* gt,
                            const DescriptorConfig& desc) {
  AngleDeg predicted = estimate(img, id, est, gt);
  if (predicted.value() == 0.0) return {predicted, extract(img, desc)};
  return {predicted, extract(correct_to_frame(img, predicted), desc)};
}

FeatureBank build_bank(std::span<const LabeledImage> images, const EstimatorConfig& est,
                       const GroundTruthTable* gt, const DescriptorConfig& desc) {
  desc.validate();
  est.validate();
  std::vector<BankRecord> records(images.size());
  parallel_for(images.size(), [&](std::size_t i) {
    const LabeledImage& item = images[i];
    records[i] = with_id(item.id, [&] {
      PipelineOutput out = run_pipeline(item.image, item.id, est, gt, desc);
      return BankRecord{item.id, item.label, item.source_path, out.predicted,
                        std::move(out.vector)};
    });
  });
  return FeatureBank(desc.dim(), desc.id(), std::move(records));
}

FeatureBank build_bank(const DatasetManifest& manifest, const EstimatorConfig& est,
                       const GroundTruthTable* gt, const DescriptorConfig& desc) {
  if (manifest.entries.empty()) throw Error(ErrorCode::EmptyDataset, "manifest is empty");
  desc.validate();
  est.validate();
  std::vector<BankRecord> records(manifest.entries.size());
  parallel_for(manifest.entries.size(), [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    records[i] = with_id(entry.id, [&] {
      RasterImage img = decode_image(entry.path);
      PipelineOutput out = run_pipeline(img, entry.id, est, gt, desc);
      return BankRecord{entry.id, entry.label, entry.path.string(), out.predicted,
                        std::move(out.vector)};
    });
  });
  return FeatureBank(desc.dim(), desc.id(), std::move(records));
}

}  // namespace ricb
