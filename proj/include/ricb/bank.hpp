#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricb/angle.hpp"
#include "ricb/descriptor.hpp"
#include "ricb/imaging.hpp"
#include "ricb/orientation.hpp"

namespace ricb {

struct RecordMeta {
  std::string id;
  std::string label;
  std::string source_path;
  AngleDeg predicted_angle;

  bool operator==(const RecordMeta&) const = default;
};

struct BankRecord {
  std::string id;
  std::string label;
  std::string source_path;
  AngleDeg predicted_angle;
  FeatureVector vector;
};

/// Immutable collection of feature vectors with per-record metadata.
/// Records are kept sorted by id (byte-wise) and vectors are stored
/// contiguously, row i belonging to meta(i).
class FeatureBank {
 public:
  FeatureBank() = default;

  // Validates (nonempty unique ids, every vector of length dim, finite
  // components) and sorts by id. Errors: InvalidArgument, DimMismatch,
  // NonFinite.
  FeatureBank(std::size_t dim, std::string descriptor_id, std::vector<BankRecord> records);
  static FeatureBank from_rows(std::size_t dim, std::string descriptor_id,
                               std::vector<RecordMeta> metas, std::vector<float> rows);

  std::size_t size() const noexcept { return metas_.size(); }
  bool empty() const noexcept { return metas_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& descriptor_id() const noexcept { return descriptor_id_; }

  const RecordMeta& meta(std::size_t i) const { return metas_[i]; }
  const std::vector<RecordMeta>& metas() const noexcept { return metas_; }
  std::span<const float> vector(std::size_t i) const {
    return std::span<const float>(rows_).subspan(i * dim_, dim_);
  }
  std::span<const float> rows() const noexcept { return rows_; }

  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t label_count() const;

  // Field-exact metadata and bit-exact vectors.
  bool operator==(const FeatureBank& other) const;

 private:
  std::size_t dim_ = 0;
  std::string descriptor_id_;
  std::vector<RecordMeta> metas_;
  std::vector<float> rows_;
};

struct ManifestEntry {
  std::string id;  // "<label>/<filename>"
  std::string label;
  std::filesystem::path path;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

// One entry per regular file in each immediate subdirectory of root, sorted
// by id. Errors: UnreadableDirectory, EmptyDataset.
DatasetManifest ingest_dataset(const std::filesystem::path& root);

struct LabeledImage {
  std::string id;
  std::string label;
  std::string source_path;
  RasterImage image;
};

struct PipelineOutput {
  AngleDeg predicted;
  FeatureVector vector;
};

// estimate -> correct_to_frame -> extract, the per-image path shared by
// database images and queries.
PipelineOutput run_pipeline(const RasterImage& img, const std::string& id,
                            const EstimatorConfig& est, const GroundTruthTable* gt,
                            const DescriptorConfig& desc);

// Runs the pipeline over every image (in parallel, RICB_THREADS) and returns
// the canonical bank. Failures are rethrown with the offending id.
FeatureBank build_bank(const DatasetManifest& manifest, const EstimatorConfig& est,
                       const GroundTruthTable* gt, const DescriptorConfig& desc);
FeatureBank build_bank(std::span<const LabeledImage> images, const EstimatorConfig& est,
                       const GroundTruthTable* gt, const DescriptorConfig& desc);

// `<bank>.manifest.csv`
std::filesystem::path manifest_path_for(const std::filesystem::path& bank_path);

// Binary vector file plus sidecar manifest CSV.
void save_bank(const FeatureBank& bank, const std::filesystem::path& path);
// Errors: FileNotFound, BadMagic, VersionMismatch, DimMismatch, ManifestDesync.
FeatureBank load_bank(const std::filesystem::path& path);
// Same file pair produced elsewhere; predicted angles are reset to 0.
FeatureBank import_embeddings(const std::filesystem::path& vectors_path,
                              const std::filesystem::path& manifest_path);

// Uniform sample of s records without replacement. Error: SampleTooLarge
// (also for s == 0).
FeatureBank sample_bank(const FeatureBank& bank, std::size_t s, std::uint64_t seed);

}  // namespace ricb
