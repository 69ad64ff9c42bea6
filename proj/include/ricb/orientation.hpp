#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ricb/angle.hpp"
#include "ricb/imaging.hpp"

namespace ricb {

enum class EstimatorKind { none, oracle, moments };

std::string_view to_string(EstimatorKind kind);
// Accepts "none", "null", "oracle", "moments". Throws InvalidArgument.
EstimatorKind parse_estimator_kind(std::string_view name);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::none;
  // oracle only
  double noise_sigma_deg = 5.0;
  double gross_error_rate = 0.02;
  std::uint64_t seed = 0;

  // Throws ConfigInvalid on negative sigma or a rate outside [0, 1].
  void validate() const;
};

/// Per-record rotation that was applied to the stored image (0 if none).
class GroundTruthTable {
 public:
  // Throws InvalidArgument if the id is already present.
  void insert(const std::string& id, AngleDeg angle);
  std::optional<AngleDeg> find(const std::string& id) const;
  std::size_t size() const noexcept { return angles_.size(); }
  const std::map<std::string, AngleDeg>& entries() const noexcept { return angles_; }

  // CSV with header `id,angle_deg`.
  void save_csv(const std::filesystem::path& path) const;
  static GroundTruthTable load_csv(const std::filesystem::path& path);

  bool operator==(const GroundTruthTable&) const = default;

 private:
  std::map<std::string, AngleDeg> angles_;
};

// Predicted counterclockwise rotation of `img` away from upright.
//  none    -> 0
//  oracle  -> gt[id] plus Gaussian noise, or with probability
//             gross_error_rate a uniform random angle; the draw depends only
//             on (seed, id).
//  moments -> estimate_moments(img)
// Errors: MissingGroundTruth when the oracle has no entry for id.
AngleDeg estimate(const RasterImage& img, const std::string& id, const EstimatorConfig& cfg,
                  const GroundTruthTable* gt);

// Direction of the principal axis of above-mean luma mass; the end carrying
// more mass (negative projected third moment) is taken as the front.
AngleDeg estimate_moments(const RasterImage& img);

// 64-bit seed derived from a base seed and a record id (FNV-1a + splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id);

}  // namespace ricb
