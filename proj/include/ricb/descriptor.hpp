#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricb/imaging.hpp"

namespace ricb {

struct FeatureVector {
  std::vector<float> components;

  std::size_t dim() const noexcept { return components.size(); }
  std::span<const float> view() const noexcept { return components; }
  bool operator==(const FeatureVector&) const = default;
};

/// Grid-moments descriptor: the image is resized to canvas x canvas, cut into
/// grid x grid cells, and every cell contributes mean and population
/// standard deviation of each RGB channel. Defaults give 1536 dimensions.
struct DescriptorConfig {
  int canvas = 224;
  int grid = 16;

  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(grid) * grid * 3 * 2;
  }
  // Throws ConfigInvalid unless canvas, grid >= 1 and grid divides canvas.
  void validate() const;

  // Tag stored in banks, e.g. "gridmoments-c224-g16".
  std::string id() const;
  static std::optional<DescriptorConfig> from_id(std::string_view id);

  bool operator==(const DescriptorConfig&) const = default;
};

// Component order is (cell_y, cell_x, channel, stat) with stat 0 = mean,
// 1 = standard deviation.
FeatureVector extract(const RasterImage& img, const DescriptorConfig& cfg);

}  // namespace ricb
