#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ricb/bank.hpp"

namespace ricb {

// Desk-scale stand-in for a category-directory image dataset. Every image is
// an upright (east-pointing) arrow; a class is the arrow's position on a
// ring around the image center, so a rotated image lands in another class's
// spot. Hue, size and position jitter vary per image.
struct SynthDatasetConfig {
  int classes = 10;
  int per_class = 40;
  int size = 64;
  std::uint64_t seed = 7;
};

std::vector<LabeledImage> make_arrow_dataset(const SynthDatasetConfig& cfg);

// Writes <root>/<label>/<file>.png for every image (ids are "<label>/<file>")
// and returns the images with source_path filled in.
std::vector<LabeledImage> write_dataset(std::span<const LabeledImage> images,
                                        const std::filesystem::path& root);

}  // namespace ricb
