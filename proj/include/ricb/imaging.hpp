#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ricb/angle.hpp"

namespace ricb {

/// Decoded RGB image. Row-major, interleaved channels, intensities in [0, 1].
class RasterImage {
 public:
  static constexpr int kChannels = 3;

  RasterImage() = default;
  // Black image. Throws InvalidArgument unless width, height >= 1.
  RasterImage(int width, int height);
  // Throws InvalidArgument on bad dimensions or pixel count.
  RasterImage(int width, int height, std::vector<float> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }

  float at(int x, int y, int c) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  float& at(int x, int y, int c) {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  std::span<const float> pixels() const noexcept { return pixels_; }
  std::span<float> pixels() noexcept { return pixels_; }

  // Throws CorruptImage if any intensity is non-finite or outside [0, 1].
  void validate() const;

  bool operator==(const RasterImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> pixels_;
};

struct Size {
  int width;
  int height;
  bool operator==(const Size&) const = default;
};

enum class Canvas { expand, keep };

// PNG, JPEG or BMP. Grayscale is replicated to RGB; alpha is composited over
// black. Errors: FileNotFound, UnsupportedFormat, CorruptImage.
RasterImage decode_image(const std::filesystem::path& path);
RasterImage decode_image_bytes(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const RasterImage& img);
void write_png(const RasterImage& img, const std::filesystem::path& path);

// Canvas of `expand` rotation: the rotated bounding box, rounded up to the
// nearest size with the same parity as the source so centers stay on the
// pixel grid.
Size expanded_size(int width, int height, AngleDeg theta);

// Counterclockwise rotation about ((w-1)/2, (h-1)/2) with bilinear sampling
// and black fill. Multiples of 90 degrees are exact pixel permutations.
RasterImage rotate(const RasterImage& img, AngleDeg theta, Canvas canvas);

// Undoes a predicted counterclockwise rotation: rotate(img, -predicted, expand).
RasterImage correct_orientation(const RasterImage& img, AngleDeg predicted);

// Size of the image that expand-rotating by theta would turn into `rotated`.
// Exact when `rotated` really came from such a rotation; otherwise the
// nearest solution of the bounding-box equations.
Size source_size_before_expand(Size rotated, AngleDeg theta);

// correct_orientation followed by a center crop back to the frame the image
// had before it was rotated by `predicted`. The identity when predicted is 0.
RasterImage correct_to_frame(const RasterImage& img, AngleDeg predicted);

// Crops a width x height window centered on the image center. Throws
// InvalidArgument if the window is larger than the image.
RasterImage center_crop(const RasterImage& img, int width, int height);

// Bilinear resampling (pixel-center aligned, edge clamped).
RasterImage resize(const RasterImage& img, int width, int height);

struct ArrowStyle {
  double hue = 0.0;         // [0, 1], HSV hue at full saturation and value
  double thickness = 0.05;  // shaft thickness as a fraction of size
  double length = 0.6;      // tip-to-tail length as a fraction of size
  // Offset of the arrow center from the image center, fractions of size,
  // x right and y up.
  double offset_x = 0.0;
  double offset_y = 0.0;
};

// Antialiased arrow (shaft plus one triangular head) on black, pointing in
// direction theta (0 = east, counterclockwise). Deterministic. size >= 32.
RasterImage synth_arrow(AngleDeg theta, int size, const ArrowStyle& style = {});

}  // namespace ricb
