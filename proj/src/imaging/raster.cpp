#include <cmath>
#include <string>

#include "ricb/error.hpp"
#include "ricb/imaging.hpp"

namespace ricb {

namespace {

std::size_t checked_count(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1, got " +
                                                std::to_string(width) + "x" +
                                                std::to_string(height));
  }
  return static_cast<std::size_t>(width) * height * RasterImage::kChannels;
}

}  // namespace

RasterImage::RasterImage(int width, int height)
    : width_(width), height_(height), pixels_(checked_count(width, height), 0.0f) {}

RasterImage::RasterImage(int width, int height, std::vector<float> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != checked_count(width, height)) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer size does not match dimensions");
  }
}

void RasterImage::validate() const {
  for (float v : pixels_) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      throw Error(ErrorCode::CorruptImage, "intensity outside [0,1]");
    }
  }
}

RasterImage center_crop(const RasterImage& img, int width, int height) {
  if (width > img.width() || height > img.height()) {
    throw Error(ErrorCode::InvalidArgument, "crop window larger than image");
  }
  RasterImage out(width, height);
  int x0 = (img.width() - width) / 2;
  int y0 = (img.height() - height) / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < RasterImage::kChannels; ++c) {
        out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
      }
    }
  }
  return out;
}

}  // namespace ricb
