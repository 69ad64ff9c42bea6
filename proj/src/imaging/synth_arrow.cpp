#include <algorithm>
#include <cmath>
#include <string>

#include "ricb/error.hpp"
#include "ricb/imaging.hpp"

namespace ricb {

namespace {

constexpr int kSuper = 8;  // supersamples per axis

struct Rgb {
  float r, g, b;
};

Rgb hue_to_rgb(double hue) {
  double h = hue - std::floor(hue);
  double h6 = h * 6.0;
  int sector = static_cast<int>(h6) % 6;
  float f = static_cast<float>(h6 - std::floor(h6));
  switch (sector) {
    case 0: return {1.0f, f, 0.0f};
    case 1: return {1.0f - f, 1.0f, 0.0f};
    case 2: return {0.0f, 1.0f, f};
    case 3: return {0.0f, 1.0f - f, 1.0f};
    case 4: return {f, 0.0f, 1.0f};
    default: return {1.0f, 0.0f, 1.0f - f};
  }
}

// Arrow in its own frame: u along the pointing direction, v across.
struct ArrowShape {
  double half_length;
  double head_length;
  double half_shaft;
  double head_half_width;

  bool contains(double u, double v) const {
    double av = std::fabs(v);
    double head_base = half_length - head_length;
    if (u < -half_length || u > half_length) return false;
    if (u <= head_base) return av <= half_shaft;
    return av <= head_half_width * (half_length - u) / head_length || av <= half_shaft;
  }
};

}  // namespace

RasterImage synth_arrow(AngleDeg theta, int size, const ArrowStyle& style) {
  if (size < 32) throw Error(ErrorCode::InvalidArgument, "arrow size must be >= 32");
  if (!(style.thickness > 0.0) || !(style.length > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "arrow thickness and length must be positive");
  }

  const double length = style.length * size;
  const ArrowShape shape{length / 2.0, 0.35 * length, style.thickness * size / 2.0,
                         0.25 * length};
  const Rgb color = hue_to_rgb(style.hue);
  const auto [c, s] = cos_sin_deg(theta.value());
  const double cx = (size - 1) / 2.0 + style.offset_x * size;
  const double cy = (size - 1) / 2.0 - style.offset_y * size;

  double offsets[kSuper];
  for (int i = 0; i < kSuper; ++i) offsets[i] = (2.0 * i + 1.0) / (2.0 * kSuper) - 0.5;

  RasterImage out(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      int covered = 0;
      for (double oy : offsets) {
        double Y = -((y + oy) - cy);
        for (double ox : offsets) {
          double X = (x + ox) - cx;
          // rotate the sample into the arrow frame by -theta
          double u = c * X + s * Y;
          double v = -s * X + c * Y;
          if (shape.contains(u, v)) ++covered;
        }
      }
      if (covered == 0) continue;
      float cov = static_cast<float>(covered) / (kSuper * kSuper);
      out.at(x, y, 0) = cov * color.r;
      out.at(x, y, 1) = cov * color.g;
      out.at(x, y, 2) = cov * color.b;
    }
  }
  return out;
}

}  // namespace ricb
