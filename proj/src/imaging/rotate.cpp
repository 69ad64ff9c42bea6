#include <algorithm>
#include <cmath>
#include <limits>

#include "ricb/error.hpp"
#include "ricb/imaging.hpp"

namespace ricb {

namespace {

// Bilinear sample with black outside the pixel grid.
void sample_zero_padded(const RasterImage& img, double sx, double sy, float* out) {
  double fx0 = std::floor(sx);
  double fy0 = std::floor(sy);
  int x0 = static_cast<int>(fx0);
  int y0 = static_cast<int>(fy0);
  double fx = sx - fx0;
  double fy = sy - fy0;
  double acc[3] = {0.0, 0.0, 0.0};
  const int xs[2] = {x0, x0 + 1};
  const int ys[2] = {y0, y0 + 1};
  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  for (int j = 0; j < 2; ++j) {
    if (ys[j] < 0 || ys[j] >= img.height() || wy[j] == 0.0) continue;
    for (int i = 0; i < 2; ++i) {
      if (xs[i] < 0 || xs[i] >= img.width() || wx[i] == 0.0) continue;
      double w = wx[i] * wy[j];
      for (int c = 0; c < 3; ++c) acc[c] += w * img.at(xs[i], ys[j], c);
    }
  }
  for (int c = 0; c < 3; ++c) out[c] = std::clamp(static_cast<float>(acc[c]), 0.0f, 1.0f);
}

RasterImage rotate_quarter_turns(const RasterImage& img, int quarter) {
  const int w = img.width();
  const int h = img.height();
  switch (quarter) {
    case 0:
      return img;
    case 2: {
      RasterImage out(w, h);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(w - 1 - x, h - 1 - y, c);
      return out;
    }
    case 1: {
      // source (x, y) lands on (y, w-1-x)
      RasterImage out(h, w);
      for (int y = 0; y < w; ++y)
        for (int x = 0; x < h; ++x)
          for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(w - 1 - y, x, c);
      return out;
    }
    default: {
      // source (x, y) lands on (h-1-y, x)
      RasterImage out(h, w);
      for (int y = 0; y < w; ++y)
        for (int x = 0; x < h; ++x)
          for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(y, h - 1 - x, c);
      return out;
    }
  }
}

int quarter_turns(AngleDeg theta) {
  double v = theta.value();
  if (v == 0.0) return 0;
  if (v == 90.0) return 1;
  if (v == 180.0) return 2;
  if (v == 270.0) return 3;
  return -1;
}

int round_up_to_parity(double extent, int parity_of) {
  int n = static_cast<int>(std::ceil(extent - 1e-9));
  n = std::max(n, 1);
  if ((n - parity_of) % 2 != 0) ++n;
  return n;
}

}  // namespace

Size expanded_size(int width, int height, AngleDeg theta) {
  int q = quarter_turns(theta);
  if (q == 0 || q == 2) return {width, height};
  if (q == 1 || q == 3) return {height, width};
  auto [c, s] = cos_sin_deg(theta.value());
  double a = std::fabs(c);
  double b = std::fabs(s);
  return {round_up_to_parity(width * a + height * b, width),
          round_up_to_parity(width * b + height * a, height)};
}

RasterImage rotate(const RasterImage& img, AngleDeg theta, Canvas canvas) {
  int q = quarter_turns(theta);
  if (q == 0 || q == 2 ||
      (q > 0 && (canvas == Canvas::expand || img.width() == img.height()))) {
    return rotate_quarter_turns(img, q);
  }

  Size out_size = canvas == Canvas::expand ? expanded_size(img.width(), img.height(), theta)
                                           : Size{img.width(), img.height()};
  RasterImage out(out_size.width, out_size.height);
  auto [c, s] = cos_sin_deg(theta.value());
  const double ocx = (out_size.width - 1) / 2.0;
  const double ocy = (out_size.height - 1) / 2.0;
  const double icx = (img.width() - 1) / 2.0;
  const double icy = (img.height() - 1) / 2.0;
  for (int y = 0; y < out_size.height; ++y) {
    double oy = y - ocy;
    for (int x = 0; x < out_size.width; ++x) {
      double ox = x - ocx;
      // inverse of the counterclockwise on-screen rotation (y points down)
      double sx = c * ox - s * oy + icx;
      double sy = s * ox + c * oy + icy;
      sample_zero_padded(img, sx, sy, &out.at(x, y, 0));
    }
  }
  return out;
}

RasterImage correct_orientation(const RasterImage& img, AngleDeg predicted) {
  return rotate(img, wrap_deg(-predicted.value()), Canvas::expand);
}

Size source_size_before_expand(Size rotated, AngleDeg theta) {
  int q = quarter_turns(theta);
  if (q == 0 || q == 2) return rotated;
  if (q == 1 || q == 3) return {rotated.height, rotated.width};

  auto [c, s] = cos_sin_deg(theta.value());
  const double a = std::fabs(c);
  const double b = std::fabs(s);
  const double det = a * a - b * b;
  // rounding up to parity adds about one pixel on average
  const double rw = rotated.width - 1.0;
  const double rh = rotated.height - 1.0;
  double w0, h0;
  if (std::fabs(det) > 0.05) {
    w0 = (a * rw - b * rh) / det;
    h0 = (a * rh - b * rw) / det;
  } else {
    // near 45 degrees the system is singular; assume a square source
    w0 = h0 = 0.5 * (rw + rh) / (a + b);
  }

  Size best{0, 0};
  double best_score = std::numeric_limits<double>::infinity();
  for (int w = 1; w <= rotated.width + rotated.height; ++w) {
    // solve the better-conditioned extent equation for h; rounding up to
    // parity adds less than 2
    double h_guess = a >= b ? (rotated.height - w * b) / a : (rotated.width - w * a) / b;
    int h_lo = std::max(1, static_cast<int>(std::floor(h_guess)) - 3);
    for (int h = h_lo; h <= h_lo + 5; ++h) {
      if (expanded_size(w, h, theta) != rotated) continue;
      // several sources can share one expanded size; lean toward squares
      double score = std::fabs(w - w0) + std::fabs(h - h0) + (w == h ? 0.0 : 1.0);
      if (score < best_score) {
        best_score = score;
        best = {w, h};
      }
    }
  }
  if (best.width > 0) return best;

  auto nearest = [](double v, int parity_of, int limit) {
    int n = static_cast<int>(std::lround(v));
    if ((n - parity_of) % 2 != 0) n += (v > n) ? 1 : -1;
    return std::clamp(n, 1, limit);
  };
  return {nearest(w0, rotated.width, rotated.width + rotated.height),
          nearest(h0, rotated.height, rotated.width + rotated.height)};
}

RasterImage correct_to_frame(const RasterImage& img, AngleDeg predicted) {
  if (predicted.value() == 0.0) return img;
  RasterImage corrected = correct_orientation(img, predicted);
  Size frame = source_size_before_expand({img.width(), img.height()}, predicted);
  return center_crop(corrected, std::min(frame.width, corrected.width()),
                     std::min(frame.height, corrected.height()));
}

}  // namespace ricb
