#include <algorithm>
#include <cmath>
#include <vector>

#include "ricb/error.hpp"
#include "ricb/imaging.hpp"

namespace ricb {

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

std::vector<Tap> make_taps(int src, int dst) {
  std::vector<Tap> taps(dst);
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    double pos = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(src - 1));
    int lo = static_cast<int>(std::floor(pos));
    taps[i] = {lo, std::min(lo + 1, src - 1), pos - lo};
  }
  return taps;
}

}  // namespace

RasterImage resize(const RasterImage& img, int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "resize target must be at least 1x1");
  }
  if (width == img.width() && height == img.height()) return img;

  const auto xt = make_taps(img.width(), width);
  const auto yt = make_taps(img.height(), height);
  RasterImage out(width, height);
  for (int y = 0; y < height; ++y) {
    const Tap& ty = yt[y];
    for (int x = 0; x < width; ++x) {
      const Tap& tx = xt[x];
      for (int c = 0; c < 3; ++c) {
        double top = (1.0 - tx.frac) * img.at(tx.lo, ty.lo, c) + tx.frac * img.at(tx.hi, ty.lo, c);
        double bot = (1.0 - tx.frac) * img.at(tx.lo, ty.hi, c) + tx.frac * img.at(tx.hi, ty.hi, c);
        double v = (1.0 - ty.frac) * top + ty.frac * bot;
        out.at(x, y, c) = std::clamp(static_cast<float>(v), 0.0f, 1.0f);
      }
    }
  }
  return out;
}

}  // namespace ricb
