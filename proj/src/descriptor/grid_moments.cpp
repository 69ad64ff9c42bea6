#include <charconv>
#include <cmath>
#include <string>

#include "ricb/descriptor.hpp"
#include "ricb/error.hpp"

namespace ricb {

void DescriptorConfig::validate() const {
  if (canvas < 1 || grid < 1 || canvas % grid != 0) {
    throw Error(ErrorCode::ConfigInvalid, "canvas " + std::to_string(canvas) +
                                              " is not divisible into a " +
                                              std::to_string(grid) + "x" +
                                              std::to_string(grid) + " grid");
  }
}

std::string DescriptorConfig::id() const {
  return "gridmoments-c" + std::to_string(canvas) + "-g" + std::to_string(grid);
}

std::optional<DescriptorConfig> DescriptorConfig::from_id(std::string_view id) {
  constexpr std::string_view prefix = "gridmoments-c";
  if (id.substr(0, prefix.size()) != prefix) return std::nullopt;
  id.remove_prefix(prefix.size());
  DescriptorConfig cfg;
  auto r1 = std::from_chars(id.data(), id.data() + id.size(), cfg.canvas);
  if (r1.ec != std::errc{} || r1.ptr + 2 > id.data() + id.size() || r1.ptr[0] != '-' ||
      r1.ptr[1] != 'g') {
    return std::nullopt;
  }
  auto r2 = std::from_chars(r1.ptr + 2, id.data() + id.size(), cfg.grid);
  if (r2.ec != std::errc{} || r2.ptr != id.data() + id.size()) return std::nullopt;
  if (cfg.canvas < 1 || cfg.grid < 1 || cfg.canvas % cfg.grid != 0) return std::nullopt;
  return cfg;
}

FeatureVector extract(const RasterImage& img, const DescriptorConfig& cfg) {
  cfg.validate();
  const RasterImage sized = resize(img, cfg.canvas, cfg.canvas);
  const int cell = cfg.canvas / cfg.grid;
  const double count = static_cast<double>(cell) * cell;

  FeatureVector out;
  out.components.reserve(cfg.dim());
  for (int gy = 0; gy < cfg.grid; ++gy) {
    for (int gx = 0; gx < cfg.grid; ++gx) {
      for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (int y = gy * cell; y < (gy + 1) * cell; ++y)
          for (int x = gx * cell; x < (gx + 1) * cell; ++x) sum += sized.at(x, y, c);
        const double mean = sum / count;
        double ss = 0.0;
        for (int y = gy * cell; y < (gy + 1) * cell; ++y) {
          for (int x = gx * cell; x < (gx + 1) * cell; ++x) {
            double d = sized.at(x, y, c) - mean;
            ss += d * d;
          }
        }
        out.components.push_back(static_cast<float>(mean));
        out.components.push_back(static_cast<float>(std::sqrt(ss / count)));
      }
    }
  }
  return out;
}

}  // namespace ricb
