#include <algorithm>
#include <cmath>
#include <vector>
#include <numbers>
#include <random>

#include "ricb/error.hpp"
#include "ricb/orientation.hpp"

namespace ricb {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::none: return "none";
    case EstimatorKind::oracle: return "oracle";
    case EstimatorKind::moments: return "moments";
  }
  return "none";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "none" || name == "null") return EstimatorKind::none;
  if (name == "oracle") return EstimatorKind::oracle;
  if (name == "moments") return EstimatorKind::moments;
  throw Error(ErrorCode::InvalidArgument, "unknown estimator '" + std::string(name) + "'");
}

void EstimatorConfig::validate() const {
  if (!(noise_sigma_deg >= 0.0) || !std::isfinite(noise_sigma_deg)) {
    throw Error(ErrorCode::ConfigInvalid, "noise_sigma_deg must be finite and >= 0");
  }
  if (!(gross_error_rate >= 0.0 && gross_error_rate <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "gross_error_rate must lie in [0,1]");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AngleDeg estimate_moments(const RasterImage& img) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> luma(n);
  double mean = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
      luma[static_cast<std::size_t>(y) * w + x] = v;
      mean += v;
    }
  }
  mean /= static_cast<double>(n);

  // math frame: X right, Y up
  double mass = 0.0, sx = 0.0, sy = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = std::max(luma[static_cast<std::size_t>(y) * w + x] - mean, 0.0);
      mass += m;
      sx += m * x;
      sy += m * -y;
    }
  }
  if (mass <= 0.0) return AngleDeg{};
  const double cx = sx / mass;
  const double cy = sy / mass;

  double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = std::max(luma[static_cast<std::size_t>(y) * w + x] - mean, 0.0);
      if (m == 0.0) continue;
      double dx = x - cx;
      double dy = -y - cy;
      mu20 += m * dx * dx;
      mu02 += m * dy * dy;
      mu11 += m * dx * dy;
    }
  }
  mu20 /= mass;
  mu02 /= mass;
  mu11 /= mass;
  if (mu20 + mu02 < 1e-9) return AngleDeg{};

  const double phi = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
  const double ux = std::cos(phi);
  const double uy = std::sin(phi);
  double mu3 = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = std::max(luma[static_cast<std::size_t>(y) * w + x] - mean, 0.0);
      if (m == 0.0) continue;
      double p = (x - cx) * ux + (-y - cy) * uy;
      mu3 += m * p * p * p;
    }
  }
  double deg = phi * 180.0 / std::numbers::pi;
  // the heavy end (short tail of the projected mass) is the front
  if (mu3 > 0.0) deg += 180.0;
  return wrap_deg(deg);
}

AngleDeg estimate(const RasterImage& img, const std::string& id, const EstimatorConfig& cfg,
                  const GroundTruthTable* gt) {
  switch (cfg.kind) {
    case EstimatorKind::none:
      return AngleDeg{};
    case EstimatorKind::moments:
      return estimate_moments(img);
    case EstimatorKind::oracle: {
      cfg.validate();
      std::optional<AngleDeg> truth = gt != nullptr ? gt->find(id) : std::nullopt;
      if (!truth) throw Error(ErrorCode::MissingGroundTruth, "no ground truth for " + id);
      std::mt19937_64 rng(derive_seed(cfg.seed, id));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      if (unit(rng) < cfg.gross_error_rate) {
        return wrap_deg(std::uniform_real_distribution<double>(0.0, 360.0)(rng));
      }
      double noise = 0.0;
      if (cfg.noise_sigma_deg > 0.0) {
        noise = std::normal_distribution<double>(0.0, cfg.noise_sigma_deg)(rng);
      }
      return wrap_deg(truth->value() + noise);
    }
  }
  return AngleDeg{};
}

}  // namespace ricb
