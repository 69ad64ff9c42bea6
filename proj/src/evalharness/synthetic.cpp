#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "ricb/error.hpp"
#include "ricb/parallel.hpp"
#include "ricb/synthetic.hpp"

namespace ricb {

std::vector<LabeledImage> make_arrow_dataset(const SynthDatasetConfig& cfg) {
  if (cfg.classes < 1 || cfg.per_class < 1 || cfg.size < 32) {
    throw Error(ErrorCode::InvalidArgument, "synthetic dataset needs classes, per_class >= 1 and size >= 32");
  }
  struct Job {
    std::string id, label;
    ArrowStyle style;
  };
  std::vector<Job> jobs;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr double kRing = 0.22;
  for (int c = 0; c < cfg.classes; ++c) {
    char label[32];
    std::snprintf(label, sizeof label, "class%02d", c);
    const double phi = 2.0 * std::numbers::pi * c / cfg.classes;
    for (int i = 0; i < cfg.per_class; ++i) {
      char file[32];
      std::snprintf(file, sizeof file, "img%03d.png", i);
      ArrowStyle s;
      s.hue = 0.08 + 0.02 * unit(rng);
      s.thickness = 0.05 + 0.008 * unit(rng);
      s.length = 0.36 + 0.03 * unit(rng);
      s.offset_x = kRing * std::cos(phi) + 0.01 * unit(rng);
      s.offset_y = kRing * std::sin(phi) + 0.01 * unit(rng);
      jobs.push_back({std::string(label) + "/" + file, label, s});
    }
  }
  std::vector<LabeledImage> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    out[i] = {jobs[i].id, jobs[i].label, "", synth_arrow(AngleDeg{}, cfg.size, jobs[i].style)};
  });
  return out;
}

std::vector<LabeledImage> write_dataset(std::span<const LabeledImage> images,
                                        const std::filesystem::path& root) {
  std::vector<LabeledImage> out(images.begin(), images.end());
  for (auto& img : out) {
    std::filesystem::path p = root / img.id;
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + p.parent_path().string());
    write_png(img.image, p);
    img.source_path = p.string();
  }
  return out;
}

}  // namespace ricb
