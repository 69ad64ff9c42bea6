#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include "ricb/error.hpp"
#include "ricb/evalharness.hpp"

namespace ricb {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m == 0 || m > n) {
    throw Error(ErrorCode::SampleTooLarge,
                "sample size " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

bool is_rotated(const RasterImage& img, const std::string& id, const EstimatorConfig& est,
                const GroundTruthTable* gt, double threshold_deg) {
  return angular_error(estimate(img, id, est, gt), AngleDeg{}) > threshold_deg;
}

struct Phases {
  double orientation = 0.0;
  double extraction = 0.0;
  double scan = 0.0;
  double total = 0.0;
};

}  // namespace

std::string_view to_string(Arm arm) {
  return arm == Arm::with_oad ? "with_oad" : "without_oad";
}

double estimate_rotated_fraction(std::span<const LabeledImage> images, std::size_t m,
                                 const EstimatorConfig& est, const GroundTruthTable* gt,
                                 double threshold_deg, std::uint64_t seed) {
  auto idx = sample_indices(images.size(), m, seed);
  std::size_t rotated = 0;
  for (std::size_t i : idx) {
    if (is_rotated(images[i].image, images[i].id, est, gt, threshold_deg)) ++rotated;
  }
  return static_cast<double>(rotated) / static_cast<double>(m);
}

double estimate_rotated_fraction(const DatasetManifest& manifest, std::size_t m,
                                 const EstimatorConfig& est, const GroundTruthTable* gt,
                                 double threshold_deg, std::uint64_t seed) {
  auto idx = sample_indices(manifest.entries.size(), m, seed);
  std::size_t rotated = 0;
  for (std::size_t i : idx) {
    const ManifestEntry& e = manifest.entries[i];
    if (is_rotated(decode_image(e.path), e.id, est, gt, threshold_deg)) ++rotated;
  }
  return static_cast<double>(rotated) / static_cast<double>(m);
}

TimingReport timing_benchmark(const FeatureBank& bank, std::span<const LabeledImage> queries,
                              std::size_t k, Metric m, const EstimatorConfig& est,
                              const DescriptorConfig& desc, Arm arm,
                              std::optional<std::size_t> sample_size, std::uint64_t seed) {
  if (queries.empty()) throw Error(ErrorCode::EmptyQuerySet, "timing needs at least one query");
  if (bank.empty()) throw Error(ErrorCode::EmptyBank, "bank has no records");
  if (arm == Arm::with_oad && est.kind == EstimatorKind::oracle) {
    throw Error(ErrorCode::InvalidArgument, "timing runs need a ground-truth-free estimator");
  }

  std::optional<FeatureBank> sampled;
  if (sample_size) sampled = sample_bank(bank, *sample_size, seed);
  const FeatureBank& target = sampled ? *sampled : bank;

  auto run_one = [&](const LabeledImage& q) {
    Phases p;
    auto t0 = Clock::now();
    const RasterImage* img = &q.image;
    RasterImage upright;
    if (arm == Arm::with_oad) {
      AngleDeg predicted = estimate(q.image, q.id, est, nullptr);
      if (predicted.value() != 0.0) {
        upright = correct_to_frame(q.image, predicted);
        img = &upright;
      }
    }
    auto t1 = Clock::now();
    FeatureVector v = extract(*img, desc);
    auto t2 = Clock::now();
    RetrievalResult r = top_k(target, v.view(), k, m);
    auto t3 = Clock::now();
    if (r.hits.empty()) throw Error(ErrorCode::EmptyBank, "scan returned nothing");
    p.orientation = arm == Arm::with_oad ? ms_between(t0, t1) : 0.0;
    p.extraction = ms_between(t1, t2);
    p.scan = ms_between(t2, t3);
    p.total = ms_between(t0, t3);
    return p;
  };

  for (const auto& q : queries) run_one(q);  // warm-up

  std::vector<double> totals;
  totals.reserve(queries.size());
  TimingReport report;
  for (const auto& q : queries) {
    Phases p = run_one(q);
    totals.push_back(p.total);
    report.orientation_mean_ms += p.orientation;
    report.extraction_mean_ms += p.extraction;
    report.scan_mean_ms += p.scan;
  }
  const double n = static_cast<double>(queries.size());
  report.orientation_mean_ms /= n;
  report.extraction_mean_ms /= n;
  report.scan_mean_ms /= n;
  report.mean_ms = std::accumulate(totals.begin(), totals.end(), 0.0) / n;
  std::sort(totals.begin(), totals.end());
  const std::size_t mid = totals.size() / 2;
  report.median_ms =
      totals.size() % 2 == 1 ? totals[mid] : 0.5 * (totals[mid - 1] + totals[mid]);
  std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * n));
  report.p95_ms = totals[std::max<std::size_t>(rank, 1) - 1];

  report.arm = arm;
  report.bank_size = bank.size();
  report.dim = bank.dim();
  report.k = k;
  report.sample_size = target.size();
  report.query_count = queries.size();
  report.host = host_description();
  return report;
}

std::string host_description() {
  std::string cpu;
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
  utsname u{};
  std::string os = uname(&u) == 0 ? std::string(u.sysname) + " " + u.release + " " + u.machine
                                  : "unknown";
  std::string out = os + "; " + std::to_string(std::thread::hardware_concurrency()) + " threads";
  if (!cpu.empty()) out += "; " + cpu;
  return out;
}

}  // namespace ricb
