#include <algorithm>
#include <chrono>
#include <thread>

#include "ricb/error.hpp"
#include "ricb/parallel.hpp"
#include "ricb/search.hpp"

namespace ricb {

namespace {

struct Candidate {
  double distance;
  std::size_t index;  // row order == id order

  bool operator<(const Candidate& o) const {
    return distance < o.distance || (distance == o.distance && index < o.index);
  }
};

// k best of rows [begin, end); unsorted.
std::vector<Candidate> scan_range(const FeatureBank& bank, std::span<const float> query,
                                  std::size_t k, Metric m, std::size_t begin, std::size_t end,
                                  std::optional<std::size_t> skip) {
  std::vector<Candidate> buf;
  buf.reserve(2 * k + 1);
  for (std::size_t i = begin; i < end; ++i) {
    if (skip && *skip == i) continue;
    buf.push_back({distance(query, bank.vector(i), m), i});
    if (buf.size() == 2 * k) {
      std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k - 1), buf.end());
      buf.resize(k);
    }
  }
  return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

RetrievalResult top_k(const FeatureBank& bank, std::span<const float> query, std::size_t k,
                      Metric m, std::optional<std::string_view> exclude_id,
                      std::size_t workers) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (bank.empty()) throw Error(ErrorCode::EmptyBank, "bank has no records");
  if (query.size() != bank.dim()) {
    throw Error(ErrorCode::DimMismatch, "query dim " + std::to_string(query.size()) +
                                            ", bank dim " + std::to_string(bank.dim()));
  }
  std::optional<std::size_t> skip;
  if (exclude_id) skip = bank.find(*exclude_id);

  const std::size_t n = bank.size();
  if (workers == 0) workers = worker_count();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, n / 1024));

  std::vector<Candidate> merged;
  if (workers == 1) {
    merged = scan_range(bank, query, k, m, 0, n, skip);
  } else {
    std::vector<std::vector<Candidate>> parts(workers);
    const std::size_t block = (n + workers - 1) / workers;
    parallel_for(
        workers,
        [&](std::size_t w) {
          std::size_t begin = std::min(n, w * block);
          parts[w] = scan_range(bank, query, k, m, begin, std::min(n, begin + block), skip);
        },
        workers);
    for (auto& p : parts) merged.insert(merged.end(), p.begin(), p.end());
  }

  std::sort(merged.begin(), merged.end());
  if (merged.size() > k) merged.resize(k);

  RetrievalResult result;
  result.hits.reserve(merged.size());
  for (const auto& c : merged) {
    const RecordMeta& meta = bank.meta(c.index);
    result.hits.push_back({meta.id, meta.label, c.distance});
  }
  return result;
}

QueryOutcome query_image_timed(const FeatureBank& bank, const RasterImage& img, std::size_t k,
                               Metric m, const EstimatorConfig& est,
                               const DescriptorConfig& desc) {
  if (est.kind == EstimatorKind::oracle) {
    throw Error(ErrorCode::InvalidArgument, "oracle estimator needs ground truth; use none or moments");
  }
  QueryOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  out.predicted = estimate(img, "", est, nullptr);
  RasterImage upright = out.predicted.value() == 0.0 ? img : correct_to_frame(img, out.predicted);
  out.timing.orientation_ms = elapsed_ms(t0);

  auto t1 = std::chrono::steady_clock::now();
  FeatureVector v = extract(upright, desc);
  out.timing.extraction_ms = elapsed_ms(t1);

  auto t2 = std::chrono::steady_clock::now();
  out.result = top_k(bank, v.view(), k, m);
  out.timing.scan_ms = elapsed_ms(t2);
  return out;
}

RetrievalResult query_image(const FeatureBank& bank, const RasterImage& img, std::size_t k,
                            Metric m, const EstimatorConfig& est, const DescriptorConfig& desc) {
  return query_image_timed(bank, img, k, m, est, desc).result;
}

}  // namespace ricb
