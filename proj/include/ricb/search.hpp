#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricb/bank.hpp"

namespace ricb {

enum class Metric { manhattan, euclidean, cosine };

std::string_view to_string(Metric m);
// Accepts manhattan/l1, euclidean/l2, cosine. Throws InvalidArgument.
Metric parse_metric(std::string_view name);

// Accumulates in double. Errors: DimMismatch; ZeroVector (cosine with a
// norm below 1e-12). Cosine distance is clamped to [0, 2].
double distance(std::span<const float> a, std::span<const float> b, Metric m);

struct Hit {
  std::string id;
  std::string label;
  double distance;

  bool operator==(const Hit&) const = default;
};

/// Hits in ascending distance; equal distances ordered by id (byte-wise).
struct RetrievalResult {
  std::vector<Hit> hits;
  std::optional<std::string> query_id;

  bool operator==(const RetrievalResult&) const = default;
};

// Exhaustive scan for the k nearest records, skipping exclude_id when given.
// Equal to sorting every candidate by (distance, id) and truncating. The scan
// is split over `workers` threads (0 = worker_count()); the result does not
// depend on the split. Errors: DimMismatch, EmptyBank, InvalidArgument (k=0).
RetrievalResult top_k(const FeatureBank& bank, std::span<const float> query, std::size_t k,
                      Metric m, std::optional<std::string_view> exclude_id = std::nullopt,
                      std::size_t workers = 1);

struct QueryTiming {
  double orientation_ms = 0.0;
  double extraction_ms = 0.0;
  double scan_ms = 0.0;
};

struct QueryOutcome {
  RetrievalResult result;
  AngleDeg predicted;
  QueryTiming timing;
};

// estimate -> correct -> extract -> top_k for an ad-hoc image. Only the none
// and moments estimators are accepted (InvalidArgument for oracle).
RetrievalResult query_image(const FeatureBank& bank, const RasterImage& img, std::size_t k,
                            Metric m, const EstimatorConfig& est, const DescriptorConfig& desc);
QueryOutcome query_image_timed(const FeatureBank& bank, const RasterImage& img, std::size_t k,
                               Metric m, const EstimatorConfig& est,
                               const DescriptorConfig& desc);

}  // namespace ricb
