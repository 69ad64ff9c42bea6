#include "ricb/error.hpp"
#include "ricb/evalharness.hpp"
#include "ricb/parallel.hpp"

namespace ricb {

double precision_at_k(const RetrievalResult& result, std::string_view query_label, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < result.hits.size() && i < k; ++i) {
    if (result.hits[i].label == query_label) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(k);
}

double mean_precision(const FeatureBank& bank, std::span<const LabeledImage> queries,
                      std::size_t k, Metric m, const EstimatorConfig& est,
                      const GroundTruthTable* gt, const DescriptorConfig& desc,
                      bool include_self) {
  if (queries.empty()) throw Error(ErrorCode::EmptyQuerySet, "no queries");
  std::vector<double> per_query(queries.size());
  parallel_for(queries.size(), [&](std::size_t i) {
    const LabeledImage& q = queries[i];
    try {
      PipelineOutput out = run_pipeline(q.image, q.id, est, gt, desc);
      std::optional<std::string_view> exclude;
      if (!include_self) exclude = q.id;
      per_query[i] = precision_at_k(top_k(bank, out.vector.view(), k, m, exclude), q.label, k);
    } catch (const Error& e) {
      throw Error(e.code(), "[query " + q.id + "] " + e.detail());
    }
  });
  double sum = 0.0;
  for (double p : per_query) sum += p;
  return sum / static_cast<double>(queries.size());
}

double improvement(double p_with, double p_without) { return p_with - p_without; }

}  // namespace ricb
