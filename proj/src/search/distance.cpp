#include <algorithm>
#include <cmath>

#include "ricb/error.hpp"
#include "ricb/search.hpp"

namespace ricb {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::manhattan: return "manhattan";
    case Metric::euclidean: return "euclidean";
    case Metric::cosine: return "cosine";
  }
  return "euclidean";
}

Metric parse_metric(std::string_view name) {
  if (name == "manhattan" || name == "l1") return Metric::manhattan;
  if (name == "euclidean" || name == "l2") return Metric::euclidean;
  if (name == "cosine") return Metric::cosine;
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

double distance(std::span<const float> a, std::span<const float> b, Metric m) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimMismatch, "vectors of dim " + std::to_string(a.size()) + " and " +
                                            std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  switch (m) {
    case Metric::manhattan: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::fabs(static_cast<double>(a[i]) - b[i]);
      return acc;
    }
    case Metric::euclidean: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = static_cast<double>(a[i]) - b[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case Metric::cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double x = a[i], y = b[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
      }
      na = std::sqrt(na);
      nb = std::sqrt(nb);
      if (na < 1e-12 || nb < 1e-12) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
      return std::clamp(1.0 - dot / (na * nb), 0.0, 2.0);
    }
  }
  return 0.0;
}

}  // namespace ricb
