#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ricb/error.hpp"
#include "ricb/search.hpp"
#include "ricb/synthetic.hpp"
#include "test_util.hpp"

namespace ricb {

void PrintTo(const Hit& h, std::ostream* os) {
  *os << "{" << h.id << ", " << h.label << ", " << h.distance << "}";
}

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

// Rows drawn from a small integer alphabet so ties are common.
FeatureBank tie_heavy_bank(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> v(0, 2);
  std::vector<RecordMeta> metas;
  std::vector<float> rows;
  for (std::size_t i = 0; i < n; ++i) {
    metas.push_back({"r" + std::to_string(rng() % 100000) + "-" + std::to_string(i),
                     std::to_string(i % 4), "", {}});
    for (std::size_t d = 0; d < dim; ++d) rows.push_back(static_cast<float>(v(rng)));
  }
  return FeatureBank::from_rows(dim, "t", std::move(metas), std::move(rows));
}

// Independent oracle: score everything, sort by (distance, id), truncate.
std::vector<Hit> full_sort(const FeatureBank& bank, std::span<const float> q, std::size_t k,
                           Metric m, std::optional<std::string> exclude = std::nullopt) {
  std::vector<Hit> all;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (exclude && bank.meta(i).id == *exclude) continue;
    double acc = 0.0, na = 0.0, nb = 0.0;
    auto v = bank.vector(i);
    for (std::size_t d = 0; d < q.size(); ++d) {
      double diff = double(q[d]) - v[d];
      if (m == Metric::manhattan) acc += std::fabs(diff);
      if (m == Metric::euclidean) acc += diff * diff;
      if (m == Metric::cosine) {
        acc += double(q[d]) * v[d];
        na += double(q[d]) * q[d];
        nb += double(v[d]) * v[d];
      }
    }
    double dist = m == Metric::manhattan ? acc
                  : m == Metric::euclidean ? std::sqrt(acc)
                                           : std::clamp(1.0 - acc / (std::sqrt(na) * std::sqrt(nb)), 0.0, 2.0);
    all.push_back({bank.meta(i).id, bank.meta(i).label, dist});
  }
  std::sort(all.begin(), all.end(), [](const Hit& a, const Hit& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

TEST(Distance, Examples) {
  std::vector<float> a{1, 2}, b{3, 5}, o{0, 0}, p{3, 4}, x{1, 0}, y{0, 1};
  EXPECT_EQ(distance(a, b, Metric::manhattan), 5.0);
  EXPECT_EQ(distance(o, p, Metric::euclidean), 5.0);
  EXPECT_NEAR(distance(x, y, Metric::cosine), 1.0, 1e-12);
  for (Metric m : {Metric::manhattan, Metric::euclidean}) EXPECT_EQ(distance(a, a, m), 0.0);
  EXPECT_LE(distance(a, a, Metric::cosine), 1e-6);
}

TEST(Distance, Errors) {
  std::vector<float> a{1, 2}, b{1, 2, 3}, z{0, 0};
  EXPECT_EQ(code_of([&] { distance(a, b, Metric::euclidean); }), ErrorCode::DimMismatch);
  EXPECT_EQ(code_of([&] { distance(a, z, Metric::cosine); }), ErrorCode::ZeroVector);
}

TEST(Distance, MetricAxioms) {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> g;
  auto vec = [&] {
    std::vector<float> v(16);
    for (float& x : v) x = g(rng);
    return v;
  };
  for (int i = 0; i < 200; ++i) {
    auto a = vec(), b = vec(), c = vec();
    for (Metric m : {Metric::manhattan, Metric::euclidean}) {
      EXPECT_GE(distance(a, b, m), 0.0);
      EXPECT_EQ(distance(a, b, m), distance(b, a, m));
      EXPECT_LE(distance(a, c, m), distance(a, b, m) + distance(b, c, m) + 1e-9);
    }
    double cd = distance(a, b, Metric::cosine);
    EXPECT_GE(cd, 0.0);
    EXPECT_LE(cd, 2.0);
    EXPECT_NEAR(cd, distance(b, a, Metric::cosine), 1e-12);
  }
}

TEST(Metric, Parse) {
  EXPECT_EQ(parse_metric("l1"), Metric::manhattan);
  EXPECT_EQ(parse_metric("l2"), Metric::euclidean);
  EXPECT_EQ(parse_metric("cosine"), Metric::cosine);
  EXPECT_EQ(to_string(Metric::manhattan), "manhattan");
  EXPECT_THROW(parse_metric("hamming"), Error);
}

TEST(TopK, SelfMatchComesFirst) {
  FeatureBank bank = tie_heavy_bank(50, 6, 1);
  auto q = bank.vector(17);
  RetrievalResult r = top_k(bank, q, 5, Metric::euclidean);
  ASSERT_EQ(r.hits.size(), 5u);
  EXPECT_EQ(r.hits[0].distance, 0.0);
  // a zero-distance tie may put a duplicate first, but q's id is among the zeros
  bool found = false;
  for (const Hit& h : r.hits) found |= h.id == bank.meta(17).id && h.distance == 0.0;
  EXPECT_TRUE(found);
}

TEST(TopK, KBeyondSizeReturnsEverythingSorted) {
  FeatureBank bank = tie_heavy_bank(30, 4, 2);
  std::vector<float> q{1, 1, 1, 1};
  RetrievalResult r = top_k(bank, q, 100, Metric::manhattan);
  ASSERT_EQ(r.hits.size(), 30u);
  EXPECT_EQ(r.hits, full_sort(bank, q, 100, Metric::manhattan));
}

TEST(TopK, MatchesFullSortOracleWithTies) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    FeatureBank bank = tie_heavy_bank(100, 8, 100 + trial);
    std::vector<float> q(8);
    for (float& v : q) v = static_cast<float>(rng() % 3);
    if (std::all_of(q.begin(), q.end(), [](float v) { return v == 0; })) q[0] = 1;
    for (Metric m : {Metric::manhattan, Metric::euclidean, Metric::cosine}) {
      if (m == Metric::cosine) {
        bool has_zero_row = false;
        for (std::size_t i = 0; i < bank.size(); ++i) {
          auto v = bank.vector(i);
          has_zero_row |= std::all_of(v.begin(), v.end(), [](float x) { return x == 0; });
        }
        if (has_zero_row) continue;
      }
      EXPECT_EQ(top_k(bank, q, 10, m).hits, full_sort(bank, q, 10, m)) << trial;
    }
  }
}

TEST(TopK, ExcludeSkipsRecord) {
  FeatureBank bank = tie_heavy_bank(40, 5, 6);
  std::string id = bank.meta(3).id;
  RetrievalResult r = top_k(bank, bank.vector(3), 40, Metric::euclidean, id);
  EXPECT_EQ(r.hits.size(), 39u);
  for (const Hit& h : r.hits) EXPECT_NE(h.id, id);
  EXPECT_EQ(r.hits, full_sort(bank, bank.vector(3), 40, Metric::euclidean, id));
}

TEST(TopK, WorkerSplitDoesNotChangeResult) {
  FeatureBank bank = tie_heavy_bank(5000, 6, 7);
  std::vector<float> q{1, 0, 2, 1, 1, 0};
  RetrievalResult one = top_k(bank, q, 25, Metric::manhattan, std::nullopt, 1);
  for (std::size_t w : {2, 3, 4, 0}) {
    EXPECT_EQ(top_k(bank, q, 25, Metric::manhattan, std::nullopt, w), one) << w;
  }
}

TEST(TopK, Errors) {
  FeatureBank bank = tie_heavy_bank(5, 3, 8);
  std::vector<float> q3{1, 1, 1}, q2{1, 1};
  EXPECT_EQ(code_of([&] { top_k(bank, q2, 1, Metric::euclidean); }), ErrorCode::DimMismatch);
  EXPECT_EQ(code_of([&] { top_k(bank, q3, 0, Metric::euclidean); }), ErrorCode::InvalidArgument);
  FeatureBank empty = FeatureBank::from_rows(3, "t", {}, {});
  EXPECT_EQ(code_of([&] { top_k(empty, q3, 1, Metric::euclidean); }), ErrorCode::EmptyBank);
}

class ArrowBank : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    images_ = new std::vector<LabeledImage>(make_arrow_dataset({}));
    bank_ = new FeatureBank(build_bank(*images_, {}, nullptr, {}));
  }
  static void TearDownTestSuite() {
    delete bank_;
    delete images_;
  }
  static std::vector<LabeledImage>* images_;
  static FeatureBank* bank_;
};
std::vector<LabeledImage>* ArrowBank::images_ = nullptr;
FeatureBank* ArrowBank::bank_ = nullptr;

TEST_F(ArrowBank, UprightQueryFindsItself) {
  const LabeledImage& q = (*images_)[5];
  RetrievalResult r = query_image(*bank_, q.image, 20, Metric::euclidean, {}, {});
  ASSERT_EQ(r.hits.size(), 20u);
  EXPECT_EQ(r.hits[0].id, q.id);
  EXPECT_EQ(r.hits[0].distance, 0.0);
}

TEST_F(ArrowBank, RotatedQueryLosesNeighboursUntilCorrected) {
  const LabeledImage& q = (*images_)[0];
  RetrievalResult upright = query_image(*bank_, q.image, 20, Metric::euclidean, {}, {});
  RasterImage turned = rotate(q.image, wrap_deg(90), Canvas::expand);
  RetrievalResult naive = query_image(*bank_, turned, 20, Metric::euclidean, {}, {});
  std::size_t overlap = 0;
  for (const Hit& h : naive.hits)
    for (const Hit& u : upright.hits) overlap += h.id == u.id;
  EXPECT_LT(overlap, 20u);

  RetrievalResult fixed =
      query_image(*bank_, correct_orientation(turned, wrap_deg(90)), 20, Metric::euclidean, {}, {});
  EXPECT_EQ(fixed, upright);
}

TEST_F(ArrowBank, MomentsQueryOnUprightImageStillRanksItselfHigh) {
  const LabeledImage& q = (*images_)[123];
  QueryOutcome out = query_image_timed(*bank_, q.image, 20, Metric::euclidean,
                                       {EstimatorKind::moments}, {});
  EXPECT_LE(angular_error(out.predicted, AngleDeg{}), 3.0);
  EXPECT_GE(out.timing.scan_ms, 0.0);
  EXPECT_EQ(out.result.hits.size(), 20u);
}

TEST_F(ArrowBank, OracleIsRejected) {
  EXPECT_EQ(code_of([&] {
              query_image(*bank_, (*images_)[0].image, 5, Metric::euclidean,
                          {EstimatorKind::oracle}, {});
            }),
            ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace ricb
