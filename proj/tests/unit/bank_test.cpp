#include <cmath>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "ricb/bank.hpp"
#include "ricb/error.hpp"
#include "ricb/synthetic.hpp"
#include "test_util.hpp"

namespace ricb {
namespace {

using testing::TempDir;
namespace fs = std::filesystem;

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

FeatureBank random_bank(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g;
  std::vector<RecordMeta> metas;
  std::vector<float> rows;
  for (std::size_t i = 0; i < n; ++i) {
    metas.push_back({"id" + std::to_string(rng() % 1000000) + "_" + std::to_string(i),
                     "label" + std::to_string(i % 3), "/p/x,\"" + std::to_string(i) + "\".png",
                     wrap_deg(std::uniform_real_distribution<double>(0, 360)(rng))});
    for (std::size_t d = 0; d < dim; ++d) rows.push_back(g(rng));
  }
  return FeatureBank::from_rows(dim, "test-desc", std::move(metas), std::move(rows));
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& b) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

double rms(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (double(a[i]) - b[i]) * (double(a[i]) - b[i]);
  return std::sqrt(acc / a.size());
}

TEST(IngestDataset, TwoCategories) {
  TempDir dir;
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  write_png(RasterImage(2, 2), dir / "a" / "1.png");
  write_png(RasterImage(2, 2), dir / "b" / "2.png");
  std::ofstream(dir / "b" / "notes.txt") << "x";
  std::ofstream(dir / "loose.png") << "x";
  DatasetManifest m = ingest_dataset(dir.path());
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].id, "a/1.png");
  EXPECT_EQ(m.entries[0].label, "a");
  EXPECT_EQ(m.entries[1].label, "b");
}

TEST(IngestDataset, Errors) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { ingest_dataset(dir.path()); }), ErrorCode::EmptyDataset);
  EXPECT_EQ(code_of([&] { ingest_dataset(dir / "absent"); }), ErrorCode::UnreadableDirectory);
}

class Db2000Tree : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir;
    RasterImage px(3, 3);
    for (int c = 0; c < 10; ++c) {
      fs::path cat = dir_->path() / ("cat" + std::to_string(c));
      fs::create_directories(cat);
      for (int i = 0; i < 200; ++i) {
        px.at(1, 1, 0) = (c * 200 + i) % 256 / 255.0f;
        write_png(px, cat / ("img" + std::to_string(i) + ".png"));
      }
    }
  }
  static void TearDownTestSuite() { delete dir_; }
  static TempDir* dir_;
};
TempDir* Db2000Tree::dir_ = nullptr;

TEST_F(Db2000Tree, IngestsTwoThousandEntries) {
  DatasetManifest m = ingest_dataset(dir_->path());
  EXPECT_EQ(m.entries.size(), 2000u);
  std::set<std::string> labels;
  for (const auto& e : m.entries) labels.insert(e.label);
  EXPECT_EQ(labels.size(), 10u);
}

TEST_F(Db2000Tree, BuildsBankWith1536Dimensions) {
  FeatureBank bank = build_bank(ingest_dataset(dir_->path()), {}, nullptr, {});
  EXPECT_EQ(bank.size(), 2000u);
  EXPECT_EQ(bank.dim(), 1536u);
  EXPECT_EQ(bank.label_count(), 10u);
  EXPECT_EQ(bank.descriptor_id(), "gridmoments-c224-g16");
}

TEST(BuildBank, NullEstimatorEqualsDirectExtraction) {
  TempDir dir;
  fs::create_directories(dir / "x");
  std::vector<RasterImage> imgs;
  for (int i = 0; i < 4; ++i) {
    imgs.push_back(testing::noise_image(20 + i, 16, i));
    write_png(imgs.back(), dir / "x" / (std::to_string(i) + ".png"));
  }
  DescriptorConfig desc{32, 4};
  FeatureBank bank = build_bank(ingest_dataset(dir.path()), {}, nullptr, desc);
  for (int i = 0; i < 4; ++i) {
    auto row = bank.find("x/" + std::to_string(i) + ".png");
    ASSERT_TRUE(row.has_value());
    FeatureVector direct = extract(decode_image(dir / "x" / (std::to_string(i) + ".png")), desc);
    EXPECT_TRUE(std::ranges::equal(bank.vector(*row), direct.components));
    EXPECT_EQ(bank.meta(*row).predicted_angle.value(), 0.0);
  }
}

// Quarter turns come back bit-exact. Other angles go through two bilinear
// resamplings, which soften the arrow edges; measured worst per-component RMS
// is about 0.0065, dominated by the cell standard deviations.
TEST(BuildBank, OracleUndoesKnownRotations) {
  SynthDatasetConfig cfg;
  cfg.per_class = 6;
  std::vector<LabeledImage> upright = make_arrow_dataset(cfg);
  std::vector<LabeledImage> rotated = upright;
  GroundTruthTable gt;
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> deg(1, 359);
  for (std::size_t i = 0; i < rotated.size(); ++i) {
    double a = i % 4 == 0 ? 90.0 * (1 + (i / 4) % 3) : deg(rng);
    rotated[i].image = rotate(rotated[i].image, wrap_deg(a), Canvas::expand);
    gt.insert(rotated[i].id, wrap_deg(a));
  }
  EstimatorConfig oracle{EstimatorKind::oracle, 0.0, 0.0, 1};
  FeatureBank ref = build_bank(upright, {}, nullptr, {});
  FeatureBank got = build_bank(rotated, oracle, &gt, {});
  ASSERT_EQ(ref.size(), got.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    double a = gt.find(got.meta(i).id)->value();
    double e = rms(ref.vector(i), got.vector(i));
    EXPECT_EQ(got.meta(i).predicted_angle.value(), a);
    if (std::fmod(a, 90.0) == 0.0) {
      EXPECT_EQ(e, 0.0) << got.meta(i).id << " at " << a;
    } else {
      worst = std::max(worst, e);
    }
  }
  RecordProperty("worst_rms", std::to_string(worst));
  EXPECT_LE(worst, 0.01);
}

TEST(BuildBank, InputOrderDoesNotMatter) {
  SynthDatasetConfig cfg;
  cfg.per_class = 3;
  std::vector<LabeledImage> imgs = make_arrow_dataset(cfg);
  FeatureBank a = build_bank(imgs, {}, nullptr, {32, 4});
  std::mt19937 rng(3);
  std::shuffle(imgs.begin(), imgs.end(), rng);
  EXPECT_EQ(build_bank(imgs, {}, nullptr, {32, 4}), a);
}

TEST(BuildBank, ErrorsCarryRecordId) {
  TempDir dir;
  fs::create_directories(dir / "x");
  std::ofstream(dir / "x" / "bad.png") << "not an image";
  try {
    build_bank(ingest_dataset(dir.path()), {}, nullptr, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedFormat);
    EXPECT_NE(e.detail().find("x/bad.png"), std::string::npos);
  }
}

TEST(FeatureBank, SortedAndValidated) {
  std::vector<BankRecord> recs = {{"b", "l", "", {}, {{1, 2}}}, {"a", "l", "", {}, {{3, 4}}}};
  FeatureBank bank(2, "d", recs);
  EXPECT_EQ(bank.meta(0).id, "a");
  EXPECT_EQ(bank.vector(0)[0], 3.0f);
  EXPECT_EQ(bank.find("b"), std::optional<std::size_t>(1));
  EXPECT_FALSE(bank.find("c").has_value());

  recs[0].vector.components.push_back(5);
  EXPECT_EQ(code_of([&] { FeatureBank(2, "d", recs); }), ErrorCode::DimMismatch);
  recs[0].vector.components = {NAN, 1};
  EXPECT_EQ(code_of([&] { FeatureBank(2, "d", recs); }), ErrorCode::NonFinite);
  recs[0] = {"a", "l", "", {}, {{1, 2}}};
  EXPECT_EQ(code_of([&] { FeatureBank(2, "d", recs); }), ErrorCode::InvalidArgument);
}

TEST(BankIo, RoundTripRandomBanks) {
  TempDir dir;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FeatureBank bank = random_bank(1 + seed * 7, 1 + seed % 5, seed);
    save_bank(bank, dir / "b.bin");
    EXPECT_EQ(load_bank(dir / "b.bin"), bank);
  }
}

TEST(BankIo, EmptyBankRoundTrips) {
  TempDir dir;
  FeatureBank empty = FeatureBank::from_rows(1536, "gridmoments-c224-g16", {}, {});
  save_bank(empty, dir / "e.bin");
  FeatureBank back = load_bank(dir / "e.bin");
  EXPECT_EQ(back, empty);
  EXPECT_EQ(back.size(), 0u);
}

TEST(BankIo, LittleEndianLayout) {
  TempDir dir;
  FeatureBank bank = FeatureBank::from_rows(2, "d", {{"a", "l", "", {}}}, {1.0f, -2.0f});
  save_bank(bank, dir / "b.bin");
  auto b = read_bytes(dir / "b.bin");
  ASSERT_EQ(b.size(), 4u + 2 + 2 + 4 + 8 + 2 + 1 + 8);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "RICB");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[8], 2);
  EXPECT_EQ(b[12], 1);
  // 1.0f = 0x3f800000
  EXPECT_EQ(b[23 + 3], 0x3f);
  EXPECT_EQ(b[23 + 2], 0x80);
}

TEST(BankIo, CorruptionIsDetected) {
  TempDir dir;
  FeatureBank bank = random_bank(5, 3, 1);
  save_bank(bank, dir / "b.bin");
  const auto good = read_bytes(dir / "b.bin");
  const fs::path man = manifest_path_for(dir / "b.bin");

  auto b = good;
  b[0] = 'X';
  write_bytes(dir / "b.bin", b);
  EXPECT_EQ(code_of([&] { load_bank(dir / "b.bin"); }), ErrorCode::BadMagic);

  b = good;
  b[4] = 2;
  write_bytes(dir / "b.bin", b);
  EXPECT_EQ(code_of([&] { load_bank(dir / "b.bin"); }), ErrorCode::VersionMismatch);

  b = good;
  b.resize(b.size() - 4);
  write_bytes(dir / "b.bin", b);
  EXPECT_EQ(code_of([&] { load_bank(dir / "b.bin"); }), ErrorCode::DimMismatch);

  b = good;
  b.resize(10);
  write_bytes(dir / "b.bin", b);
  EXPECT_EQ(code_of([&] { load_bank(dir / "b.bin"); }), ErrorCode::DimMismatch);

  write_bytes(dir / "b.bin", good);
  std::string text;
  {
    std::ifstream in(man);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  std::ofstream(man) << text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  EXPECT_EQ(code_of([&] { load_bank(dir / "b.bin"); }), ErrorCode::ManifestDesync);

  fs::remove(man);
  EXPECT_EQ(code_of([&] { load_bank(dir / "b.bin"); }), ErrorCode::FileNotFound);
  EXPECT_EQ(code_of([&] { load_bank(dir / "none.bin"); }), ErrorCode::FileNotFound);
}

TEST(ImportEmbeddings, ThreeRowsOfDimFour) {
  TempDir dir;
  FeatureBank src = FeatureBank::from_rows(
      4, "external", {{"r1", "x", "", wrap_deg(5)}, {"r2", "y", "", {}}, {"r3", "x", "", {}}},
      std::vector<float>(12, 0.25f));
  save_bank(src, dir / "v.bin");
  FeatureBank bank = import_embeddings(dir / "v.bin", manifest_path_for(dir / "v.bin"));
  EXPECT_EQ(bank.size(), 3u);
  EXPECT_EQ(bank.dim(), 4u);
  EXPECT_EQ(bank.meta(0).predicted_angle.value(), 0.0);
}

TEST(ImportEmbeddings, RowCountMismatch) {
  TempDir dir;
  save_bank(random_bank(3, 4, 2), dir / "v.bin");
  save_bank(random_bank(2, 4, 3), dir / "w.bin");
  EXPECT_EQ(code_of([&] { import_embeddings(dir / "v.bin", manifest_path_for(dir / "w.bin")); }),
            ErrorCode::ManifestDesync);
}

TEST(SampleBank, FullSizeIsSameBank) {
  FeatureBank bank = random_bank(20, 3, 4);
  EXPECT_EQ(sample_bank(bank, 20, 9), bank);
}

TEST(SampleBank, SingleRecordDeterministic) {
  FeatureBank bank = random_bank(50, 3, 5);
  FeatureBank a = sample_bank(bank, 1, 77);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(sample_bank(bank, 1, 77), a);
}

TEST(SampleBank, SeedsGiveDifferentHalves) {
  FeatureBank bank = random_bank(1000, 2, 6);
  FeatureBank a = sample_bank(bank, 500, 1);
  FeatureBank b = sample_bank(bank, 500, 2);
  EXPECT_FALSE(a == b);
  std::set<std::string> ids;
  for (const auto& m : a.metas()) ids.insert(m.id);
  EXPECT_EQ(ids.size(), 500u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto row = bank.find(a.meta(i).id);
    ASSERT_TRUE(row.has_value());
    EXPECT_TRUE(std::ranges::equal(a.vector(i), bank.vector(*row)));
  }
}

TEST(SampleBank, RejectsBadSizes) {
  FeatureBank bank = random_bank(5, 2, 7);
  EXPECT_EQ(code_of([&] { sample_bank(bank, 0, 1); }), ErrorCode::SampleTooLarge);
  EXPECT_EQ(code_of([&] { sample_bank(bank, 6, 1); }), ErrorCode::SampleTooLarge);
}

}  // namespace
}  // namespace ricb
