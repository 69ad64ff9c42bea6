#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "ricb/bank.hpp"
#include "ricb/csv.hpp"
#include "ricb/error.hpp"

namespace ricb {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {0x52, 0x49, 0x43, 0x42};  // "RICB"
constexpr std::uint16_t kVersion = 1;
const std::vector<std::string> kManifestHeader = {"id", "label", "path", "predicted_angle_deg"};

class Writer {
 public:
  template <typename T>
  void put(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  template <typename T>
  T get(const char* what) {
    if (remaining() < sizeof(T)) {
      throw Error(ErrorCode::DimMismatch, std::string("truncated header at ") + what);
    }
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(data_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::string format_angle(AngleDeg a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", a.value());
  return buf;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct VectorBlock {
  std::size_t dim;
  std::size_t count;
  std::string descriptor_id;
  std::vector<float> rows;
};

VectorBlock parse_vectors(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::BadMagic, "not a RICB vector file");
  }
  Reader r(bytes.subspan(kMagic.size()));
  auto version = r.get<std::uint16_t>("version");
  if (version != kVersion) {
    throw Error(ErrorCode::VersionMismatch, "unsupported version " + std::to_string(version));
  }
  auto flags = r.get<std::uint16_t>("flags");
  if (flags != 0) {
    throw Error(ErrorCode::VersionMismatch, "unsupported flags " + std::to_string(flags));
  }
  VectorBlock block;
  block.dim = r.get<std::uint32_t>("dim");
  block.count = r.get<std::uint64_t>("count");
  auto id_len = r.get<std::uint16_t>("descriptor id length");
  if (r.remaining() < id_len) throw Error(ErrorCode::DimMismatch, "truncated descriptor id");
  auto id_bytes = r.take(id_len);
  block.descriptor_id.assign(id_bytes.begin(), id_bytes.end());

  if (block.dim == 0 && block.count != 0) {
    throw Error(ErrorCode::DimMismatch, "dim 0 with nonzero record count");
  }
  const std::size_t limit = std::numeric_limits<std::size_t>::max() / sizeof(float);
  if (block.dim != 0 && block.count > limit / block.dim) {
    throw Error(ErrorCode::DimMismatch, "record count overflows");
  }
  const std::size_t values = block.count * block.dim;
  if (r.remaining() != values * sizeof(float)) {
    throw Error(ErrorCode::DimMismatch,
                "vector block is " + std::to_string(r.remaining()) + " bytes, header implies " +
                    std::to_string(values * sizeof(float)));
  }
  auto raw = r.take(values * sizeof(float));
  block.rows.resize(values);
  for (std::size_t i = 0; i < values; ++i) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(raw[i * 4 + b]) << (8 * b);
    block.rows[i] = std::bit_cast<float>(u);
  }
  return block;
}

std::vector<RecordMeta> parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  auto header = csv::read_row(in);
  if (!header || *header != kManifestHeader) {
    throw Error(ErrorCode::ManifestDesync, path.string() + ": bad manifest header");
  }
  std::vector<RecordMeta> metas;
  while (auto row = csv::read_row(in)) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != kManifestHeader.size()) {
      throw Error(ErrorCode::ManifestDesync,
                  path.string() + ": row " + std::to_string(metas.size() + 1) +
                      " has " + std::to_string(row->size()) + " fields");
    }
    const std::string& angle_text = (*row)[3];
    char* end = nullptr;
    double angle = std::strtod(angle_text.c_str(), &end);
    if (angle_text.empty() || end != angle_text.c_str() + angle_text.size() ||
        !std::isfinite(angle)) {
      throw Error(ErrorCode::ManifestDesync, path.string() + ": bad angle '" + angle_text + "'");
    }
    metas.push_back({(*row)[0], (*row)[1], (*row)[2], wrap_deg(angle)});
  }
  return metas;
}

FeatureBank load_pair(const std::filesystem::path& vectors_path,
                      const std::filesystem::path& manifest_path) {
  VectorBlock block = parse_vectors(read_file(vectors_path));
  std::vector<RecordMeta> metas = parse_manifest(manifest_path);
  if (metas.size() != block.count) {
    throw Error(ErrorCode::ManifestDesync, "manifest has " + std::to_string(metas.size()) +
                                               " rows, vector file has " +
                                               std::to_string(block.count));
  }
  try {
    return FeatureBank::from_rows(block.dim, std::move(block.descriptor_id), std::move(metas),
                                  std::move(block.rows));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::ManifestDesync, e.detail());
    throw;
  }
}

}  // namespace

std::filesystem::path manifest_path_for(const std::filesystem::path& bank_path) {
  return std::filesystem::path(bank_path.string() + ".manifest.csv");
}

void save_bank(const FeatureBank& bank, const std::filesystem::path& path) {
  if (bank.descriptor_id().size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "descriptor id too long");
  }
  Writer w;
  w.bytes.assign(kMagic.begin(), kMagic.end());
  w.put<std::uint16_t>(kVersion);
  w.put<std::uint16_t>(0);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(bank.dim()));
  w.put<std::uint64_t>(bank.size());
  w.put<std::uint16_t>(static_cast<std::uint16_t>(bank.descriptor_id().size()));
  w.bytes.insert(w.bytes.end(), bank.descriptor_id().begin(), bank.descriptor_id().end());
  w.bytes.reserve(w.bytes.size() + bank.rows().size() * 4);
  for (float f : bank.rows()) w.put<std::uint32_t>(std::bit_cast<std::uint32_t>(f));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(w.bytes.data()),
            static_cast<std::streamsize>(w.bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());

  auto mpath = manifest_path_for(path);
  std::ofstream man(mpath, std::ios::trunc);
  if (!man) throw Error(ErrorCode::IoError, "cannot write " + mpath.string());
  csv::write_row(man, kManifestHeader);
  for (const auto& m : bank.metas()) {
    csv::write_row(man, {m.id, m.label, m.source_path, format_angle(m.predicted_angle)});
  }
  if (!man) throw Error(ErrorCode::IoError, "cannot write " + mpath.string());
}

FeatureBank load_bank(const std::filesystem::path& path) {
  return load_pair(path, manifest_path_for(path));
}

FeatureBank import_embeddings(const std::filesystem::path& vectors_path,
                              const std::filesystem::path& manifest_path) {
  FeatureBank loaded = load_pair(vectors_path, manifest_path);
  std::vector<RecordMeta> metas = loaded.metas();
  for (auto& m : metas) m.predicted_angle = AngleDeg{};
  return FeatureBank::from_rows(loaded.dim(), loaded.descriptor_id(), std::move(metas),
                                {loaded.rows().begin(), loaded.rows().end()});
}

}  // namespace ricb
