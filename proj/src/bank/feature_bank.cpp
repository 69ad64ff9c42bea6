#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <set>

#include "ricb/bank.hpp"
#include "ricb/error.hpp"

namespace ricb {

FeatureBank::FeatureBank(std::size_t dim, std::string descriptor_id,
                         std::vector<BankRecord> records) {
  std::vector<RecordMeta> metas;
  std::vector<float> rows;
  metas.reserve(records.size());
  rows.reserve(records.size() * dim);
  for (auto& r : records) {
    if (r.vector.dim() != dim) {
      throw Error(ErrorCode::DimMismatch, "record " + r.id + " has dim " +
                                              std::to_string(r.vector.dim()) + ", bank dim " +
                                              std::to_string(dim));
    }
    rows.insert(rows.end(), r.vector.components.begin(), r.vector.components.end());
    metas.push_back({std::move(r.id), std::move(r.label), std::move(r.source_path),
                     r.predicted_angle});
  }
  *this = from_rows(dim, std::move(descriptor_id), std::move(metas), std::move(rows));
}

FeatureBank FeatureBank::from_rows(std::size_t dim, std::string descriptor_id,
                                   std::vector<RecordMeta> metas, std::vector<float> rows) {
  if (rows.size() != metas.size() * dim) {
    throw Error(ErrorCode::DimMismatch, "vector block holds " + std::to_string(rows.size()) +
                                            " values, expected " +
                                            std::to_string(metas.size() * dim));
  }
  for (float v : rows) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite vector component");
  }

  std::vector<std::size_t> order(metas.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return metas[a].id < metas[b].id; });

  FeatureBank bank;
  bank.dim_ = dim;
  bank.descriptor_id_ = std::move(descriptor_id);
  bank.metas_.reserve(metas.size());
  bank.rows_.resize(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    RecordMeta& m = metas[order[i]];
    if (m.id.empty()) throw Error(ErrorCode::InvalidArgument, "record id is empty");
    if (i > 0 && bank.metas_.back().id == m.id) {
      throw Error(ErrorCode::InvalidArgument, "duplicate record id " + m.id);
    }
    std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(order[i] * dim), dim,
                bank.rows_.begin() + static_cast<std::ptrdiff_t>(i * dim));
    bank.metas_.push_back(std::move(m));
  }
  return bank;
}

std::optional<std::size_t> FeatureBank::find(std::string_view id) const {
  auto it = std::lower_bound(metas_.begin(), metas_.end(), id,
                             [](const RecordMeta& m, std::string_view key) { return m.id < key; });
  if (it == metas_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - metas_.begin());
}

std::size_t FeatureBank::label_count() const {
  std::set<std::string_view> labels;
  for (const auto& m : metas_) labels.insert(m.label);
  return labels.size();
}

bool FeatureBank::operator==(const FeatureBank& other) const {
  return dim_ == other.dim_ && descriptor_id_ == other.descriptor_id_ &&
         metas_ == other.metas_ && rows_.size() == other.rows_.size() &&
         (rows_.empty() ||
          std::memcmp(rows_.data(), other.rows_.data(), rows_.size() * sizeof(float)) == 0);
}

FeatureBank sample_bank(const FeatureBank& bank, std::size_t s, std::uint64_t seed) {
  if (s == 0 || s > bank.size()) {
    throw Error(ErrorCode::SampleTooLarge, "sample size " + std::to_string(s) +
                                               " outside [1, " + std::to_string(bank.size()) +
                                               "]");
  }
  if (s == bank.size()) return bank;

  // partial Fisher-Yates over indices
  std::vector<std::size_t> idx(bank.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(s);
  std::sort(idx.begin(), idx.end());

  std::vector<RecordMeta> metas;
  std::vector<float> rows;
  metas.reserve(s);
  rows.reserve(s * bank.dim());
  for (std::size_t i : idx) {
    metas.push_back(bank.meta(i));
    auto v = bank.vector(i);
    rows.insert(rows.end(), v.begin(), v.end());
  }
  return FeatureBank::from_rows(bank.dim(), bank.descriptor_id(), std::move(metas),
                                std::move(rows));
}

}  // namespace ricb
