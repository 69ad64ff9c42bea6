#include <cstdio>
#include <fstream>

#include "ricb/csv.hpp"
#include "ricb/error.hpp"
#include "ricb/evalharness.hpp"

namespace ricb {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

void emit_csv(const PrecisionReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "n_percent,precision_without,precision_with,improvement\n";
  for (const auto& r : report.rows) {
    csv::write_row(out, {fixed6(r.n_percent), fixed6(r.precision_without),
                         fixed6(r.precision_with), fixed6(r.improvement)});
  }
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void emit_csv(std::span<const TimingReport> reports, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "arm,bank_size,dim,k,sample_size,mean_ms,median_ms,p95_ms\n";
  for (const auto& r : reports) {
    csv::write_row(out, {std::string(to_string(r.arm)), std::to_string(r.bank_size),
                         std::to_string(r.dim), std::to_string(r.k), std::to_string(r.sample_size),
                         fixed6(r.mean_ms), fixed6(r.median_ms), fixed6(r.p95_ms)});
  }
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::vector<PrecisionRow> read_precision_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  auto header = csv::read_row(in);
  if (!header || *header != std::vector<std::string>{"n_percent", "precision_without",
                                                     "precision_with", "improvement"}) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": not a precision report");
  }
  std::vector<PrecisionRow> rows;
  while (auto row = csv::read_row(in)) {
    if (row->size() != 4) throw Error(ErrorCode::InvalidArgument, path.string() + ": bad row");
    rows.push_back({std::stod((*row)[0]), std::stod((*row)[1]), std::stod((*row)[2]),
                    std::stod((*row)[3])});
  }
  return rows;
}

}  // namespace ricb
