#include <cstdio>
#include <fstream>

#include "ricb/csv.hpp"
#include "ricb/error.hpp"
#include "ricb/orientation.hpp"

namespace ricb {

void GroundTruthTable::insert(const std::string& id, AngleDeg angle) {
  if (!angles_.emplace(id, angle).second) {
    throw Error(ErrorCode::InvalidArgument, "duplicate ground-truth id " + id);
  }
}

std::optional<AngleDeg> GroundTruthTable::find(const std::string& id) const {
  auto it = angles_.find(id);
  if (it == angles_.end()) return std::nullopt;
  return it->second;
}

void GroundTruthTable::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "id,angle_deg\n";
  char buf[64];
  for (const auto& [id, angle] : angles_) {
    std::snprintf(buf, sizeof buf, "%.17g", angle.value());
    csv::write_row(out, {id, buf});
  }
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

GroundTruthTable GroundTruthTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  auto header = csv::read_row(in);
  if (!header || *header != std::vector<std::string>{"id", "angle_deg"}) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": expected header id,angle_deg");
  }
  GroundTruthTable table;
  std::size_t line = 1;
  while (auto row = csv::read_row(in)) {
    ++line;
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != 2) {
      throw Error(ErrorCode::InvalidArgument,
                  path.string() + ":" + std::to_string(line) + ": expected 2 fields");
    }
    double v;
    try {
      std::size_t used = 0;
      v = std::stod((*row)[1], &used);
      if (used != (*row)[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  path.string() + ":" + std::to_string(line) + ": bad angle");
    }
    table.insert((*row)[0], wrap_deg(v));
  }
  return table;
}

}  // namespace ricb
