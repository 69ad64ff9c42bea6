#include <algorithm>
#include <cctype>

#include "ricb/bank.hpp"
#include "ricb/error.hpp"

namespace ricb {

namespace {

bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

}  // namespace

DatasetManifest ingest_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  DatasetManifest manifest;
  try {
    if (!fs::is_directory(root)) {
      throw Error(ErrorCode::UnreadableDirectory, root.string() + " is not a directory");
    }
    for (const auto& category : fs::directory_iterator(root)) {
      if (!category.is_directory()) continue;
      std::string label = category.path().filename().string();
      if (label.empty() || label.front() == '.') continue;
      for (const auto& file : fs::directory_iterator(category.path())) {
        std::string name = file.path().filename().string();
        if (!file.is_regular_file() || name.front() == '.' || !is_image_file(file.path())) {
          continue;
        }
        manifest.entries.push_back({label + "/" + name, label, file.path()});
      }
    }
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::UnreadableDirectory, e.what());
  }
  if (manifest.entries.empty()) {
    throw Error(ErrorCode::EmptyDataset, "no images under " + root.string());
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  return manifest;
}

}  // namespace ricb
