#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "ricb/error.hpp"
#include "ricb/imaging.hpp"

namespace ricb {

namespace {

bool has_prefix(std::span<const std::uint8_t> bytes, std::initializer_list<std::uint8_t> magic) {
  return bytes.size() >= magic.size() && std::equal(magic.begin(), magic.end(), bytes.begin());
}

bool supported_signature(std::span<const std::uint8_t> bytes) {
  return has_prefix(bytes, {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A}) ||
         has_prefix(bytes, {0xFF, 0xD8, 0xFF}) || has_prefix(bytes, {'B', 'M'});
}

}  // namespace

RasterImage decode_image_bytes(std::span<const std::uint8_t> bytes) {
  if (!supported_signature(bytes)) {
    throw Error(ErrorCode::UnsupportedFormat, "not a PNG, JPEG or BMP stream");
  }
  cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8U,
              const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat m;
  try {
    m = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::CorruptImage, e.what());
  }
  if (m.empty()) throw Error(ErrorCode::CorruptImage, "image data could not be decoded");

  float full;
  switch (m.depth()) {
    case CV_8U: full = 255.0f; break;
    case CV_16U: full = 65535.0f; break;
    default: throw Error(ErrorCode::UnsupportedFormat, "unsupported sample depth");
  }
  cv::Mat f;
  m.convertTo(f, CV_32F);

  const int channels = f.channels();
  if (channels < 1 || channels > 4) {
    throw Error(ErrorCode::UnsupportedFormat, "unsupported channel count");
  }
  RasterImage out(f.cols, f.rows);
  for (int y = 0; y < f.rows; ++y) {
    const float* row = f.ptr<float>(y);
    for (int x = 0; x < f.cols; ++x) {
      const float* p = row + static_cast<std::size_t>(x) * channels;
      // divide rather than scale so byte / 255 is correctly rounded
      float r, g, b, alpha = 1.0f;
      if (channels <= 2) {
        r = g = b = p[0] / full;
        if (channels == 2) alpha = p[1] / full;
      } else {
        // OpenCV hands back BGR(A)
        b = p[0] / full;
        g = p[1] / full;
        r = p[2] / full;
        if (channels == 4) alpha = p[3] / full;
      }
      out.at(x, y, 0) = std::clamp(r * alpha, 0.0f, 1.0f);
      out.at(x, y, 1) = std::clamp(g * alpha, 0.0f, 1.0f);
      out.at(x, y, 2) = std::clamp(b * alpha, 0.0f, 1.0f);
    }
  }
  return out;
}

RasterImage decode_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_image_bytes(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        float v = std::clamp(img.at(x, y, c), 0.0f, 1.0f);
        row[x * 3 + (2 - c)] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", m, out)) throw Error(ErrorCode::IoError, "PNG encoding failed");
  return out;
}

void write_png(const RasterImage& img, const std::filesystem::path& path) {
  auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace ricb
