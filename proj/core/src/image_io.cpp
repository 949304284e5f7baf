// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>

#include "rlsp/color.hpp"
#include "rlsp/error.hpp"

namespace fs = std::filesystem;

namespace rlsp {

static_assert(std::endian::native == std::endian::little,
              "raw tensor and checkpoint I/O assume a little-endian host");

namespace {

std::uint8_t quantize(float v) {
  const float scaled = std::nearbyint(std::clamp(v, 0.0f, 1.0f) * 255.0f);
  return static_cast<std::uint8_t>(scaled);
}

std::optional<long long> stem_number(const fs::path& p) {
  const std::string stem = p.stem().string();
  // Last run of digits in the stem, so "frame_0012" and "0012" both work.
  auto end = std::find_if(stem.rbegin(), stem.rend(), [](char c) { return std::isdigit(c); });
  if (end == stem.rend()) return std::nullopt;
  auto begin = std::find_if(end, stem.rend(), [](char c) { return !std::isdigit(c); });
  std::string digits(begin.base(), end.base());
  if (digits.size() > 18) return std::nullopt;
  return std::stoll(digits);
}

bool is_png(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](char c) { return std::tolower(c); });
  return ext == ".png";
}

}  // namespace

Tensor load_png(const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  const int H = static_cast<int>(image.height), W = static_cast<int>(image.width);
  Tensor t(Shape{1, channels, H, W});
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < channels; ++c)
        t.at(0, c, y, x) =
            static_cast<float>(buffer[(static_cast<std::size_t>(y) * W + x) * channels + c]) /
            255.0f;
  return t;
}

void save_png(const Tensor& frame, const fs::path& path) {
  const int C = frame.channels();
  if (frame.batch() != 1 || (C != 1 && C != 3)) {
    throw ShapeError("save_png: expected a 1x1 or 1x3 frame, got " + to_string(frame.shape()));
  }
  const int H = frame.height(), W = frame.width();
  std::vector<std::uint8_t> buffer(static_cast<std::size_t>(H) * W * C);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < C; ++c)
        buffer[(static_cast<std::size_t>(y) * W + x) * C + c] = quantize(frame.at(0, c, y, x));
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(W);
  image.height = static_cast<png_uint_32>(H);
  image.format = C == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<long long, fs::path> ordered;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !is_png(entry.path())) continue;
    const auto number = stem_number(entry.path());
    if (!number) {
      throw IoError("frame file has no frame number: " + entry.path().string());
    }
    auto [it, inserted] = ordered.emplace(*number, entry.path());
    if (!inserted) {
      throw IoError("frame number " + std::to_string(*number) + " used by both " +
                    it->second.string() + " and " + entry.path().string());
    }
  }
  std::vector<fs::path> files;
  files.reserve(ordered.size());
  for (auto& [n, p] : ordered) files.push_back(p);
  return files;
}

VideoClip load_sequence(const fs::path& dir) {
  const auto files = list_frames(dir);
  if (files.empty()) throw IoError("no PNG frames in " + dir.string());
  VideoClip clip;
  for (const auto& f : files) {
    Tensor t = load_png(f);
    if (!clip.frames.empty() && t.shape() != clip.frames.front().shape()) {
      throw IoError("frame " + f.string() + " is " + to_string(t.shape()) + " but " +
                    files.front().string() + " is " + to_string(clip.frames.front().shape()));
    }
    clip.frames.push_back(std::move(t));
  }
  clip.color_space = clip.channels() == 1 ? ColorSpace::kY : ColorSpace::kRgb;
  return clip;
}

void save_sequence(const VideoClip& clip, const fs::path& dir) {
  clip.validate();
  fs::create_directories(dir);
  for (std::size_t i = 0; i < clip.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.png", i);
    if (clip.color_space == ColorSpace::kYCbCr) {
      save_png(ycbcr_to_rgb(clip.frames[i]), dir / name);
    } else {
      save_png(clip.frames[i], dir / name);
    }
  }
}

std::vector<fs::path> list_sequence_dirs(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const bool has_png = std::any_of(fs::directory_iterator(entry.path()), fs::directory_iterator(),
                                     [](const fs::directory_entry& e) {
                                       return e.is_regular_file() && is_png(e.path());
                                     });
    if (has_png) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

namespace {
constexpr char kRawMagic[8] = {'R', 'L', 'S', 'P', 'T', 'N', 'S', 'R'};
}

void write_raw_tensor(const Tensor& t, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kRawMagic, sizeof(kRawMagic));
  const Shape& s = t.shape();
  const std::uint32_t dims[4] = {static_cast<std::uint32_t>(s.batch),
                                 static_cast<std::uint32_t>(s.channels),
                                 static_cast<std::uint32_t>(s.height),
                                 static_cast<std::uint32_t>(s.width)};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(t.data().data()),
            static_cast<std::streamsize>(t.size() * sizeof(float)));
  if (!out) throw IoError("write failed: " + path.string());
}

Tensor read_raw_tensor(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  std::uint32_t dims[4];
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in || std::memcmp(magic, kRawMagic, sizeof(magic)) != 0) {
    throw FormatError("not a raw tensor dump: " + path.string());
  }
  for (auto d : dims) {
    if (d == 0 || d > (1u << 24)) throw FormatError("bad dimensions in " + path.string());
  }
  const Shape s{static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]),
                static_cast<int>(dims[3])};
  std::vector<float> data(s.elements());
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!in) throw FormatError("truncated raw tensor: " + path.string());
  return Tensor(s, std::move(data));
}

void save_pgm(const Tensor& frame, const fs::path& path) {
  if (frame.batch() != 1 || frame.channels() != 1) {
    throw ShapeError("save_pgm: expected a 1x1 frame, got " + to_string(frame.shape()));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  for (float v : frame.data()) out.put(static_cast<char>(quantize(v)));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rlsp
