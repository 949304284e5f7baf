// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "rlsp/error.hpp"

namespace fs = std::filesystem;

namespace rlsp {

static_assert(std::endian::native == std::endian::little);

namespace {

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}
  template <typename T>
  void put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void floats(std::span<const float> v) {
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(v.size() * sizeof(float)));
  }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  Reader(std::ifstream& in, const fs::path& path) : in_(in), path_(path) {}
  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) fail("truncated");
    return v;
  }
  void floats(std::span<float> v) {
    in_.read(reinterpret_cast<char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(float)));
    if (!in_) fail("truncated float payload");
  }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }
  [[noreturn]] void fail(const std::string& why) const {
    throw FormatError("checkpoint " + path_.string() + ": " + why);
  }

 private:
  std::ifstream& in_;
  const fs::path& path_;
};

void write_layers(Writer& w, const CellWeights& weights) {
  for (const auto& layer : weights.layers) {
    w.floats(layer.weights.data());
    w.floats(layer.bias);
  }
}

void read_layers(Reader& r, CellWeights& weights) {
  for (auto& layer : weights.layers) {
    r.floats(layer.weights.data());
    r.floats(layer.bias);
  }
}

}  // namespace

void save_checkpoint(const fs::path& path, const CellConfig& config, const CellWeights& weights,
                     const AdamState* adam) {
  weights.check(config);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    Writer w(out);
    w.bytes("RLSP", 4);
    w.put<std::uint32_t>(kCheckpointVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(config.layers));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(config.filters));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(config.scale));
    w.put<std::uint8_t>(config.use_neighbors ? 1 : 0);
    w.put<std::uint8_t>(config.use_feedback ? 1 : 0);
    w.put<std::uint8_t>(config.use_hidden ? 1 : 0);
    w.put<std::uint8_t>(0);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(weights.layers.size()));
    for (const auto& layer : weights.layers) {
      const Shape& s = layer.weights.shape();
      w.put<std::uint32_t>(static_cast<std::uint32_t>(s.batch));
      w.put<std::uint32_t>(static_cast<std::uint32_t>(s.channels));
      w.put<std::uint32_t>(static_cast<std::uint32_t>(s.height));
      w.put<std::uint32_t>(static_cast<std::uint32_t>(s.width));
      w.floats(layer.weights.data());
      w.floats(layer.bias);
    }
    if (adam != nullptr) {
      adam->first_moment.check(config);
      adam->second_moment.check(config);
      w.bytes("ADAM", 4);
      w.put<std::int64_t>(adam->step);
      w.put<double>(adam->beta1);
      w.put<double>(adam->beta2);
      w.put<double>(adam->epsilon);
      write_layers(w, adam->first_moment);
      write_layers(w, adam->second_moment);
    }
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  Reader r(in, path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "RLSP", 4) != 0) r.fail("bad magic");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) r.fail("unsupported version " + std::to_string(version));

  Checkpoint ck;
  const auto layers = r.get<std::uint32_t>();
  const auto filters = r.get<std::uint32_t>();
  const auto scale = r.get<std::uint32_t>();
  if (layers < 2 || layers > 1024 || filters < 1 || filters > 65536 || scale < 1 || scale > 64) {
    r.fail("implausible config " + std::to_string(layers) + "-" + std::to_string(filters) +
           " x" + std::to_string(scale));
  }
  ck.config.layers = static_cast<int>(layers);
  ck.config.filters = static_cast<int>(filters);
  ck.config.scale = static_cast<int>(scale);
  ck.config.use_neighbors = r.get<std::uint8_t>() != 0;
  ck.config.use_feedback = r.get<std::uint8_t>() != 0;
  ck.config.use_hidden = r.get<std::uint8_t>() != 0;
  r.get<std::uint8_t>();

  ck.weights = CellWeights::zeros(ck.config);
  const auto count = r.get<std::uint32_t>();
  if (count != ck.weights.layers.size()) {
    r.fail("config needs " + std::to_string(ck.weights.layers.size()) + " layers, file has " +
           std::to_string(count));
  }
  for (std::size_t i = 0; i < ck.weights.layers.size(); ++i) {
    auto& layer = ck.weights.layers[i];
    const Shape& want = layer.weights.shape();
    const Shape got{static_cast<int>(r.get<std::uint32_t>()), static_cast<int>(r.get<std::uint32_t>()),
                    static_cast<int>(r.get<std::uint32_t>()), static_cast<int>(r.get<std::uint32_t>())};
    if (got != want) {
      r.fail("layer " + std::to_string(i) + " has dims " + to_string(got) + ", config needs " +
             to_string(want));
    }
    r.floats(layer.weights.data());
    r.floats(layer.bias);
  }

  if (!r.at_end()) {
    char section[4];
    in.read(section, 4);
    if (!in || std::memcmp(section, "ADAM", 4) != 0) r.fail("unknown trailing section");
    AdamState adam = AdamState::for_weights(ck.config);
    adam.step = r.get<std::int64_t>();
    adam.beta1 = r.get<double>();
    adam.beta2 = r.get<double>();
    adam.epsilon = r.get<double>();
    if (adam.step < 0) r.fail("negative optimiser step");
    read_layers(r, adam.first_moment);
    read_layers(r, adam.second_moment);
    if (!r.at_end()) r.fail("trailing bytes after optimiser section");
    ck.adam = std::move(adam);
  }
  return ck;
}

}  // namespace rlsp
