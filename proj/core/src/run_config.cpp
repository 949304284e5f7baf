// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rlsp/error.hpp"

namespace rlsp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw FormatError("config key '" + std::string(key) + "': expected " + expected + ", got '" +
                    std::string(value) + "'");
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out{};
  const auto v = trim(value);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    bad_value(key, value, "an integer");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto v = trim(value);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    bad_value(key, value, "a number");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, value, "true/false");
}

std::vector<std::int64_t> parse_list(std::string_view key, std::string_view value) {
  std::vector<std::int64_t> out;
  auto rest = trim(value);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(parse_int<std::int64_t>(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = trim(rest.substr(comma + 1));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "layers",    "filters",        "scale",          "use_neighbors", "use_feedback",
      "use_hidden", "unroll",        "batch",          "lr0",           "lr_drop_steps",
      "lr_drop_factor", "max_iters", "seed",           "crop",          "val_every",
      "val_window", "log_every",     "sigma",          "kernel_size",   "threads"};
  return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "layers") cell.layers = parse_int<int>(key, value);
  else if (key == "filters") cell.filters = parse_int<int>(key, value);
  else if (key == "scale") cell.scale = degrade.scale = parse_int<int>(key, value);
  else if (key == "use_neighbors") cell.use_neighbors = parse_bool(key, value);
  else if (key == "use_feedback") cell.use_feedback = parse_bool(key, value);
  else if (key == "use_hidden") cell.use_hidden = parse_bool(key, value);
  else if (key == "unroll") train.unroll = parse_int<int>(key, value);
  else if (key == "batch") train.batch = parse_int<int>(key, value);
  else if (key == "lr0") train.lr0 = parse_double(key, value);
  else if (key == "lr_drop_steps") train.lr_drop_steps = parse_list(key, value);
  else if (key == "lr_drop_factor") train.lr_drop_factor = parse_double(key, value);
  else if (key == "max_iters") train.max_iters = parse_int<std::int64_t>(key, value);
  else if (key == "seed") train.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "crop") train.crop = parse_int<int>(key, value);
  else if (key == "val_every") train.val_every = parse_int<int>(key, value);
  else if (key == "val_window") train.val_window = parse_int<int>(key, value);
  else if (key == "log_every") train.log_every = parse_int<int>(key, value);
  else if (key == "sigma") degrade.sigma = parse_double(key, value);
  else if (key == "kernel_size") degrade.kernel_size = parse_int<int>(key, value);
  else if (key == "threads") threads = parse_int<int>(key, value);
  else throw FormatError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw FormatError("override '" + std::string(assignment) + "' is not key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::validate() const {
  try {
    cell.validate();
  } catch (const ShapeError& e) {
    throw FormatError(e.what());
  }
  train.validate();
  degrade.validate();
  if (threads < 0) throw FormatError("threads must be >= 0");
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "layers = " << cell.layers << '\n'
     << "filters = " << cell.filters << '\n'
     << "scale = " << cell.scale << '\n'
     << "use_neighbors = " << b(cell.use_neighbors) << '\n'
     << "use_feedback = " << b(cell.use_feedback) << '\n'
     << "use_hidden = " << b(cell.use_hidden) << '\n'
     << "unroll = " << train.unroll << '\n'
     << "batch = " << train.batch << '\n'
     << "lr0 = " << format_double(train.lr0) << '\n'
     << "lr_drop_steps = ";
  for (std::size_t i = 0; i < train.lr_drop_steps.size(); ++i) {
    os << (i ? ", " : "") << train.lr_drop_steps[i];
  }
  os << '\n'
     << "lr_drop_factor = " << format_double(train.lr_drop_factor) << '\n'
     << "max_iters = " << train.max_iters << '\n'
     << "seed = " << train.seed << '\n'
     << "crop = " << train.crop << '\n'
     << "val_every = " << train.val_every << '\n'
     << "val_window = " << train.val_window << '\n'
     << "log_every = " << train.log_every << '\n'
     << "sigma = " << format_double(degrade.sigma) << '\n'
     << "kernel_size = " << degrade.kernel_size << '\n'
     << "threads = " << threads << '\n';
  return os.str();
}

RunConfig RunConfig::parse(std::string_view text, std::string_view source) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    try {
      config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const FormatError& e) {
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

}  // namespace rlsp
