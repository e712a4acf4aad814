//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/cli/config.h"

#include <charconv>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen::cli {

Config Config::parse(std::string_view text, const std::filesystem::path &base_dir) {
  Config cfg;
  std::string section;
  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty() || line.starts_with('#') || line.starts_with(';'))
      continue;
    if (line.starts_with('[')) {
      if (!line.ends_with(']') || line.size() < 3)
        throw ParseError("malformed section header", ln + 1);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key = value", ln + 1);
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty())
      throw ParseError("empty key", ln + 1);
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.has(full))
      throw ParseError("duplicate key '" + full + "'", ln + 1);
    cfg.set(full, std::string(trim(line.substr(eq + 1))), base_dir);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path &file) {
  return parse(read_file(file), file.parent_path());
}

void Config::set(const std::string &key, std::string value,
                 const std::filesystem::path &base_dir) {
  entries_[key] = { std::move(value), base_dir };
}

std::optional<std::string> Config::get(const std::string &key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    return std::nullopt;
  return it->second.value;
}

std::filesystem::path Config::resolve(const std::string &key) const {
  const Entry &e = entries_.at(key);
  std::filesystem::path p(e.value);
  return p.is_absolute() || e.base.empty() ? p : e.base / p;
}

std::filesystem::path Config::base(const std::string &key) const {
  return entries_.at(key).base;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto &[k, v]: entries_)
    out.push_back(k);
  return out;
}

std::string Reader::text(const std::string &key, const std::string &fallback) {
  return config_.get(key).value_or(fallback);
}

std::optional<std::string> Reader::optional_text(const std::string &key) {
  return config_.get(key);
}

double Reader::number(const std::string &key, double fallback, double lo, double hi) {
  auto v = config_.get(key);
  if (!v)
    return fallback;
  double d = 0;
  if (!parse_double(*v, d)) {
    problem(key + ": '" + *v + "' is not a number");
    return fallback;
  }
  if (d < lo || d > hi) {
    problem(key + ": " + *v + " is out of range");
    return fallback;
  }
  return d;
}

std::size_t Reader::count(const std::string &key, std::size_t fallback,
                          std::size_t min) {
  auto v = config_.get(key);
  if (!v)
    return fallback;
  long n = 0;
  if (!parse_int(*v, n) || n < 0) {
    problem(key + ": '" + *v + "' is not a non-negative integer");
    return fallback;
  }
  if (static_cast<std::size_t>(n) < min) {
    problem(key + ": must be >= " + std::to_string(min));
    return fallback;
  }
  return static_cast<std::size_t>(n);
}

bool Reader::flag(const std::string &key, bool fallback) {
  auto v = config_.get(key);
  if (!v)
    return fallback;
  if (*v == "1" || *v == "true" || *v == "yes")
    return true;
  if (*v == "0" || *v == "false" || *v == "no")
    return false;
  problem(key + ": '" + *v + "' is not a boolean");
  return fallback;
}

std::uint64_t Reader::seed(bool required) {
  auto v = config_.get("seed");
  if (!v) {
    if (required)
      problem("seed: required for this command");
    return 0;
  }
  std::uint64_t s = 0;
  auto t = trim(*v);
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
  if (ec != std::errc() || end != t.data() + t.size())
    problem("seed: '" + *v + "' is not an unsigned integer");
  return s;
}

std::filesystem::path Reader::input(const std::string &key) {
  if (!config_.has(key)) {
    problem(key + ": required");
    return {};
  }
  auto p = config_.resolve(key);
  if (!std::filesystem::exists(p))
    problem(key + ": " + p.string() + " does not exist");
  return p;
}

std::filesystem::path Reader::output(const std::string &key) {
  if (!config_.has(key)) {
    problem(key + ": required");
    return {};
  }
  return config_.resolve(key);
}

std::vector<std::filesystem::path> Reader::inputs(const std::string &key) {
  std::vector<std::filesystem::path> out;
  if (!config_.has(key)) {
    problem(key + ": required");
    return out;
  }
  const auto base = config_.base(key);
  const std::string list = *config_.get(key);
  for (auto part: split(list, ',')) {
    auto t = trim(part);
    if (t.empty())
      continue;
    std::filesystem::path p(t);
    out.push_back(p.is_absolute() || base.empty() ? p : base / p);
  }
  for (const auto &p: out) {
    if (!std::filesystem::exists(p))
      problem(key + ": " + p.string() + " does not exist");
  }
  if (out.empty())
    problem(key + ": empty list");
  return out;
}

void Reader::finish() const {
  if (problems_.empty())
    return;
  std::string msg = "invalid configuration (" + std::to_string(problems_.size())
                    + (problems_.size() == 1 ? " problem): " : " problems): ");
  for (std::size_t i = 0; i < problems_.size(); ++i)
    msg += (i ? "; " : "") + problems_[i];
  throw Error(ErrorKind::kConfig, msg);
}

}  // namespace voxscreen::cli
