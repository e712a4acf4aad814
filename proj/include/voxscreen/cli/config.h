//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_CLI_CONFIG_H_
#define VOXSCREEN_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voxscreen::cli {

// Flat key=value settings. Keys under a "[section]" header become
// "section.key". Relative paths resolve against the directory of the file
// (or the working directory for values set on the command line).
class Config {
public:
  static Config parse(std::string_view text, const std::filesystem::path &base_dir);
  static Config load(const std::filesystem::path &file);

  // key may be "section.key" or a top-level key.
  void set(const std::string &key, std::string value,
           const std::filesystem::path &base_dir);

  bool has(const std::string &key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string &key) const;
  std::filesystem::path resolve(const std::string &key) const;
  std::filesystem::path base(const std::string &key) const;
  std::vector<std::string> keys() const;

private:
  struct Entry {
    std::string value;
    std::filesystem::path base;
  };
  std::map<std::string, Entry> entries_;
};

// Typed reads that record problems instead of throwing, so one pass reports
// every bad or missing setting. finish() throws kConfig when any were found.
class Reader {
public:
  explicit Reader(const Config &config): config_(config) { }

  std::string text(const std::string &key, const std::string &fallback);
  std::optional<std::string> optional_text(const std::string &key);
  double number(const std::string &key, double fallback,
                double lo = -1e300, double hi = 1e300);
  std::size_t count(const std::string &key, std::size_t fallback,
                    std::size_t min = 0);
  bool flag(const std::string &key, bool fallback);
  std::uint64_t seed(bool required);
  // Must name an existing file or directory.
  std::filesystem::path input(const std::string &key);
  std::filesystem::path output(const std::string &key);
  std::vector<std::filesystem::path> inputs(const std::string &key);

  void problem(std::string message) { problems_.push_back(std::move(message)); }
  void finish() const;

private:
  const Config &config_;
  std::vector<std::string> problems_;
};

}  // namespace voxscreen::cli

#endif  // VOXSCREEN_CLI_CONFIG_H_
