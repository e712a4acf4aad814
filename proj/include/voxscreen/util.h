//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_UTIL_H_
#define VOXSCREEN_UTIL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace voxscreen {

// 64-bit FNV-1a. Used wherever a hash must be stable across platforms
// (fingerprints, seed derivation).
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t state = kFnvOffset);
std::uint64_t fnv1a64(std::string_view text, std::uint64_t state = kFnvOffset);

// Derive an independent seed for a named sub-stream ("pose", "init",
// "shuffle", "folds", ...) of a single run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                          std::uint64_t index = 0);

// Thin wrapper over mt19937_64 with portable conversions; the standard
// distributions are implementation-defined, these are not.
class Rng {
public:
  explicit Rng(std::uint64_t seed): engine_(seed) { }

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform();
  // Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal();

  template <class T>
  void shuffle(std::vector<T> &items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once; callers write results to per-index slots.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)> &fn);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delim);
std::vector<std::string_view> split_lines(std::string_view text);

// Strict numeric parsing: the whole (trimmed) field must be consumed.
bool parse_double(std::string_view s, double &out);
bool parse_int(std::string_view s, long &out);

std::string read_file(const std::filesystem::path &path);
std::vector<std::uint8_t> read_binary(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view content);

}  // namespace voxscreen

#endif  // VOXSCREEN_UTIL_H_
