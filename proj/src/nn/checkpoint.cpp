//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/nn/checkpoint.h"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::vector<std::uint8_t> &out, T v) {
  const auto *p = reinterpret_cast<const std::uint8_t *>(&v);
  out.insert(out.end(), p, p + sizeof v);
}

void put_floats(std::vector<std::uint8_t> &out, const std::vector<double> &v) {
  for (double x: v)
    put(out, static_cast<float>(x));
}

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> b): bytes_(b) { }

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }

  std::string text(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char *>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::vector<double> floats(std::size_t n) {
    if (n > (bytes_.size() - pos_) / sizeof(float))
      throw Error(ErrorKind::kParse, "checkpoint truncated");
    std::vector<double> v(n);
    for (auto &x: v)
      x = get<float>();
    return v;
  }

  bool done() const { return pos_ == bytes_.size(); }

private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n)
      throw Error(ErrorKind::kParse, "checkpoint truncated");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Network &net,
                                            const AdaDeltaState &state) {
  const std::size_t n = net.parameter_count();
  if (state.eg2.size() != n || state.edx2.size() != n)
    throw Error(ErrorKind::kShape, "optimizer state does not match network");
  std::vector<std::uint8_t> out { 'V', 'X', 'N', 'N' };
  put(out, kCheckpointVersion);
  const std::string cfg = net.config().to_text();
  put(out, static_cast<std::uint32_t>(cfg.size()));
  out.insert(out.end(), cfg.begin(), cfg.end());
  put(out, static_cast<std::uint64_t>(n));
  put_floats(out, net.params());
  put(out, state.rho);
  put(out, state.epsilon);
  put_floats(out, state.eg2);
  put_floats(out, state.edx2);
  return out;
}

Model decode_checkpoint(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.text(4) != "VXNN")
    throw Error(ErrorKind::kParse, "not a checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw Error(ErrorKind::kParse, "unsupported checkpoint version "
                                       + std::to_string(version));
  const auto cfg_len = r.get<std::uint32_t>();
  Network net(NetworkConfig::from_text(r.text(cfg_len)));
  const auto n = r.get<std::uint64_t>();
  if (n != net.parameter_count())
    throw Error(ErrorKind::kParse, "checkpoint parameter count does not match config");
  net.params() = r.floats(n);
  AdaDeltaState state;
  state.rho = r.get<double>();
  state.epsilon = r.get<double>();
  state.eg2 = r.floats(n);
  state.edx2 = r.floats(n);
  if (!r.done())
    throw Error(ErrorKind::kParse, "trailing bytes in checkpoint");
  return { std::move(net), std::move(state) };
}

void write_checkpoint(const std::filesystem::path &path, const Network &net,
                      const AdaDeltaState &state) {
  const auto bytes = encode_checkpoint(net, state);
  write_file(path, std::string_view(reinterpret_cast<const char *>(bytes.data()),
                                    bytes.size()));
}

Model read_checkpoint(const std::filesystem::path &path) {
  return decode_checkpoint(read_binary(path));
}

std::string write_train_manifest(const TrainManifest &m) {
  std::string out = "seed " + std::to_string(m.seed) + "\nepochs "
                    + std::to_string(m.epochs) + '\n';
  for (std::size_t i = 0; i < m.losses.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", m.losses[i]);
    out += "loss " + std::to_string(i) + ' ' + buf + '\n';
  }
  return out;
}

TrainManifest read_train_manifest(std::string_view text) {
  TrainManifest m;
  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty())
      continue;
    auto tok = split(line, ' ');
    long v = 0;
    double d = 0;
    if (tok[0] == "seed" && tok.size() == 2) {
      auto f = trim(tok[1]);
      auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), m.seed);
      if (ec != std::errc() || end != f.data() + f.size())
        throw ParseError("bad seed", ln + 1);
    } else if (tok[0] == "epochs" && tok.size() == 2 && parse_int(tok[1], v) && v >= 0) {
      m.epochs = static_cast<std::size_t>(v);
    } else if (tok[0] == "loss" && tok.size() == 3 && parse_int(tok[1], v)
               && parse_double(tok[2], d)) {
      if (static_cast<std::size_t>(v) != m.losses.size())
        throw ParseError("loss entries out of order", ln + 1);
      m.losses.push_back(d);
    } else {
      throw ParseError("unrecognized manifest line", ln + 1);
    }
  }
  return m;
}

}  // namespace voxscreen::nn
