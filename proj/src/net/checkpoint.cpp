// Copyright 2026 The Auction Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "af/net/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "af/errors.hpp"

namespace af::net {

namespace {

constexpr const char* kMagic = "AFCKPT";
constexpr int kVersion = 1;

struct ConfigField {
  const char* key;
  int NetConfig::*field;
};

constexpr ConfigField kIntFields[] = {
    {"d", &NetConfig::model_dim},
    {"heads", &NetConfig::heads},
    {"conv_hidden", &NetConfig::conv_hidden},
    {"mlp_hidden", &NetConfig::mlp_hidden},
    {"layers", &NetConfig::layers},
    {"embed_dim", &NetConfig::embed_dim},
    {"bidder_vocab", &NetConfig::bidder_vocab},
    {"item_vocab", &NetConfig::item_vocab},
    {"bidder_dim", &NetConfig::bidder_dim},
    {"item_dim", &NetConfig::item_dim},
};

void write_le(std::ostream& out, std::span<const float> values) {
  static_assert(sizeof(float) == 4);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * 4));
  } else {
    for (float v : values) {
      const std::uint32_t bits = __builtin_bswap32(std::bit_cast<std::uint32_t>(v));
      out.write(reinterpret_cast<const char*>(&bits), 4);
    }
  }
}

std::vector<float> read_le(const char* bytes, std::size_t count) {
  std::vector<float> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, bytes + 4 * i, 4);
    if constexpr (std::endian::native != std::endian::little) bits = __builtin_bswap32(bits);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

[[noreturn]] void corrupt(const std::filesystem::path& path, const std::string& why) {
  throw ValidationError("checkpoint " + path.string() + ": " + why);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const MechanismNet& net,
                     const std::map<std::string, std::string>& meta) {
  const NetConfig& c = net.config();
  std::ostringstream head;
  head << kMagic << ' ' << kVersion << '\n';
  for (const auto& f : kIntFields) head << "config " << f.key << ' ' << c.*(f.field) << '\n';
  head << "config discrete " << (c.discrete ? 1 : 0) << '\n';
  for (const auto& [k, v] : meta) {
    if (k.find_first_of(" \n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw ValidationError("checkpoint metadata must be single-line with a space-free key: " + k);
    }
    head << "meta " << k << ' ' << v << '\n';
  }
  std::uint64_t offset = 0;
  const MechanismParams& p = net.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Tensor& t = p.at(i);
    head << "tensor " << p.names()[i] << ' ' << offset << ' ' << t.rank();
    for (auto d : t.shape()) head << ' ' << d;
    head << '\n';
    offset += static_cast<std::uint64_t>(t.numel()) * 4;
  }
  head << "end " << offset << '\n';

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write checkpoint " + path.string());
  const std::string text = head.str();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Tensor& t : p.tensors()) write_le(out, t.data());
  if (!out) throw ValidationError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != std::string(kMagic) + " " + std::to_string(kVersion)) {
    corrupt(path, "bad header");
  }
  Checkpoint ck;
  struct Entry {
    std::string name;
    std::uint64_t offset;
    Shape shape;
  };
  std::vector<Entry> entries;
  std::uint64_t blob_bytes = 0;
  bool ended = false;
  while (!ended && std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "config") {
      std::string key;
      long long value;
      if (!(ls >> key >> value)) corrupt(path, "bad config line: " + line);
      bool known = false;
      if (key == "discrete") {
        ck.config.discrete = value != 0;
        known = true;
      }
      for (const auto& f : kIntFields) {
        if (key == f.key) {
          ck.config.*(f.field) = static_cast<int>(value);
          known = true;
        }
      }
      if (!known) corrupt(path, "unknown config key " + key);
    } else if (kind == "meta") {
      std::string key;
      ls >> key;
      std::string value;
      std::getline(ls, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      ck.meta[key] = value;
    } else if (kind == "tensor") {
      Entry e;
      int rank;
      if (!(ls >> e.name >> e.offset >> rank) || rank < 0) corrupt(path, "bad tensor line: " + line);
      e.shape.resize(static_cast<std::size_t>(rank));
      for (auto& d : e.shape) {
        if (!(ls >> d) || d < 0) corrupt(path, "bad tensor line: " + line);
      }
      entries.push_back(std::move(e));
    } else if (kind == "end") {
      if (!(ls >> blob_bytes)) corrupt(path, "bad end line");
      ended = true;
    } else {
      corrupt(path, "unexpected line: " + line);
    }
  }
  if (!ended) corrupt(path, "missing end marker");
  std::vector<char> blob(blob_bytes);
  in.read(blob.data(), static_cast<std::streamsize>(blob_bytes));
  if (static_cast<std::uint64_t>(in.gcount()) != blob_bytes) corrupt(path, "truncated blob");
  for (const Entry& e : entries) {
    const std::uint64_t bytes = static_cast<std::uint64_t>(shape_numel(e.shape)) * 4;
    if (e.offset + bytes > blob_bytes) corrupt(path, "tensor " + e.name + " runs past the blob");
    ck.params.add(e.name, Tensor(e.shape, read_le(blob.data() + e.offset, bytes / 4)));
  }
  return ck;
}

MechanismNet load_mechanism(const std::filesystem::path& path) {
  Checkpoint ck = load_checkpoint(path);
  return MechanismNet(ck.config, std::move(ck.params));
}

}  // namespace af::net
