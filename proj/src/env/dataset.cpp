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

#include "af/env/dataset.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "af/env/sampler.hpp"
#include "af/errors.hpp"

namespace af {

ContextBatch ContextBatch::select(std::span<const int> source) const {
  ContextBatch out;
  out.count = static_cast<int>(source.size());
  out.n = n;
  out.m = m;
  out.bidder_dim = bidder_dim;
  out.item_dim = item_dim;
  const std::size_t bw = static_cast<std::size_t>(n) * bidder_dim;
  const std::size_t iw = static_cast<std::size_t>(m) * item_dim;
  out.bidder.reserve(source.size() * bw);
  out.item.reserve(source.size() * iw);
  for (int k : source) {
    out.bidder.insert(out.bidder.end(), bidder.begin() + static_cast<std::ptrdiff_t>(k * bw),
                      bidder.begin() + static_cast<std::ptrdiff_t>((k + 1) * bw));
    out.item.insert(out.item.end(), item.begin() + static_cast<std::ptrdiff_t>(k * iw),
                    item.begin() + static_cast<std::ptrdiff_t>((k + 1) * iw));
  }
  return out;
}

}  // namespace af

namespace af::env {

AuctionBatch Dataset::truthful(std::span<const int> indices) const {
  AuctionBatch b;
  b.count = static_cast<int>(indices.size());
  b.n = spec.n;
  b.m = spec.m;
  const std::size_t w = static_cast<std::size_t>(spec.n) * spec.m;
  b.bids.reserve(indices.size() * w);
  for (int k : indices) {
    b.bids.insert(b.bids.end(), values.begin() + static_cast<std::ptrdiff_t>(k * w),
                  values.begin() + static_cast<std::ptrdiff_t>((k + 1) * w));
  }
  b.contexts = contexts.select(indices);
  return b;
}

AuctionBatch Dataset::truthful() const {
  std::vector<int> all(static_cast<std::size_t>(count));
  std::iota(all.begin(), all.end(), 0);
  return truthful(all);
}

Dataset Dataset::slice(int first, int length) const {
  if (first < 0 || length < 0 || first + length > count) throw ValidationError("dataset slice out of range");
  std::vector<int> idx(static_cast<std::size_t>(length));
  std::iota(idx.begin(), idx.end(), first);
  Dataset out;
  out.spec = spec;
  out.seed = seed;
  out.count = length;
  out.contexts = contexts.select(idx);
  const std::size_t w = static_cast<std::size_t>(spec.n) * spec.m;
  out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first * w),
                    values.begin() + static_cast<std::ptrdiff_t>((first + length) * w));
  out.caps.assign(caps.begin() + static_cast<std::ptrdiff_t>(first * w),
                  caps.begin() + static_cast<std::ptrdiff_t>((first + length) * w));
  return out;
}

Dataset generate_dataset(const SettingSpec& spec, int count, std::uint64_t seed) {
  Dataset d;
  d.spec = spec;
  d.seed = seed;
  d.count = count;
  d.contexts = sample_contexts(spec, count, seed);
  d.values = sample_valuations(spec, d.contexts, seed);
  d.caps = value_caps(spec, d.contexts);
  return d;
}

namespace {

constexpr std::array<char, 4> kMagic = {'A', 'F', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) os.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::istream& is) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = is.get();
    if (c == EOF) throw ValidationError("dataset file truncated in header");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

void put_floats(std::ostream& os, std::span<const float> values) {
  for (float f : values) put_le(os, std::bit_cast<std::uint32_t>(f));
}

void get_floats(std::istream& is, std::span<float> out) {
  std::vector<unsigned char> raw(out.size() * 4);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(is.gcount()) != raw.size()) throw ValidationError("dataset file truncated in rows");
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * i]) | (static_cast<std::uint32_t>(raw[4 * i + 1]) << 8) |
                               (static_cast<std::uint32_t>(raw[4 * i + 2]) << 16) |
                               (static_cast<std::uint32_t>(raw[4 * i + 3]) << 24);
    out[i] = std::bit_cast<float>(bits);
  }
}

}  // namespace

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("cannot write dataset file " + path.string());
  os.write(kMagic.data(), 4);
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint8_t>(os, static_cast<std::uint8_t>(data.spec.id));
  for (int i = 0; i < 3; ++i) put_le<std::uint8_t>(os, 0);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(data.spec.n));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(data.spec.m));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(data.spec.bidder_dim));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(data.spec.item_dim));
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(data.count));
  put_le<std::uint64_t>(os, data.seed);
  const std::size_t xw = static_cast<std::size_t>(data.spec.n) * data.spec.bidder_dim;
  const std::size_t yw = static_cast<std::size_t>(data.spec.m) * data.spec.item_dim;
  const std::size_t vw = static_cast<std::size_t>(data.spec.n) * data.spec.m;
  for (int k = 0; k < data.count; ++k) {
    put_floats(os, std::span(data.contexts.bidder).subspan(k * xw, xw));
    put_floats(os, std::span(data.contexts.item).subspan(k * yw, yw));
    put_floats(os, std::span(data.values).subspan(k * vw, vw));
  }
  if (!os) throw ValidationError("failed writing dataset file " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open dataset file " + path.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), 4);
  if (magic != kMagic) throw ValidationError(path.string() + " is not a dataset file");
  if (get_le<std::uint32_t>(is) != kVersion) throw ValidationError("unsupported dataset version in " + path.string());
  const char id = static_cast<char>(get_le<std::uint8_t>(is));
  for (int i = 0; i < 3; ++i) get_le<std::uint8_t>(is);
  const int n = static_cast<int>(get_le<std::uint32_t>(is));
  const int m = static_cast<int>(get_le<std::uint32_t>(is));
  const int dx = static_cast<int>(get_le<std::uint32_t>(is));
  const int dy = static_cast<int>(get_le<std::uint32_t>(is));
  const auto count = get_le<std::uint64_t>(is);
  Dataset d;
  d.spec = setting_by_id(id).rescaled(n, m);
  if (dx != d.spec.bidder_dim || dy != d.spec.item_dim) throw ValidationError("context dims in " + path.string() + " do not match setting");
  d.seed = get_le<std::uint64_t>(is);
  d.count = static_cast<int>(count);
  d.contexts.count = d.count;
  d.contexts.n = n;
  d.contexts.m = m;
  d.contexts.bidder_dim = dx;
  d.contexts.item_dim = dy;
  d.contexts.bidder.resize(count * n * dx);
  d.contexts.item.resize(count * m * dy);
  d.values.resize(count * n * m);
  const std::size_t xw = static_cast<std::size_t>(n) * dx;
  const std::size_t yw = static_cast<std::size_t>(m) * dy;
  const std::size_t vw = static_cast<std::size_t>(n) * m;
  for (std::size_t k = 0; k < count; ++k) {
    get_floats(is, std::span(d.contexts.bidder).subspan(k * xw, xw));
    get_floats(is, std::span(d.contexts.item).subspan(k * yw, yw));
    get_floats(is, std::span(d.values).subspan(k * vw, vw));
  }
  d.caps = value_caps(d.spec, d.contexts);
  return d;
}

void export_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ValidationError("cannot write " + path.string());
  const auto& s = data.spec;
  os << "sample";
  for (int i = 0; i < s.n; ++i)
    for (int k = 0; k < s.bidder_dim; ++k) os << ",x_" << i << '_' << k;
  for (int j = 0; j < s.m; ++j)
    for (int k = 0; k < s.item_dim; ++k) os << ",y_" << j << '_' << k;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.m; ++j) os << ",v_" << i << '_' << j;
  os << '\n' << std::setprecision(9);
  const std::size_t xw = static_cast<std::size_t>(s.n) * s.bidder_dim;
  const std::size_t yw = static_cast<std::size_t>(s.m) * s.item_dim;
  const std::size_t vw = static_cast<std::size_t>(s.n) * s.m;
  for (int k = 0; k < data.count; ++k) {
    os << k;
    for (std::size_t t = 0; t < xw; ++t) os << ',' << data.contexts.bidder[k * xw + t];
    for (std::size_t t = 0; t < yw; ++t) os << ',' << data.contexts.item[k * yw + t];
    for (std::size_t t = 0; t < vw; ++t) os << ',' << data.values[k * vw + t];
    os << '\n';
  }
}

}  // namespace af::env
