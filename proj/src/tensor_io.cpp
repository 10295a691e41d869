// Copyright 2026 The pdbev Authors
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

#include "pdbev/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <system_error>

#include "pdbev/errors.hpp"

namespace pdbev {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32(const std::string& field) {
    need(4, field);
    std::uint32_t v = get_u32(bytes_.data() + pos_);
    pos_ += 4;
    return v;
  }

  void need(std::size_t n, const std::string& field) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError("truncated tensor: " + field + " needs " + std::to_string(n) +
                        " bytes, " + std::to_string(bytes_.size() - pos_) + " available");
    }
  }

  const std::uint8_t* cursor() const { return bytes_.data() + pos_; }
  void skip(std::size_t n) { pos_ += n; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  if (t.rank() == 0) throw DomainError("cannot encode a rank-0 tensor");
  std::vector<std::uint8_t> out;
  out.reserve(12 + 4 * t.rank() + 4 * t.size());
  out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
  put_u32(out, kTensorVersion);
  put_u32(out, static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.dims()) {
    if (d > std::numeric_limits<std::uint32_t>::max()) {
      throw DomainError("tensor extent " + std::to_string(d) + " does not fit in u32");
    }
    put_u32(out, static_cast<std::uint32_t>(d));
  }
  for (float v : t.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(4, "magic");
  if (std::memcmp(r.cursor(), kTensorMagic, 4) != 0) {
    throw FormatError("bad magic: expected \"PDBT\"");
  }
  r.skip(4);
  const std::uint32_t version = r.u32("version");
  if (version != kTensorVersion) {
    throw FormatError("unsupported version " + std::to_string(version));
  }
  const std::uint32_t rank = r.u32("rank");
  if (rank == 0) throw FormatError("rank must be at least 1");
  // Each dim needs 4 bytes; reject absurd ranks before allocating.
  r.need(std::size_t{4} * rank, "dims");
  Dims dims(rank);
  std::size_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::uint32_t d = r.u32("dims[" + std::to_string(i) + "]");
    if (d == 0) throw FormatError("dims[" + std::to_string(i) + "] is zero");
    if (count > std::numeric_limits<std::size_t>::max() / 4 / d) {
      throw FormatError("dims overflow: element count exceeds addressable size");
    }
    count *= d;
    dims[i] = d;
  }
  if (r.remaining() / 4 < count) {
    throw FormatError("truncated payload: declared " + std::to_string(count) + " values, " +
                      std::to_string(r.remaining() / 4) + " present");
  }
  if (r.remaining() != count * 4) {
    throw FormatError("trailing bytes after payload: " + std::to_string(r.remaining() - count * 4));
  }
  std::vector<float> data(count);
  const std::uint8_t* p = r.cursor();
  for (std::size_t i = 0; i < count; ++i) data[i] = std::bit_cast<float>(get_u32(p + 4 * i));
  return Tensor(std::move(dims), std::move(data));
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  const auto bytes = encode_tensor(t);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + tmp.string());
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) {
      os.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move tensor into place: " + path.string());
  }
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open tensor file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    return decode_tensor(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace pdbev
