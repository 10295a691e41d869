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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pdbev::simd {

/// Instruction sets a kernel table can target.
enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Which cells of a mask count toward the IoU tallies.
enum class Region {
  kAll,    // every cell
  kAtLeast,  // region[i] >= bound
  kBelow,  // region[i] < bound
};

struct MaskCounts {
  std::uint64_t intersection = 0;  // pred && gt
  std::uint64_t uni = 0;           // pred || gt
  std::uint64_t gt_positive = 0;   // gt
  friend bool operator==(const MaskCounts&, const MaskCounts&) = default;
};

struct MaskQuery {
  const float* pred = nullptr;
  const float* gt = nullptr;
  const float* region = nullptr;  // ignored for Region::kAll
  std::size_t n = 0;
  float pred_threshold = 0.5f;  // pred >= threshold is positive
  float gt_threshold = 0.5f;
  Region mode = Region::kAll;
  float bound = 0.5f;
};

/// Inner loops shared by lifting, aggregation, visibility and metrics.
/// Element-wise kernels round identically on every ISA; reductions that
/// sum (column_normalize) may differ in the last bits.
struct KernelTable {
  Isa isa;
  /// y[i] += a * x[i]
  void (*axpy)(float a, const float* x, float* y, std::size_t n);
  /// y[i] += x[i]
  void (*add)(const float* x, float* y, std::size_t n);
  /// y[i] *= a
  void (*scale)(float a, float* y, std::size_t n);
  /// max over x[0..n); n >= 1
  float (*max_value)(const float* x, std::size_t n);
  /// out[i] = (x[i] + bias) / sum_j (x[j] + bias); uniform 1/n when the sum is 0
  void (*column_normalize)(const float* x, float bias, float* out, std::size_t n);
  MaskCounts (*mask_counts)(const MaskQuery& q);
};

const KernelTable& scalar_kernels() noexcept;

/// The table in use. Picked once: the widest ISA the CPU supports, unless
/// PDBEV_SIMD=scalar is set in the environment.
const KernelTable& kernels() noexcept;

/// ISAs compiled in and supported by this CPU (always includes kScalar).
std::vector<Isa> available_isas();

/// Table for a specific ISA; nullptr when unavailable.
const KernelTable* kernels_for(Isa isa) noexcept;

/// Overrides the active table; returns false when `isa` is unavailable.
bool set_active_isa(Isa isa) noexcept;

namespace detail {
#if defined(PDBEV_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
}  // namespace detail

}  // namespace pdbev::simd
