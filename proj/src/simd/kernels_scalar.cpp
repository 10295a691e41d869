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

#include "pdbev/simd/kernels.hpp"

namespace pdbev::simd {
namespace {

void axpy(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add(const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void scale(float a, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

float max_value(const float* x, std::size_t n) {
  float m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

void column_normalize(const float* x, float bias, float* out, std::size_t n) {
  float sum = 0.0f;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] + bias;
  if (sum > 0.0f) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] + bias) / sum;
  } else {
    const float u = 1.0f / static_cast<float>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = u;
  }
}

MaskCounts mask_counts(const MaskQuery& q) {
  MaskCounts c;
  for (std::size_t i = 0; i < q.n; ++i) {
    if (q.mode == Region::kAtLeast && !(q.region[i] >= q.bound)) continue;
    if (q.mode == Region::kBelow && !(q.region[i] < q.bound)) continue;
    const bool p = q.pred[i] >= q.pred_threshold;
    const bool g = q.gt[i] >= q.gt_threshold;
    c.intersection += (p && g);
    c.uni += (p || g);
    c.gt_positive += g;
  }
  return c;
}

constexpr KernelTable kScalar{Isa::kScalar, axpy, add, scale, max_value, column_normalize, mask_counts};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace pdbev::simd
