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

// Compiled with -mavx2 (and without FMA) so that element-wise kernels
// round exactly like the scalar reference.

#include <immintrin.h>

#include <bit>

#include "pdbev/simd/kernels.hpp"

namespace pdbev::simd {
namespace {

void axpy(float a, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 prod = _mm256_mul_ps(va, _mm256_loadu_ps(x + i));
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void add(const float* x, float* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), _mm256_loadu_ps(x + i)));
  }
  for (; i < n; ++i) y[i] += x[i];
}

void scale(float a, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(y + i, _mm256_mul_ps(_mm256_loadu_ps(y + i), va));
  for (; i < n; ++i) y[i] *= a;
}

float hmax(__m256 v) {
  __m128 m = _mm_max_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
  m = _mm_max_ps(m, _mm_movehl_ps(m, m));
  m = _mm_max_ss(m, _mm_shuffle_ps(m, m, 1));
  return _mm_cvtss_f32(m);
}

float hsum(__m256 v) {
  __m128 s = _mm_add_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
  s = _mm_add_ps(s, _mm_movehl_ps(s, s));
  s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
  return _mm_cvtss_f32(s);
}

float max_value(const float* x, std::size_t n) {
  float m = x[0];
  std::size_t i = 0;
  if (n >= 8) {
    __m256 acc = _mm256_loadu_ps(x);
    for (i = 8; i + 8 <= n; i += 8) acc = _mm256_max_ps(acc, _mm256_loadu_ps(x + i));
    m = hmax(acc);
  }
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

void column_normalize(const float* x, float bias, float* out, std::size_t n) {
  const __m256 vb = _mm256_set1_ps(bias);
  float sum = 0.0f;
  std::size_t i = 0;
  if (n >= 8) {
    __m256 acc = _mm256_setzero_ps();
    for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_add_ps(_mm256_loadu_ps(x + i), vb));
    sum = hsum(acc);
  }
  for (; i < n; ++i) sum += x[i] + bias;
  if (sum > 0.0f) {
    const __m256 vs = _mm256_set1_ps(sum);
    i = 0;
    for (; i + 8 <= n; i += 8) {
      _mm256_storeu_ps(out + i, _mm256_div_ps(_mm256_add_ps(_mm256_loadu_ps(x + i), vb), vs));
    }
    for (; i < n; ++i) out[i] = (x[i] + bias) / sum;
  } else {
    const float u = 1.0f / static_cast<float>(n);
    for (i = 0; i < n; ++i) out[i] = u;
  }
}

MaskCounts mask_counts(const MaskQuery& q) {
  MaskCounts c;
  const __m256 pt = _mm256_set1_ps(q.pred_threshold);
  const __m256 gtt = _mm256_set1_ps(q.gt_threshold);
  const __m256 bound = _mm256_set1_ps(q.bound);
  std::size_t i = 0;
  for (; i + 8 <= q.n; i += 8) {
    const __m256 p = _mm256_cmp_ps(_mm256_loadu_ps(q.pred + i), pt, _CMP_GE_OQ);
    const __m256 g = _mm256_cmp_ps(_mm256_loadu_ps(q.gt + i), gtt, _CMP_GE_OQ);
    unsigned keep = 0xffu;
    if (q.mode == Region::kAtLeast) {
      keep = static_cast<unsigned>(_mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(q.region + i), bound, _CMP_GE_OQ)));
    } else if (q.mode == Region::kBelow) {
      keep = static_cast<unsigned>(_mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(q.region + i), bound, _CMP_LT_OQ)));
    }
    const unsigned pm = static_cast<unsigned>(_mm256_movemask_ps(p)) & keep;
    const unsigned gm = static_cast<unsigned>(_mm256_movemask_ps(g)) & keep;
    c.intersection += static_cast<unsigned>(std::popcount(pm & gm));
    c.uni += static_cast<unsigned>(std::popcount(pm | gm));
    c.gt_positive += static_cast<unsigned>(std::popcount(gm));
  }
  if (i < q.n) {
    MaskQuery tail = q;
    tail.pred += i;
    tail.gt += i;
    if (tail.region) tail.region += i;
    tail.n = q.n - i;
    const MaskCounts t = scalar_kernels().mask_counts(tail);
    c.intersection += t.intersection;
    c.uni += t.uni;
    c.gt_positive += t.gt_positive;
  }
  return c;
}

constexpr KernelTable kAvx2{Isa::kAvx2, axpy, add, scale, max_value, column_normalize, mask_counts};

}  // namespace

namespace detail {
const KernelTable& avx2_kernels() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace pdbev::simd
