// Copyright 2026 The audioatk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstring>

namespace audioatk::nn::detail {

// Single-threaded blocked GEMM kernels, row-major. Each variant uses one
// fixed accumulation order, so results are bit-stable run to run. The loop
// shapes are chosen so the hot paths vectorize under -O3 without relying on
// value-unsafe float reassociation.

inline constexpr int kGemmMr = 4;   // row tile
inline constexpr int kGemmNr = 32;  // column tile (registers: 4 x 32 floats)

// C[M x N] = A[M x K] * B[K x N]   (+= when accumulate)
template <class Real>
void gemm_nn(int M, int N, int K, const Real* A, int lda, const Real* B, int ldb, Real* C,
             int ldc, bool accumulate) {
  constexpr int MR = kGemmMr;
  constexpr int NR = kGemmNr;
  if (M <= 8 && K >= 512 && static_cast<std::size_t>(K) * N * sizeof(Real) > (4u << 20)) {
    // Few output rows against a huge B (the wide dense layers): keep all of C
    // in cache and stream B exactly once, row-contiguously.
    if (!accumulate)
      for (int i = 0; i < M; ++i)
        std::memset(C + static_cast<std::size_t>(i) * ldc, 0, sizeof(Real) * static_cast<std::size_t>(N));
    for (int k = 0; k < K; ++k) {
      const Real* brow = B + static_cast<std::size_t>(k) * ldb;
      for (int i = 0; i < M; ++i) {
        const Real a = A[static_cast<std::size_t>(i) * lda + k];
        Real* crow = C + static_cast<std::size_t>(i) * ldc;
        for (int j = 0; j < N; ++j) crow[j] += a * brow[j];
      }
    }
    return;
  }
  for (int j0 = 0; j0 < N; j0 += NR) {
    const int nb = N - j0 < NR ? N - j0 : NR;
    int i0 = 0;
    for (; i0 + MR <= M; i0 += MR) {
      Real acc[MR][NR] = {};
      for (int k = 0; k < K; ++k) {
        const Real* brow = B + static_cast<std::size_t>(k) * ldb + j0;
        Real a[MR];
        for (int r = 0; r < MR; ++r) a[r] = A[static_cast<std::size_t>(i0 + r) * lda + k];
        if (nb == NR) {
          for (int r = 0; r < MR; ++r)
            for (int j = 0; j < NR; ++j) acc[r][j] += a[r] * brow[j];
        } else {
          for (int r = 0; r < MR; ++r)
            for (int j = 0; j < nb; ++j) acc[r][j] += a[r] * brow[j];
        }
      }
      for (int r = 0; r < MR; ++r) {
        Real* crow = C + static_cast<std::size_t>(i0 + r) * ldc + j0;
        if (accumulate)
          for (int j = 0; j < nb; ++j) crow[j] += acc[r][j];
        else
          for (int j = 0; j < nb; ++j) crow[j] = acc[r][j];
      }
    }
    for (; i0 < M; ++i0) {  // row remainder
      Real acc[NR] = {};
      for (int k = 0; k < K; ++k) {
        const Real a = A[static_cast<std::size_t>(i0) * lda + k];
        const Real* brow = B + static_cast<std::size_t>(k) * ldb + j0;
        for (int j = 0; j < nb; ++j) acc[j] += a * brow[j];
      }
      Real* crow = C + static_cast<std::size_t>(i0) * ldc + j0;
      if (accumulate)
        for (int j = 0; j < nb; ++j) crow[j] += acc[j];
      else
        for (int j = 0; j < nb; ++j) crow[j] = acc[j];
    }
  }
}

// Dot product with 16 interleaved partial sums reduced in a fixed order.
template <class Real>
Real lane_dot(const Real* a, const Real* b, int n) {
  constexpr int L = 16;
  Real lanes[L] = {};
  int k = 0;
  for (; k + L <= n; k += L)
    for (int l = 0; l < L; ++l) lanes[l] += a[k + l] * b[k + l];
  for (int l = 0; k + l < n; ++l) lanes[l] += a[k + l] * b[k + l];
  for (int w = L / 2; w > 0; w /= 2)
    for (int l = 0; l < w; ++l) lanes[l] += lanes[l + w];
  return lanes[0];
}

// C[M x N] = A[M x K] * B^T where B is [N x K]   (+= when accumulate)
template <class Real>
void gemm_nt(int M, int N, int K, const Real* A, int lda, const Real* B, int ldb, Real* C,
             int ldc, bool accumulate) {
  if (M <= 8) {
    // Stream each B row once, dotted against every A row while resident.
    for (int j = 0; j < N; ++j) {
      const Real* brow = B + static_cast<std::size_t>(j) * ldb;
      for (int i = 0; i < M; ++i) {
        const Real d = lane_dot(A + static_cast<std::size_t>(i) * lda, brow, K);
        if (accumulate)
          C[static_cast<std::size_t>(i) * ldc + j] += d;
        else
          C[static_cast<std::size_t>(i) * ldc + j] = d;
      }
    }
    return;
  }
  for (int i = 0; i < M; ++i) {
    const Real* arow = A + static_cast<std::size_t>(i) * lda;
    Real* crow = C + static_cast<std::size_t>(i) * ldc;
    for (int j = 0; j < N; ++j) {
      const Real d = lane_dot(arow, B + static_cast<std::size_t>(j) * ldb, K);
      if (accumulate)
        crow[j] += d;
      else
        crow[j] = d;
    }
  }
}

// C[M x N] = A^T * B where A is [K x M], B is [K x N]   (+= when accumulate)
template <class Real>
void gemm_tn(int M, int N, int K, const Real* A, int lda, const Real* B, int ldb, Real* C,
             int ldc, bool accumulate) {
  const std::size_t c_bytes = static_cast<std::size_t>(M) * N * sizeof(Real);
  if (c_bytes <= (8u << 20)) {
    // C fits in cache: K-outer rank-1 updates, C rows revisited.
    if (!accumulate)
      for (int i = 0; i < M; ++i)
        std::memset(C + static_cast<std::size_t>(i) * ldc, 0, sizeof(Real) * static_cast<std::size_t>(N));
    for (int k = 0; k < K; ++k) {
      const Real* arow = A + static_cast<std::size_t>(k) * lda;
      const Real* brow = B + static_cast<std::size_t>(k) * ldb;
      for (int i = 0; i < M; ++i) {
        const Real a = arow[i];
        Real* crow = C + static_cast<std::size_t>(i) * ldc;
        for (int j = 0; j < N; ++j) crow[j] += a * brow[j];
      }
    }
    return;
  }
  // Huge C (e.g. the 406016 x 1024 dense gradient): stream C exactly once.
  constexpr int NR = 128;
  for (int i = 0; i < M; ++i) {
    Real* crow = C + static_cast<std::size_t>(i) * ldc;
    for (int j0 = 0; j0 < N; j0 += NR) {
      const int nb = N - j0 < NR ? N - j0 : NR;
      Real acc[NR] = {};
      for (int k = 0; k < K; ++k) {
        const Real a = A[static_cast<std::size_t>(k) * lda + i];
        const Real* brow = B + static_cast<std::size_t>(k) * ldb + j0;
        for (int j = 0; j < nb; ++j) acc[j] += a * brow[j];
      }
      if (accumulate)
        for (int j = 0; j < nb; ++j) crow[j0 + j] += acc[j];
      else
        for (int j = 0; j < nb; ++j) crow[j0 + j] = acc[j];
    }
  }
}

}  // namespace audioatk::nn::detail
