// Copyright 2026 The rpm-dilation Authors
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

#ifndef RPM_DILATION_HPP_
#define RPM_DILATION_HPP_

// Unitary 1-dilation of a contraction and its emulated circuit execution.
//
//   U_M = [ M          sqrt(I - M M^dag) ]
//         [ sqrt(I - M^dag M)     -M^dag ]
//
// The physical space occupies indices [0, n), the dilation ancilla half
// [n, 2n), and qubit padding [2n, 2^q). Feeding (v, 0, ..., 0) through U_M
// leaves M v in the first half.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "rpm/linalg.hpp"

namespace rpm {

struct DilatedUnitary {
  int base_dim = 0;
  ComplexMatrix matrix;         // 2n x 2n
  int padded_dim = 0;           // power of two >= 2n
  ComplexMatrix padded_matrix;  // matrix (+) I
};

enum class MeasureMode { Analytic, Sampled };

inline constexpr int kDefaultShots = 8192;

struct MeasurementResult {
  RealVector populations;
  MeasureMode mode = MeasureMode::Analytic;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Operator 2-norm (largest singular value).
double operator_norm(const ComplexMatrix& m);

/// Builds the 2n x 2n dilation and its padded form. Throws NormExceedsOne
/// if ||M||_2 > 1 + 1e-12.
DilatedUnitary dilate(const ComplexMatrix& m);

/// Smallest power of two >= 2 * base_dim.
int qubit_padded_dim(int base_dim);

DilatedUnitary pad_to_qubits(const DilatedUnitary& d);

/// padded_matrix * v, where v of length base_dim is zero-extended first.
ComplexVector apply_to_state(const DilatedUnitary& d, const ComplexVector& v);

/// Computational-basis populations of v. Analytic mode returns |v_i|^2.
/// Sampled mode draws `shots` outcomes from |v_i|^2 / ||v||^2 and returns
/// the empirical frequencies scaled by ||v||^2.
///
/// Sampling: std::mt19937_64 seeded with
/// std::seed_seq{seed lo, seed hi, 0, 0, 0, 0} (32-bit words),
/// uniform = (draw >> 11) * 2^-53, outcome = first CDF bin exceeding
/// uniform * total. Every piece is fixed by the C++ standard, so results
/// are bit-identical across conforming platforms.
MeasurementResult measure_populations(const ComplexVector& v, MeasureMode mode,
                                      std::int64_t shots = kDefaultShots,
                                      std::uint64_t seed = 0);

/// Deterministic child seed for sub-stream (a, b) of `seed`, via
/// std::seed_seq.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// Text dump: one row per line, space-separated "re,im" entries.
void write_matrix_text(std::ostream& os, const ComplexMatrix& m);
void dump_dilation(const DilatedUnitary& d, const std::string& path);

const char* mode_name(MeasureMode mode);
MeasureMode parse_mode(const std::string& text);

}  // namespace rpm

#endif  // RPM_DILATION_HPP_
