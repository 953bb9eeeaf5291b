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

#include "rpm/dilation.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <vector>

namespace rpm {

namespace {

constexpr double kContractionTol = 1e-12;

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return std::seed_seq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(a),
                       static_cast<std::uint32_t>(a >> 32),
                       static_cast<std::uint32_t>(b),
                       static_cast<std::uint32_t>(b >> 32)};
}

}  // namespace

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

int qubit_padded_dim(int base_dim) {
  int dim = 1;
  while (dim < 2 * base_dim) dim *= 2;
  return dim;
}

DilatedUnitary dilate(const ComplexMatrix& m) {
  require_square(m, "dilate");
  const double norm = operator_norm(m);
  if (norm > 1.0 + kContractionTol) {
    throw Error(ErrorKind::NormExceedsOne,
                "dilate: operator norm " + std::to_string(norm) + " > 1");
  }
  const Eigen::Index n = m.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix defect, defect_adj;
  try {
    defect = psd_sqrt<double>(id - m.adjoint() * m);
    defect_adj = psd_sqrt<double>(id - m * m.adjoint());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NegativeEigenvalue) throw;
    throw Error(ErrorKind::NormExceedsOne, std::string("dilate: ") + e.what());
  }

  DilatedUnitary d;
  d.base_dim = static_cast<int>(n);
  d.matrix.resize(2 * n, 2 * n);
  d.matrix.topLeftCorner(n, n) = m;
  d.matrix.topRightCorner(n, n) = defect_adj;
  d.matrix.bottomLeftCorner(n, n) = defect;
  d.matrix.bottomRightCorner(n, n) = -m.adjoint();
  return pad_to_qubits(d);
}

DilatedUnitary pad_to_qubits(const DilatedUnitary& d) {
  DilatedUnitary out = d;
  out.padded_dim = qubit_padded_dim(d.base_dim);
  const Eigen::Index core = d.matrix.rows();
  out.padded_matrix = ComplexMatrix::Identity(out.padded_dim, out.padded_dim);
  out.padded_matrix.topLeftCorner(core, core) = d.matrix;
  return out;
}

ComplexVector apply_to_state(const DilatedUnitary& d, const ComplexVector& v) {
  if (v.size() == d.padded_dim) return d.padded_matrix * v;
  if (v.size() != d.base_dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "apply_to_state: state dim " + std::to_string(v.size()) +
                    ", expected " + std::to_string(d.base_dim) + " or " +
                    std::to_string(d.padded_dim));
  }
  // Only the first base_dim columns see a nonzero input.
  return d.padded_matrix.leftCols(d.base_dim) * v;
}

MeasurementResult measure_populations(const ComplexVector& v, MeasureMode mode,
                                      std::int64_t shots, std::uint64_t seed) {
  MeasurementResult r;
  r.mode = mode;
  r.populations = v.cwiseAbs2();
  if (mode == MeasureMode::Analytic) return r;

  if (shots < 1) {
    throw Error(ErrorKind::ValidationError, "measure_populations: shots must be >= 1");
  }
  const double total = r.populations.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorKind::ZeroState, "measure_populations: zero state in sampled mode");
  }
  r.shots = shots;
  r.seed = seed;

  std::vector<double> cdf(static_cast<std::size_t>(v.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc += r.populations(i);
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  std::vector<std::int64_t> counts(cdf.size(), 0);
  auto seq = make_seed_seq(seed, 0, 0);
  std::mt19937_64 gen(seq);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // Never land on a zero-probability bin sitting at the CDF edge.
    while (it != cdf.begin() && r.populations(it - cdf.begin()) == 0.0) --it;
    ++counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    r.populations(static_cast<Eigen::Index>(i)) =
        static_cast<double>(counts[i]) / static_cast<double>(shots) * total;
  }
  return r;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto seq = make_seed_seq(seed, a, b);
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

void write_matrix_text(std::ostream& os, const ComplexMatrix& m) {
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
      if (j > 0) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

void dump_dilation(const DilatedUnitary& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path);
  write_matrix_text(out, d.padded_matrix);
  if (!out) throw Error(ErrorKind::IoFailure, "write failed: " + path);
}

const char* mode_name(MeasureMode mode) {
  return mode == MeasureMode::Analytic ? "analytic" : "sampled";
}

MeasureMode parse_mode(const std::string& text) {
  if (text == "analytic") return MeasureMode::Analytic;
  if (text == "sampled") return MeasureMode::Sampled;
  throw Error(ErrorKind::ParseError, "unknown mode '" + text + "'");
}

}  // namespace rpm
