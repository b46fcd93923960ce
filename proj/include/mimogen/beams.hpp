// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMOGEN_BEAMS_HPP
#define MIMOGEN_BEAMS_HPP

#include "mimogen/channel.hpp"
#include "mimogen/dataset.hpp"
#include "mimogen/exec.hpp"
#include "mimogen/progress.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mimogen
{

// Candidate beamforming vectors, each of unit norm, length M.
struct Codebook
{
    ArrayDims dims;
    std::uint32_t oversampling = 1;
    std::vector<std::vector<cplx>> vectors;

    std::size_t size() const noexcept { return vectors.size(); }
};

// Kronecker product of per-axis oversampled DFT beams, in the same
// z (x) y (x) x element order as array_response. An axis with M_a > 1
// contributes os*M_a beams
//     f_q[m] = exp(-j 2 pi m q / (os*M_a)) / sqrt(M_a),  q = 0..os*M_a-1,
// an axis with one element contributes the single beam [1]. Beam p
// (1-based) = q_z*(Q_y*Q_x) + q_y*Q_x + q_x + 1. The minus sign makes
// f^T a(az, el) coherent for the steering vector whose per-axis spatial
// frequency is 2 pi q / (os*M_a). Throws DomainError if oversampling < 1.
Codebook dft_codebook(ArrayDims dims, std::uint32_t oversampling = 1);

struct BeamEvalConfig
{
    double snr = 1.0; // linear, dimensionless
    Codebook codebook;
    // false: |f^T h_k|^2 (transpose product). true: |f^H h_k|^2.
    bool conjugate = false;
};

// (1/|K|) sum_k log2(1 + snr |f^T h_k|^2), or f^H with `conjugate`.
// Throws DimensionError if f does not have H.rows() entries, DomainError if
// snr is not positive.
double achievable_rate(const ChannelMatrix &H, std::span<const cplx> f, double snr, bool conjugate = false);

// Rate of every codebook beam, in codebook order.
std::vector<double> beam_rates(const ChannelMatrix &H, const BeamEvalConfig &cfg);

struct BestBeam
{
    std::size_t beam = 0; // 1-based
    double rate = 0.0;
};

// Highest-rate beam; ties go to the smallest index. Throws DomainError for
// an empty codebook.
BestBeam best_beam(const ChannelMatrix &H, const BeamEvalConfig &cfg);

// First row of H: the channel seen by a single (omni) element.
std::vector<cplx> omni_feature(const ChannelMatrix &H);

struct MlRecord
{
    std::uint64_t user_index = 0;
    std::vector<std::vector<cplx>> features; // [bs ordinal - 1][subcarrier]
    std::vector<std::vector<double>> labels; // [bs ordinal - 1][beam]
};

// One record per active user, in active-user order.
std::vector<MlRecord> build_ml_dataset(const Dataset &ds, const BeamEvalConfig &cfg,
                                       const ParallelFor &parallel = serial_executor(),
                                       ProgressReporter *progress = nullptr);

// Writes features + labels + manifest.txt into `dir`.
//   CSV:    features.csv `user_index,bs_ordinal,k,re,im` (k = subcarrier
//           index), labels.csv `user_index,bs_ordinal,beam_index,rate_bps_hz`
//   binary: features.bin  "DMFT" | version u32 | n_records u64 | n_bs u32 |
//                         n_k u32 | n_k x subcarrier u32 | per record
//                         user_index u64 + n_bs*n_k (re, im) f64 pairs
//           labels.bin    "DMLB" | version u32 | n_records u64 | n_bs u32 |
//                         n_beams u32 | per record user_index u64 +
//                         n_bs*n_beams f64
Manifest export_ml_dataset(std::span<const MlRecord> records, std::span<const std::uint32_t> subcarriers,
                           const std::filesystem::path &dir, ExportFormat format);

} // namespace mimogen

#endif // MIMOGEN_BEAMS_HPP
