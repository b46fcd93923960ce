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

#include "mimogen/beams.hpp"

#include "mimogen/atomic_file.hpp"
#include "mimogen/binio.hpp"
#include "mimogen/error.hpp"
#include "mimogen/hash.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace mimogen
{

namespace
{

std::vector<std::vector<cplx>> axis_beams(std::uint32_t elements, std::uint32_t oversampling)
{
    if (elements == 1)
        return {{cplx{1.0, 0.0}}};
    const std::uint32_t n_beams = elements * oversampling;
    const double norm = 1.0 / std::sqrt(static_cast<double>(elements));
    std::vector<std::vector<cplx>> out(n_beams, std::vector<cplx>(elements));
    for (std::uint32_t q = 0; q < n_beams; ++q)
        for (std::uint32_t m = 0; m < elements; ++m)
        {
            // Reduce m*q modulo the DFT size before scaling to keep the
            // phase argument small.
            const auto r = static_cast<double>((std::uint64_t{m} * q) % n_beams);
            out[q][m] = std::polar(norm, -2.0 * std::numbers::pi * r / n_beams);
        }
    return out;
}

void check_snr(double snr)
{
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw DomainError("snr must be a positive finite number");
}

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

CMatrix codebook_matrix(const Codebook &cb)
{
    const std::size_t M = cb.vectors.empty() ? 0 : cb.vectors.front().size();
    CMatrix F(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(cb.size()));
    for (std::size_t p = 0; p < cb.size(); ++p)
        for (std::size_t m = 0; m < M; ++m)
            F(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p)) = cb.vectors[p][m];
    return F;
}

// Same computation as beam_rates with the codebook matrix supplied, so a
// batch evaluation builds it once.
std::vector<double> rates_with(const CMatrix &F, const ChannelMatrix &H, double snr, bool conjugate)
{
    if (static_cast<std::size_t>(F.rows()) != H.rows())
        throw DimensionError("codebook vectors have " + std::to_string(F.rows()) + " entries, channel has " +
                             std::to_string(H.rows()) + " antennas");
    Eigen::Map<const CMatrix> Hm(H.data().data(), static_cast<Eigen::Index>(H.rows()),
                                 static_cast<Eigen::Index>(H.cols()));
    const CMatrix G = conjugate ? CMatrix(F.adjoint() * Hm) : CMatrix(F.transpose() * Hm);
    std::vector<double> rates(static_cast<std::size_t>(F.cols()), 0.0);
    if (H.cols() == 0)
        return rates;
    for (Eigen::Index p = 0; p < G.rows(); ++p)
    {
        double sum = 0.0;
        for (Eigen::Index k = 0; k < G.cols(); ++k)
            sum += std::log2(1.0 + snr * std::norm(G(p, k)));
        rates[static_cast<std::size_t>(p)] = sum / static_cast<double>(H.cols());
    }
    return rates;
}

} // namespace

Codebook dft_codebook(ArrayDims dims, std::uint32_t oversampling)
{
    if (oversampling < 1)
        throw DomainError("oversampling must be >= 1");
    if (dims.x < 1 || dims.y < 1 || dims.z < 1)
        throw DomainError("array dimensions must be >= 1 on every axis");
    const auto bx = axis_beams(dims.x, oversampling);
    const auto by = axis_beams(dims.y, oversampling);
    const auto bz = axis_beams(dims.z, oversampling);

    Codebook cb;
    cb.dims = dims;
    cb.oversampling = oversampling;
    cb.vectors.reserve(bx.size() * by.size() * bz.size());
    for (const auto &vz : bz)
        for (const auto &vy : by)
            for (const auto &vx : bx)
            {
                std::vector<cplx> f;
                f.reserve(dims.size());
                for (const auto &cz : vz)
                    for (const auto &cy : vy)
                        for (const auto &cx : vx)
                            f.push_back(cz * cy * cx);
                cb.vectors.push_back(std::move(f));
            }
    return cb;
}

double achievable_rate(const ChannelMatrix &H, std::span<const cplx> f, double snr, bool conjugate)
{
    check_snr(snr);
    if (f.size() != H.rows())
        throw DimensionError("beam has " + std::to_string(f.size()) + " entries, channel has " +
                             std::to_string(H.rows()) + " antennas");
    if (H.cols() == 0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < H.cols(); ++k)
    {
        const auto h = H.column(k);
        cplx g{0.0, 0.0};
        for (std::size_t m = 0; m < f.size(); ++m)
            g += (conjugate ? std::conj(f[m]) : f[m]) * h[m];
        sum += std::log2(1.0 + snr * std::norm(g));
    }
    return sum / static_cast<double>(H.cols());
}

std::vector<double> beam_rates(const ChannelMatrix &H, const BeamEvalConfig &cfg)
{
    check_snr(cfg.snr);
    return rates_with(codebook_matrix(cfg.codebook), H, cfg.snr, cfg.conjugate);
}

namespace
{

BestBeam pick_best(const std::vector<double> &rates)
{
    BestBeam best{1, rates.front()};
    for (std::size_t p = 1; p < rates.size(); ++p)
        if (rates[p] > best.rate)
            best = {p + 1, rates[p]};
    return best;
}

} // namespace

BestBeam best_beam(const ChannelMatrix &H, const BeamEvalConfig &cfg)
{
    if (cfg.codebook.size() == 0)
        throw DomainError("best_beam needs a non-empty codebook");
    return pick_best(beam_rates(H, cfg));
}

std::vector<cplx> omni_feature(const ChannelMatrix &H)
{
    if (H.rows() < 1)
        throw DimensionError("omni feature needs at least one antenna row");
    std::vector<cplx> out(H.cols());
    for (std::size_t k = 0; k < H.cols(); ++k)
        out[k] = H(0, k);
    return out;
}

std::vector<MlRecord> build_ml_dataset(const Dataset &ds, const BeamEvalConfig &cfg, const ParallelFor &parallel,
                                       ProgressReporter *progress)
{
    check_snr(cfg.snr);
    if (ds.num_bs() == 0)
        throw DomainError("ML export needs at least one active base station");
    if (cfg.codebook.size() == 0)
        throw DomainError("ML export needs a non-empty codebook");
    const CMatrix F = codebook_matrix(cfg.codebook);

    std::vector<MlRecord> out(ds.num_users());
    parallel(ds.num_users(), [&](std::size_t u) {
        MlRecord &rec = out[u];
        rec.user_index = ds.per_bs.front().users[u].global_index;
        for (const auto &shard : ds.per_bs)
        {
            const auto &H = shard.users[u].channel;
            rec.features.push_back(omni_feature(H));
            rec.labels.push_back(rates_with(F, H, cfg.snr, cfg.conjugate));
        }
        if (progress != nullptr)
            progress->tick();
    });
    return out;
}

namespace
{

constexpr std::uint32_t kMlVersion = 1;

} // namespace

Manifest export_ml_dataset(std::span<const MlRecord> records, std::span<const std::uint32_t> subcarriers,
                           const std::filesystem::path &dir, ExportFormat format)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    const std::size_t n_bs = records.empty() ? 0 : records.front().features.size();
    const std::size_t n_beams = (records.empty() || n_bs == 0) ? 0 : records.front().labels.front().size();
    for (const auto &r : records)
    {
        if (r.features.size() != n_bs || r.labels.size() != n_bs)
            throw DimensionError("ML records disagree on the number of base stations");
        for (std::size_t b = 0; b < n_bs; ++b)
            if (r.features[b].size() != subcarriers.size() || r.labels[b].size() != n_beams)
                throw DimensionError("ML record for user " + std::to_string(r.user_index) +
                                     " has inconsistent feature/label lengths");
    }

    Manifest m;
    m.format = format;
    auto record = [&](const std::string &name, std::span<const std::uint8_t> bytes) {
        write_file_atomic(dir / name, bytes);
        ManifestEntry e;
        e.filename = name;
        if (!records.empty())
        {
            e.first_user = records.front().user_index;
            e.last_user = records.back().user_index;
        }
        e.byte_size = bytes.size();
        e.hash = fnv1a64(bytes);
        m.entries.push_back(std::move(e));
    };
    auto as_bytes = [](const std::string &s) {
        return std::span(reinterpret_cast<const std::uint8_t *>(s.data()), s.size());
    };

    if (format == ExportFormat::csv)
    {
        std::ostringstream fs, ls;
        fs.precision(17);
        ls.precision(17);
        fs << "user_index,bs_ordinal,k,re,im\n";
        ls << "user_index,bs_ordinal,beam_index,rate_bps_hz\n";
        for (const auto &r : records)
            for (std::size_t b = 0; b < n_bs; ++b)
            {
                for (std::size_t k = 0; k < subcarriers.size(); ++k)
                    fs << r.user_index << ',' << b + 1 << ',' << subcarriers[k] << ',' << r.features[b][k].real()
                       << ',' << r.features[b][k].imag() << '\n';
                for (std::size_t p = 0; p < n_beams; ++p)
                    ls << r.user_index << ',' << b + 1 << ',' << p + 1 << ',' << r.labels[b][p] << '\n';
            }
        record("features.csv", as_bytes(fs.str()));
        record("labels.csv", as_bytes(ls.str()));
    }
    else
    {
        ByteWriter fw;
        fw.put_magic("DMFT");
        fw.put_u32(kMlVersion);
        fw.put_u64(records.size());
        fw.put_u32(static_cast<std::uint32_t>(n_bs));
        fw.put_u32(static_cast<std::uint32_t>(subcarriers.size()));
        for (auto k : subcarriers)
            fw.put_u32(k);
        ByteWriter lw;
        lw.put_magic("DMLB");
        lw.put_u32(kMlVersion);
        lw.put_u64(records.size());
        lw.put_u32(static_cast<std::uint32_t>(n_bs));
        lw.put_u32(static_cast<std::uint32_t>(n_beams));
        for (const auto &r : records)
        {
            fw.put_u64(r.user_index);
            lw.put_u64(r.user_index);
            for (std::size_t b = 0; b < n_bs; ++b)
            {
                for (const auto &v : r.features[b])
                {
                    fw.put_f64(v.real());
                    fw.put_f64(v.imag());
                }
                for (double rate : r.labels[b])
                    lw.put_f64(rate);
            }
        }
        record("features.bin", fw.bytes());
        record("labels.bin", lw.bytes());
    }
    write_file_atomic(dir / kManifestName, m.to_text());
    return m;
}

} // namespace mimogen
