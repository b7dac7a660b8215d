// Copyright 2026 The qecsym Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "qecsym/channels.hpp"
#include "qecsym/codes.hpp"
#include "qecsym/errors.hpp"

namespace qecsym {

/// 2x2 readout confusion matrix, entries C(m, j) = P(observe m | actual j).
/// Column-stochastic: the outcomes for a fixed actual value sum to one,
/// which is exactly the condition making the summed measurement channel
/// trace preserving.
struct ConfusionMatrix2 {
    Eigen::Matrix2d c;

    static ConfusionMatrix2 from_rates(double a, double b) {
        ConfusionMatrix2 m;
        m.c << a, 1.0 - b, 1.0 - a, b;
        m.validate();
        return m;
    }

    static ConfusionMatrix2 ideal() { return from_rates(1.0, 1.0); }

    double operator()(int observed, int actual) const { return c(observed, actual); }

    void validate() const {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (c(i, j) < -1e-12 || c(i, j) > 1.0 + 1e-12)
                    throw ParseError("confusion matrix entries must lie in [0, 1]");
        for (int j = 0; j < 2; ++j)
            if (std::abs(c(0, j) + c(1, j) - 1.0) > 1e-9)
                throw ParseError("confusion matrix columns must sum to 1");
    }

    bool is_ideal(double tol = 1e-12) const {
        return (c - Eigen::Matrix2d::Identity()).norm() <= tol;
    }
};

/// Per-generator readout noise: one confusion matrix per syndrome bit.
struct ReadoutNoise {
    std::vector<ConfusionMatrix2> per_generator;

    static ReadoutNoise ideal(int generators) {
        return ReadoutNoise{std::vector<ConfusionMatrix2>(
            static_cast<std::size_t>(generators), ConfusionMatrix2::ideal())};
    }

    static ReadoutNoise uniform(double a, double b, int generators) {
        return ReadoutNoise{std::vector<ConfusionMatrix2>(
            static_cast<std::size_t>(generators), ConfusionMatrix2::from_rates(a, b))};
    }
};

/// Confusion matrix of the full syndrome measurement,
/// entry(j, m) = prod_i C^(i)(m_i, j_i), syndrome bit i packed as bit i.
struct LogicalConfusion {
    RealMatrix matrix;  // row j = actual syndrome, column m = observed syndrome

    double operator()(std::uint64_t actual, std::uint64_t observed) const {
        return matrix(static_cast<Eigen::Index>(actual), static_cast<Eigen::Index>(observed));
    }
};

inline LogicalConfusion logical_confusion(const ReadoutNoise& readout) {
    const int bits = static_cast<int>(readout.per_generator.size());
    if (bits > 26) throw CapacityError("logical_confusion: too many syndrome bits");
    for (const auto& c : readout.per_generator) c.validate();
    const std::size_t dim = std::size_t(1) << bits;
    LogicalConfusion lc;
    lc.matrix.resize(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t m = 0; m < dim; ++m) {
            double prod = 1.0;
            for (int i = 0; i < bits; ++i)
                prod *= readout.per_generator[i]((m >> i) & 1u, (j >> i) & 1u);
            lc.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = prod;
        }
    return lc;
}

/// The diagonal element C-bar[s][s] that renormalizes the conditional channel.
inline double renormalization_factor(const ReadoutNoise& readout, std::uint64_t s) {
    double prod = 1.0;
    for (std::size_t i = 0; i < readout.per_generator.size(); ++i) {
        int bit = static_cast<int>((s >> i) & 1u);
        prod *= readout.per_generator[i](bit, bit);
    }
    return prod;
}

/// Kraus operator of a single noisy syndrome-bit readout:
/// sqrt(C[m][j]) * (I + (-1)^j G)/2.
inline Matrix readout_kraus(const PauliOperator& g, int m, int j, const ConfusionMatrix2& c) {
    require_dense(g.n(), "readout_kraus");
    const Eigen::Index dim = Eigen::Index(1) << g.n();
    Matrix proj = 0.5 * (Matrix::Identity(dim, dim) + (j ? -1.0 : 1.0) * g.matrix());
    return std::sqrt(c(m, j)) * proj;
}

/// Ideal projector onto the cospace labelled by syndrome j.
inline Matrix cospace_projector(const StabilizerCode& code, std::uint64_t j) {
    require_dense(code.n, "cospace_projector");
    const Eigen::Index dim = Eigen::Index(1) << code.n;
    Matrix m = Matrix::Identity(dim, dim);
    for (std::size_t i = 0; i < code.generators.size(); ++i) {
        double sign = ((j >> i) & 1u) ? -1.0 : 1.0;
        m = 0.5 * (m + sign * pauli_apply_left(code.generators[i], m));
    }
    return m;
}

/// Noisy syndrome measurement with observed outcome m, as the channel with
/// Kraus operators { sqrt(C-bar[j][m]) Pi_j : all syndromes j }.
inline QuantumChannel noisy_projector(const StabilizerCode& code, std::uint64_t m,
                                      const ReadoutNoise& readout) {
    require_dense(code.n, "noisy_projector");
    if (readout.per_generator.size() != code.generators.size())
        throw DimensionError("noisy_projector: need one confusion matrix per generator");
    LogicalConfusion lc = logical_confusion(readout);
    QuantumChannel ch;
    const std::size_t sectors = std::size_t(1) << (code.n - code.k);
    for (std::size_t j = 0; j < sectors; ++j) {
        double w = lc(j, m);
        if (w <= 0.0) continue;
        ch.kraus.push_back(std::sqrt(w) * cospace_projector(code, j));
    }
    if (ch.kraus.empty())
        ch.kraus.push_back(Matrix::Zero(Eigen::Index(1) << code.n, Eigen::Index(1) << code.n));
    return ch;
}

namespace detail {

// One noisy syndrome-bit measurement applied to a Hermitian operator:
// rho -> C(m,0) P0 rho P0 + C(m,1) P1 rho P1 with P_j = (I + (-1)^j G)/2.
// Expanded so only Pauli applications are needed.
inline Matrix apply_bit_measurement(const PauliOperator& g, int m, const ConfusionMatrix2& c,
                                    const Matrix& rho) {
    Matrix grho = pauli_apply_left(g, rho);
    Matrix rhog = grho.adjoint();  // rho and G Hermitian
    Matrix grhog = pauli_apply_left(g, rhog);
    double c0 = c(m, 0), c1 = c(m, 1);
    return 0.25 * ((c0 + c1) * (rho + grhog) + (c0 - c1) * (grho + rhog));
}

}  // namespace detail

/// First-principles noisy conditional logical channel
/// U^dag R^dag Pi~_{s(R)} N U; equals C-bar[s][s] times the ideal
/// conditional channel (the renormalization identity).
inline LogicalChannel noisy_conditional_logical_channel(const EncodingIsometry& iso,
                                                        const StabilizerCode& code,
                                                        const PauliOperator& r,
                                                        const NoiseModel& noise,
                                                        const ReadoutNoise& readout) {
    if (readout.per_generator.size() != code.generators.size())
        throw DimensionError("noisy_conditional_logical_channel: confusion matrix count");
    if (r.n() != code.n) throw DimensionError("noisy_conditional_logical_channel: recovery size");
    std::uint64_t s = syndrome_bits(code, r);
    const Eigen::Index dk = Eigen::Index(1) << iso.k;
    Matrix ru = pauli_apply_left(r, iso.matrix);
    LogicalChannel out = LogicalChannel::zero(iso.k);
    for (Eigen::Index b = 0; b < dk * dk; ++b) {
        Matrix sigma_b = pauli_matrix_from_index(static_cast<std::size_t>(b), iso.k);
        Matrix rho = iso.matrix * sigma_b * iso.matrix.adjoint();
        Matrix evolved = apply_noise(noise, rho);
        for (std::size_t i = 0; i < code.generators.size(); ++i)
            evolved = detail::apply_bit_measurement(code.generators[i],
                                                    static_cast<int>((s >> i) & 1u),
                                                    readout.per_generator[i], evolved);
        Matrix m = ru.adjoint() * evolved * ru;
        for (Eigen::Index a = 0; a < dk * dk; ++a) {
            Matrix sigma_a = pauli_matrix_from_index(static_cast<std::size_t>(a), iso.k);
            out.ptm(a, b) = (sigma_a * m).trace().real() / static_cast<double>(dk);
        }
    }
    return out;
}

inline LogicalChannel noisy_conditional_logical_channel(const StabilizerCode& code,
                                                        const PauliOperator& r,
                                                        const NoiseModel& noise,
                                                        const ReadoutNoise& readout) {
    require_dense(code.n, "noisy_conditional_logical_channel");
    return noisy_conditional_logical_channel(encoding_isometry(code), code, r, noise, readout);
}

}  // namespace qecsym
