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

#include <optional>
#include <string>
#include <vector>

#include "qecsym/codes.hpp"
#include "qecsym/errors.hpp"
#include "qecsym/linalg.hpp"
#include "qecsym/pauli.hpp"

namespace qecsym {

/// A completely positive map in Kraus form on m qubits.
struct QuantumChannel {
    std::vector<Matrix> kraus;

    int qubits() const {
        if (kraus.empty()) throw DimensionError("QuantumChannel: no Kraus operators");
        Eigen::Index d = kraus.front().rows();
        int m = 0;
        while ((Eigen::Index(1) << m) < d) ++m;
        if ((Eigen::Index(1) << m) != d || kraus.front().cols() != d)
            throw DimensionError("QuantumChannel: Kraus operators must be square 2^m x 2^m");
        return m;
    }

    Matrix superop() const { return superop_from_kraus(kraus); }

    bool is_trace_preserving(double tol = 1e-9) const {
        Eigen::Index d = kraus.front().rows();
        Matrix s = Matrix::Zero(d, d);
        for (const auto& k : kraus) s += k.adjoint() * k;
        return (s - Matrix::Identity(d, d)).norm() <= tol * std::sqrt(double(d));
    }
};

inline QuantumChannel identity_channel(int m = 1) {
    return QuantumChannel{{Matrix::Identity(Eigen::Index(1) << m, Eigen::Index(1) << m)}};
}

/// D_p(rho) = p rho + (1-p) tr(rho) I/2, i.e. PTM diag(1, p, p, p).
inline QuantumChannel depolarizing_channel(double p) {
    if (p < 0.0 || p > 1.0) throw ParseError("depolarizing_channel: p must be in [0, 1]");
    QuantumChannel ch;
    double w0 = std::sqrt((1.0 + 3.0 * p) / 4.0);
    double w1 = std::sqrt((1.0 - p) / 4.0);
    ch.kraus.push_back(w0 * Matrix(pauli1(kI)));
    if (w1 > 0.0) {
        ch.kraus.push_back(w1 * Matrix(pauli1(kX)));
        ch.kraus.push_back(w1 * Matrix(pauli1(kY)));
        ch.kraus.push_back(w1 * Matrix(pauli1(kZ)));
    }
    return ch;
}

/// Kraus form of an m-qubit map given by its PTM, via the Choi eigensystem.
/// Valid for completely positive (not necessarily trace-preserving) maps.
inline QuantumChannel channel_from_ptm(const RealMatrix& ptm, int m) {
    Eigen::Index d = Eigen::Index(1) << m;
    Matrix choi = choi_from_superop(superop_from_ptm(ptm, m), d);
    return QuantumChannel{kraus_from_choi(choi, d)};
}

inline RealMatrix channel_ptm(const QuantumChannel& ch) {
    return ptm_from_superop(ch.superop(), ch.qubits());
}

/// Structured noise description. `iid` and `depolarizing` without a concrete
/// factor/parameter act as noise *family* descriptors: they can filter
/// symmetries but cannot be applied to states.
struct NoiseModel {
    enum class Kind { iid, tensor, depolarizing, kraus };

    Kind kind = Kind::iid;
    int n = 0;  // total qubits
    std::optional<QuantumChannel> factor;  // iid: per-site channel (nullopt = generic family)
    std::vector<QuantumChannel> factors;   // tensor: contiguous factors, qubit counts sum to n
    std::optional<double> p;               // depolarizing parameter (nullopt = family)
    std::vector<Matrix> kraus;             // global Kraus operators

    static NoiseModel iid(const QuantumChannel& single, int copies) {
        NoiseModel nm;
        nm.kind = Kind::iid;
        nm.factor = single;
        nm.n = single.qubits() * copies;
        return nm;
    }

    static NoiseModel iid_family(int n) {
        NoiseModel nm;
        nm.kind = Kind::iid;
        nm.n = n;
        return nm;
    }

    static NoiseModel tensor(std::vector<QuantumChannel> fs) {
        NoiseModel nm;
        nm.kind = Kind::tensor;
        nm.factors = std::move(fs);
        nm.n = 0;
        for (const auto& f : nm.factors) nm.n += f.qubits();
        return nm;
    }

    static NoiseModel depolarizing(double p, int n) {
        if (p < 0.0 || p > 1.0) throw ParseError("depolarizing: p must be in [0, 1]");
        NoiseModel nm;
        nm.kind = Kind::depolarizing;
        nm.p = p;
        nm.n = n;
        return nm;
    }

    static NoiseModel depolarizing_family(int n) {
        NoiseModel nm;
        nm.kind = Kind::depolarizing;
        nm.n = n;
        return nm;
    }

    static NoiseModel general_kraus(std::vector<Matrix> ks, int n) {
        NoiseModel nm;
        nm.kind = Kind::kraus;
        nm.kraus = std::move(ks);
        nm.n = n;
        return nm;
    }

    bool is_concrete() const {
        switch (kind) {
            case Kind::iid: return factor.has_value();
            case Kind::depolarizing: return p.has_value();
            case Kind::tensor: return !factors.empty();
            case Kind::kraus: return !kraus.empty();
        }
        return false;
    }

    bool is_trace_preserving(double tol = 1e-9) const {
        switch (kind) {
            case Kind::iid: return factor && factor->is_trace_preserving(tol);
            case Kind::depolarizing: return p.has_value();
            case Kind::tensor: {
                for (const auto& f : factors)
                    if (!f.is_trace_preserving(tol)) return false;
                return true;
            }
            case Kind::kraus: return QuantumChannel{kraus}.is_trace_preserving(tol);
        }
        return false;
    }

    std::string describe() const {
        switch (kind) {
            case Kind::iid: return factor ? "iid" : "iid(family)";
            case Kind::depolarizing:
                return p ? "depolarizing(p=" + std::to_string(*p) + ")" : "depolarizing(family)";
            case Kind::tensor: return "tensor";
            case Kind::kraus: return "kraus";
        }
        return "?";
    }
};

/// Sum_K K op K^dagger, with tensor-structured models applied factor-wise so
/// the global Kraus operators are never materialized.
inline Matrix apply_noise(const NoiseModel& noise, const Matrix& op) {
    const Eigen::Index dim = op.rows();
    if (op.cols() != dim) throw DimensionError("apply_noise: operator must be square");
    if ((Eigen::Index(1) << noise.n) != dim)
        throw DimensionError("apply_noise: dimension does not match the noise model");
    if (!noise.is_concrete())
        throw ParseError("apply_noise: noise family descriptor has no concrete channel");
    switch (noise.kind) {
        case NoiseModel::Kind::iid: {
            Matrix s = noise.factor->superop();
            int m = noise.factor->qubits();
            Matrix cur = op;
            for (int q = 0; q + m <= noise.n; q += m)
                cur = apply_superop_to_qubits(cur, noise.n, q, m, s);
            return cur;
        }
        case NoiseModel::Kind::depolarizing: {
            Matrix s = depolarizing_channel(*noise.p).superop();
            Matrix cur = op;
            for (int q = 0; q < noise.n; ++q)
                cur = apply_superop_to_qubits(cur, noise.n, q, 1, s);
            return cur;
        }
        case NoiseModel::Kind::tensor: {
            Matrix cur = op;
            int q = 0;
            for (const auto& f : noise.factors) {
                int m = f.qubits();
                cur = apply_superop_to_qubits(cur, noise.n, q, m, f.superop());
                q += m;
            }
            if (q != noise.n) throw DimensionError("apply_noise: tensor factors do not cover n");
            return cur;
        }
        case NoiseModel::Kind::kraus: {
            Matrix out = Matrix::Zero(dim, dim);
            for (const auto& k : noise.kraus) out += k * op * k.adjoint();
            return out;
        }
    }
    throw ParseError("apply_noise: unknown noise kind");
}

/// A logical channel as its real PTM over the normalized k-qubit Pauli basis
/// (basis index base-4, qubit 0 most significant, letters I, X, Y, Z).
struct LogicalChannel {
    RealMatrix ptm;
    int k = 1;

    static LogicalChannel identity(int k) {
        return LogicalChannel{RealMatrix::Identity(Eigen::Index(1) << (2 * k),
                                                   Eigen::Index(1) << (2 * k)),
                              k};
    }

    static LogicalChannel zero(int k) {
        return LogicalChannel{RealMatrix::Zero(Eigen::Index(1) << (2 * k),
                                               Eigen::Index(1) << (2 * k)),
                              k};
    }

    LogicalChannel compose(const LogicalChannel& inner) const {
        return LogicalChannel{ptm * inner.ptm, k};
    }

    bool is_trace_preserving(double tol = 1e-9) const {
        RealMatrix row = ptm.row(0);
        row(0, 0) -= 1.0;
        return row.norm() <= tol;
    }

    bool is_unital(double tol = 1e-9) const {
        RealMatrix col = ptm.col(0);
        col(0, 0) -= 1.0;
        return col.norm() <= tol;
    }
};

inline double ptm_distance(const LogicalChannel& a, const LogicalChannel& b) {
    return rel_distance(a.ptm, b.ptm);
}

/// Effective map conditioned on recovery R (no probability normalization):
/// ptm[a][b] = tr(sigma_a (RU)^dag N(U sigma_b U^dag) (RU)) / 2^k.
inline LogicalChannel conditional_logical_channel(const EncodingIsometry& iso,
                                                  const PauliOperator& r,
                                                  const NoiseModel& noise) {
    if (r.n() != iso.n) throw DimensionError("conditional_logical_channel: recovery size");
    if (noise.n != iso.n) throw DimensionError("conditional_logical_channel: noise size");
    const Eigen::Index dk = Eigen::Index(1) << iso.k;
    const Eigen::Index cols = dk * dk;
    Matrix ru = pauli_apply_left(r, iso.matrix);
    LogicalChannel out = LogicalChannel::zero(iso.k);
    for (Eigen::Index b = 0; b < cols; ++b) {
        Matrix sigma_b = pauli_matrix_from_index(static_cast<std::size_t>(b), iso.k);
        Matrix rho = iso.matrix * sigma_b * iso.matrix.adjoint();
        Matrix evolved = apply_noise(noise, rho);
        Matrix m = ru.adjoint() * evolved * ru;
        for (Eigen::Index a = 0; a < cols; ++a) {
            Matrix sigma_a = pauli_matrix_from_index(static_cast<std::size_t>(a), iso.k);
            out.ptm(a, b) = (sigma_a * m).trace().real() / static_cast<double>(dk);
        }
    }
    return out;
}

inline LogicalChannel conditional_logical_channel(const StabilizerCode& code,
                                                  const PauliOperator& r,
                                                  const NoiseModel& noise) {
    require_dense(code.n, "conditional_logical_channel");
    return conditional_logical_channel(encoding_isometry(code), r, noise);
}

/// Entrywise sum of the conditional channels over all syndromes.
inline LogicalChannel average_logical_channel(const EncodingIsometry& iso,
                                              const RecoverySet& recovery,
                                              const NoiseModel& noise) {
    LogicalChannel out = LogicalChannel::zero(iso.k);
    for (const auto& r : recovery.maps) {
        LogicalChannel c = conditional_logical_channel(iso, r, noise);
        out.ptm += c.ptm;
    }
    return out;
}

inline LogicalChannel average_logical_channel(const StabilizerCode& code,
                                              const RecoverySet& recovery,
                                              const NoiseModel& noise) {
    require_dense(code.n, "average_logical_channel");
    return average_logical_channel(encoding_isometry(code), recovery, noise);
}

/// Seeded random IID noise with per-site Kraus rank 2; the reproducible
/// "generic" noise used for verification runs.
inline NoiseModel random_iid_noise(int n, std::uint64_t seed) {
    Rng rng(seed);
    return NoiseModel::iid(QuantumChannel{random_kraus_channel(2, 2, rng)}, n);
}

}  // namespace qecsym
