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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qecsym {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;

// Index convention used throughout: qubit 0 is the leftmost tensor factor,
// i.e. the most significant bit of a computational-basis index.
inline int bit_of_qubit(std::size_t index, int qubit, int n) {
    return static_cast<int>((index >> (n - 1 - qubit)) & 1u);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix dagger(const Matrix& a) { return a.adjoint(); }

inline double frobenius(const Matrix& a) { return a.norm(); }

// Relative Frobenius distance; both operands near zero compare equal.
inline double rel_distance(const Matrix& a, const Matrix& b) {
    double scale = std::max(a.norm(), b.norm());
    if (scale < 1e-300) return 0.0;
    return (a - b).norm() / scale;
}

inline double rel_distance(const RealMatrix& a, const RealMatrix& b) {
    double scale = std::max(a.norm(), b.norm());
    if (scale < 1e-300) return 0.0;
    return (a - b).norm() / scale;
}

inline const Eigen::Matrix2cd& pauli1(int letter) {
    static const Eigen::Matrix2cd mats[4] = {
        (Eigen::Matrix2cd() << 1, 0, 0, 1).finished(),
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << 0, cxd(0, -1), cxd(0, 1), 0).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
    };
    return mats[letter];
}

// Dense m-qubit Pauli from base-4 digits, digit for qubit 0 most significant,
// letter order I,X,Y,Z.
inline Matrix pauli_matrix_from_index(std::size_t idx, int m) {
    Matrix out = Matrix::Identity(1, 1);
    for (int q = 0; q < m; ++q) {
        int letter = static_cast<int>((idx >> (2 * (m - 1 - q))) & 3u);
        out = kron(out, pauli1(letter));
    }
    return out;
}

// Superoperators are stored as d^2 x d^2 matrices over the |i><j| basis with
// pair index i*d + j: S[(i,j),(i',j')] is the coefficient of |i><j| in the
// image of |i'><j'|.
inline Matrix superop_from_kraus(const std::vector<Matrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("superop_from_kraus: empty Kraus list");
    const Eigen::Index d = kraus.front().rows();
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const Matrix& k : kraus) {
        if (k.rows() != d || k.cols() != d)
            throw std::invalid_argument("superop_from_kraus: inconsistent Kraus dimensions");
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index ip = 0; ip < d; ++ip)
                    for (Eigen::Index jp = 0; jp < d; ++jp)
                        s(i * d + j, ip * d + jp) += k(i, ip) * std::conj(k(j, jp));
    }
    return s;
}

// PTM in the normalized Pauli basis: ptm[a][b] = tr(sigma_a S(sigma_b)) / d.
inline RealMatrix ptm_from_superop(const Matrix& s, int m) {
    const Eigen::Index d = Eigen::Index(1) << m;
    const Eigen::Index dd = d * d;
    RealMatrix ptm(dd, dd);
    for (Eigen::Index b = 0; b < dd; ++b) {
        Matrix sb = pauli_matrix_from_index(static_cast<std::size_t>(b), m);
        Vector vec_sb(d * d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) vec_sb(i * d + j) = sb(i, j);
        Vector img = s * vec_sb;
        for (Eigen::Index a = 0; a < dd; ++a) {
            Matrix sa = pauli_matrix_from_index(static_cast<std::size_t>(a), m);
            cxd tr = 0;
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j) tr += sa(j, i) * img(i * d + j);
            ptm(a, b) = tr.real() / static_cast<double>(d);
        }
    }
    return ptm;
}

inline Matrix superop_from_ptm(const RealMatrix& ptm, int m) {
    const Eigen::Index d = Eigen::Index(1) << m;
    const Eigen::Index dd = d * d;
    if (ptm.rows() != dd || ptm.cols() != dd)
        throw std::invalid_argument("superop_from_ptm: dimension mismatch");
    Matrix s = Matrix::Zero(d * d, d * d);
    for (Eigen::Index a = 0; a < dd; ++a) {
        Matrix sa = pauli_matrix_from_index(static_cast<std::size_t>(a), m);
        for (Eigen::Index b = 0; b < dd; ++b) {
            if (ptm(a, b) == 0.0) continue;
            Matrix sb = pauli_matrix_from_index(static_cast<std::size_t>(b), m);
            double w = ptm(a, b) / static_cast<double>(d);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j)
                    for (Eigen::Index ip = 0; ip < d; ++ip)
                        for (Eigen::Index jp = 0; jp < d; ++jp)
                            s(i * d + j, ip * d + jp) += w * sa(i, j) * sb(jp, ip);
        }
    }
    return s;
}

// Choi matrix with block index (i,i'),(j,j'): C = sum_{i'j'} S(|i'><j'|) (x) |i'><j'|.
inline Matrix choi_from_superop(const Matrix& s, Eigen::Index d) {
    Matrix c(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index ip = 0; ip < d; ++ip)
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index jp = 0; jp < d; ++jp)
                    c(i * d + ip, j * d + jp) = s(i * d + j, ip * d + jp);
    return c;
}

// Kraus decomposition of a completely positive map; eigenvalues below the
// cutoff (relative to the largest) are dropped.
inline std::vector<Matrix> kraus_from_choi(const Matrix& choi, Eigen::Index d,
                                           double cutoff = 1e-12) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(choi);
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    double top = vals.cwiseAbs().maxCoeff();
    std::vector<Matrix> kraus;
    for (Eigen::Index v = 0; v < vals.size(); ++v) {
        if (vals(v) <= cutoff * std::max(top, 1.0)) continue;
        Matrix k(d, d);
        double w = std::sqrt(vals(v));
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index ip = 0; ip < d; ++ip) k(i, ip) = w * vecs(i * d + ip, v);
        kraus.push_back(std::move(k));
    }
    if (kraus.empty()) kraus.push_back(Matrix::Zero(d, d));
    return kraus;
}

// Applies an m-qubit superoperator to the contiguous qubits [q0, q0+m) of an
// n-qubit operator. The factor never gets materialized on the full space.
inline Matrix apply_superop_to_qubits(const Matrix& op, int n, int q0, int m, const Matrix& s) {
    const std::size_t dim = std::size_t(1) << n;
    if (op.rows() != static_cast<Eigen::Index>(dim) || op.cols() != static_cast<Eigen::Index>(dim))
        throw std::invalid_argument("apply_superop_to_qubits: operator dimension mismatch");
    const std::size_t dm = std::size_t(1) << m;
    const int lo_bits = n - q0 - m;
    const std::size_t lo = std::size_t(1) << lo_bits;
    const std::size_t hi = std::size_t(1) << q0;
    Matrix out = Matrix::Zero(op.rows(), op.cols());
    std::vector<cxd> block(dm * dm);
    for (std::size_t a = 0; a < hi; ++a)
        for (std::size_t b = 0; b < lo; ++b)
            for (std::size_t ap = 0; ap < hi; ++ap)
                for (std::size_t bp = 0; bp < lo; ++bp) {
                    for (std::size_t i = 0; i < dm; ++i)
                        for (std::size_t j = 0; j < dm; ++j)
                            block[i * dm + j] =
                                op((a << (m + lo_bits)) + (i << lo_bits) + b,
                                   (ap << (m + lo_bits)) + (j << lo_bits) + bp);
                    for (std::size_t i = 0; i < dm; ++i)
                        for (std::size_t j = 0; j < dm; ++j) {
                            cxd acc = 0;
                            for (std::size_t ij = 0; ij < dm * dm; ++ij)
                                acc += s(i * dm + j, ij) * block[ij];
                            out((a << (m + lo_bits)) + (i << lo_bits) + b,
                                (ap << (m + lo_bits)) + (j << lo_bits) + bp) = acc;
                        }
                }
    return out;
}

// Deterministic RNG: fully specified generation so that a seed pins every
// sampled noise model bit-for-bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        // 53-bit mantissa uniform in [0, 1).
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double gauss() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    cxd cgauss() { return cxd(gauss(), gauss()); }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

inline Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Matrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.cgauss();
    return g;
}

// Haar-distributed unitary via QR of a Ginibre matrix with phase-fixed R.
inline Matrix random_unitary(Eigen::Index d, Rng& rng) {
    Matrix g = random_ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        cxd diag = r(i, i);
        cxd phase = (std::abs(diag) < 1e-300) ? cxd(1, 0) : diag / std::abs(diag);
        q.col(i) *= phase;
    }
    return q;
}

// Random CPTP channel with a fixed Kraus rank, from a Haar-like isometry
// (QR of a (rank*d) x d Ginibre matrix).
inline std::vector<Matrix> random_kraus_channel(Eigen::Index d, int rank, Rng& rng) {
    Matrix g = random_ginibre(rank * d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = Matrix(qr.householderQ()).leftCols(d);
    std::vector<Matrix> kraus;
    for (int i = 0; i < rank; ++i) kraus.push_back(q.middleRows(i * d, d));
    return kraus;
}

}  // namespace qecsym
