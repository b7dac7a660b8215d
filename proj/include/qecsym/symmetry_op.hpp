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
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qecsym/errors.hpp"
#include "qecsym/linalg.hpp"
#include "qecsym/pauli.hpp"

namespace qecsym {

/// A single-qubit unitary with its conjugation action on Paulis, when that
/// action is a signed Pauli permutation (i.e. the gate is Clifford). The
/// action is derived from the matrix at construction, so explicitly supplied
/// 2x2 unitaries get symbolic treatment whenever they happen to be Clifford.
class SingleQubitGate {
  public:
    SingleQubitGate() : SingleQubitGate("I", Eigen::Matrix2cd::Identity()) {}

    SingleQubitGate(std::string label, const Eigen::Matrix2cd& u)
        : label_(std::move(label)), u_(u) {
        img_x_ = match_signed_pauli(u_ * pauli1(kX) * u_.adjoint());
        img_z_ = match_signed_pauli(u_ * pauli1(kZ) * u_.adjoint());
    }

    static SingleQubitGate named(const std::string& label) {
        Eigen::Matrix2cd m;
        const cxd i(0, 1);
        const double s = 1.0 / std::sqrt(2.0);
        if (label == "I" || label == "identity") m = Eigen::Matrix2cd::Identity();
        else if (label == "X") m = pauli1(kX);
        else if (label == "Y") m = pauli1(kY);
        else if (label == "Z") m = pauli1(kZ);
        else if (label == "H") m << s, s, s, -s;
        else if (label == "S") m << 1, 0, 0, i;
        else if (label == "Sdg") m << 1, 0, 0, -i;
        else if (label == "SqrtX") m << 0.5 * cxd(1, 1), 0.5 * cxd(1, -1), 0.5 * cxd(1, -1),
            0.5 * cxd(1, 1);
        else if (label == "Q") {
            // Q = sqrt(Z) sqrt(X); conjugation maps X -> Y -> Z -> X.
            Eigen::Matrix2cd sx, sz;
            sx << 0.5 * cxd(1, 1), 0.5 * cxd(1, -1), 0.5 * cxd(1, -1), 0.5 * cxd(1, 1);
            sz << 1, 0, 0, i;
            m = sz * sx;
        } else if (label == "Q2") {
            SingleQubitGate q = named("Q");
            m = q.matrix() * q.matrix();
        } else {
            throw ParseError("unknown single-qubit gate label \"" + label + "\"");
        }
        return SingleQubitGate(label, m);
    }

    const std::string& label() const { return label_; }
    const Eigen::Matrix2cd& matrix() const { return u_; }

    bool is_clifford() const { return img_x_.has_value() && img_z_.has_value(); }

    // True when conjugation by the gate is the identity map on Paulis.
    bool is_identity_conjugation() const {
        return is_clifford() && *img_x_ == PauliOperator::single(1, 0, kX) &&
               *img_z_ == PauliOperator::single(1, 0, kZ);
    }

    // Exact conjugation image of the 1-qubit X (resp. Z) as a phased Pauli.
    const PauliOperator& image_of_x() const { return require_clifford(img_x_); }
    const PauliOperator& image_of_z() const { return require_clifford(img_z_); }

    SingleQubitGate daggered() const {
        return SingleQubitGate(label_ == "I" ? "I" : label_ + "_dg", u_.adjoint());
    }

  private:
    const PauliOperator& require_clifford(const std::optional<PauliOperator>& img) const {
        if (!img)
            throw UnsupportedSymmetryError("gate \"" + label_ +
                                           "\" is not Clifford; no symbolic Pauli action");
        return *img;
    }

    static std::optional<PauliOperator> match_signed_pauli(const Eigen::Matrix2cd& m) {
        for (int letter = kX; letter <= kZ; ++letter) {
            for (int sign = 0; sign <= 1; ++sign) {
                double d = (m - (sign ? -1.0 : 1.0) * pauli1(letter)).norm();
                if (d < 1e-9) return PauliOperator::single(1, 0, letter, sign ? 2 : 0);
            }
        }
        return std::nullopt;
    }

    std::string label_;
    Eigen::Matrix2cd u_;
    std::optional<PauliOperator> img_x_, img_z_;
};

/// A qubit permutation composed with a transversal layer of single-qubit
/// unitaries: A = P_perm * (u_0 (x) ... (x) u_{n-1}), i.e. the transversal
/// layer acts first and the permutation then moves qubit q to perm[q].
class SymmetryOp {
  public:
    SymmetryOp(std::vector<int> permutation, std::vector<SingleQubitGate> transversal,
               std::string name)
        : perm_(std::move(permutation)), gates_(std::move(transversal)), name_(std::move(name)) {
        validate();
    }

    static SymmetryOp pure_permutation(std::vector<int> permutation, std::string name) {
        std::vector<SingleQubitGate> gates(permutation.size());
        return SymmetryOp(std::move(permutation), std::move(gates), std::move(name));
    }

    static SymmetryOp transversal_uniform(const SingleQubitGate& g, int n, std::string name) {
        std::vector<int> perm(n);
        for (int q = 0; q < n; ++q) perm[q] = q;
        return SymmetryOp(std::move(perm), std::vector<SingleQubitGate>(n, g), std::move(name));
    }

    int n() const { return static_cast<int>(perm_.size()); }
    const std::vector<int>& permutation() const { return perm_; }
    const std::vector<SingleQubitGate>& transversal() const { return gates_; }
    const std::string& name() const { return name_; }

    bool is_pure_permutation() const {
        for (const auto& g : gates_)
            if (!g.is_identity_conjugation()) return false;
        return true;
    }

    bool is_clifford() const {
        for (const auto& g : gates_)
            if (!g.is_clifford()) return false;
        return true;
    }

    bool transversal_is_uniform() const {
        for (const auto& g : gates_)
            if ((g.matrix() - gates_.front().matrix()).norm() > 1e-12) return false;
        return true;
    }

    SymmetryOp inverse() const {
        const int nn = n();
        std::vector<int> perm(nn);
        std::vector<SingleQubitGate> gates(nn);
        for (int q = 0; q < nn; ++q) {
            perm[perm_[q]] = q;
            gates[perm_[q]] = gates_[q].daggered();
        }
        return SymmetryOp(std::move(perm), std::move(gates), name_ + "^-1");
    }

    // a.compose(b) applies b first: matrix(a) * matrix(b).
    SymmetryOp compose(const SymmetryOp& b) const {
        if (n() != b.n()) throw DimensionError("SymmetryOp::compose: size mismatch");
        const int nn = n();
        std::vector<int> perm(nn);
        std::vector<SingleQubitGate> gates(nn);
        for (int q = 0; q < nn; ++q) {
            perm[q] = perm_[b.perm_[q]];
            const auto& ua = gates_[b.perm_[q]];
            const auto& ub = b.gates_[q];
            gates[q] = SingleQubitGate(ua.label() + "*" + ub.label(),
                                       ua.matrix() * ub.matrix());
        }
        return SymmetryOp(std::move(perm), std::move(gates), name_ + "*" + b.name_);
    }

    Matrix dense() const {
        require_dense(n(), "SymmetryOp::dense");
        const int nn = n();
        const std::size_t dim = std::size_t(1) << nn;
        Matrix t = Matrix::Identity(1, 1);
        for (int q = 0; q < nn; ++q) t = kron(t, Matrix(gates_[q].matrix()));
        Matrix out = Matrix::Zero(dim, dim);
        for (std::size_t r = 0; r < dim; ++r) {
            std::size_t rp = 0;
            for (int q = 0; q < nn; ++q)
                if (bit_of_qubit(r, q, nn)) rp |= std::size_t(1) << (nn - 1 - perm_[q]);
            out.row(rp) = t.row(static_cast<Eigen::Index>(r));
        }
        return out;
    }

  private:
    void validate() const {
        const int nn = n();
        if (nn == 0) throw DimensionError("SymmetryOp: empty permutation");
        if (gates_.size() != perm_.size())
            throw DimensionError("SymmetryOp: transversal length must match qubit count");
        std::vector<char> seen(nn, 0);
        for (int v : perm_) {
            if (v < 0 || v >= nn || seen[v]) throw ParseError("SymmetryOp: not a permutation");
            seen[v] = 1;
        }
    }

    std::vector<int> perm_;
    std::vector<SingleQubitGate> gates_;
    std::string name_;
};

/// Exact A P A^dagger for a Clifford symmetry: per-qubit letters are remapped
/// by the transversal gates (with signs tracked in the global phase) and then
/// relocated along the permutation.
inline PauliOperator conjugate_by_symmetry(const PauliOperator& p, const SymmetryOp& op) {
    if (p.n() != op.n()) throw DimensionError("conjugate_by_symmetry: size mismatch");
    if (!op.is_clifford())
        throw UnsupportedSymmetryError("conjugate_by_symmetry: non-Clifford transversal part");
    const int n = p.n();
    std::vector<int> letters(n, kI);
    int phase_xz = p.phase() + p.y_count();  // internal XZ-form exponent
    for (int q = 0; q < n; ++q) {
        int x = p.x_bit(q), z = p.z_bit(q);
        if (!x && !z) continue;
        const auto& gate = op.transversal()[q];
        PauliOperator img = PauliOperator::identity(1);
        if (x) img = multiply(img, gate.image_of_x());
        if (z) img = multiply(img, gate.image_of_z());
        phase_xz += img.phase() + img.y_count();
        letters[op.permutation()[q]] = img.letter(0);
    }
    int y_after = 0;
    for (int l : letters)
        if (l == kY) ++y_after;
    return PauliOperator::from_letters(letters, ((phase_xz - y_after) % 4 + 4) % 4);
}

/// Parses disjoint-cycle notation like "(0 1 2)(3 4)"; fixed points implied.
inline std::vector<int> parse_permutation_cycles(const std::string& text, int n) {
    std::vector<int> perm(n);
    for (int q = 0; q < n; ++q) perm[q] = q;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        if (text[pos] != '(') throw ParseError("cycle notation: expected '(' in \"" + text + "\"");
        std::size_t close = text.find(')', pos);
        if (close == std::string::npos) throw ParseError("cycle notation: missing ')'");
        std::istringstream cycle(text.substr(pos + 1, close - pos - 1));
        std::vector<int> elems;
        int v;
        while (cycle >> v) {
            if (v < 0 || v >= n) throw ParseError("cycle notation: index out of range");
            elems.push_back(v);
        }
        for (std::size_t i = 0; i < elems.size(); ++i)
            perm[elems[i]] = elems[(i + 1) % elems.size()];
        pos = close + 1;
    }
    return perm;
}

}  // namespace qecsym
