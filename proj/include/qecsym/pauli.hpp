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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "qecsym/errors.hpp"
#include "qecsym/linalg.hpp"

namespace qecsym {

// Letter codes; the order doubles as the lexicographic rank.
enum PauliLetter : int { kI = 0, kX = 1, kY = 2, kZ = 3 };

/// An n-qubit Pauli operator in symplectic form with exact phase tracking.
///
/// Internally the operator is i^w * prod_q X^{x_q} Z^{z_q} with w in Z_4
/// (so the letter Y at a qubit contributes one factor of i to w). The
/// public phase() is relative to the letter string: matrix() equals
/// i^phase() * (tensor product of the I/X/Y/Z letters), qubit 0 leftmost.
/// Immutable value type; all operations are pure.
class PauliOperator {
  public:
    explicit PauliOperator(int n)
        : n_(n), x_((n + 63) / 64, 0), z_((n + 63) / 64, 0), phase_xz_(0) {
        if (n < 1) throw DimensionError("PauliOperator: need at least one qubit");
    }

    static PauliOperator identity(int n) { return PauliOperator(n); }

    static PauliOperator from_letters(const std::vector<int>& letters, int phase = 0) {
        PauliOperator p(static_cast<int>(letters.size()));
        int ys = 0;
        for (int q = 0; q < p.n_; ++q) {
            int l = letters[q];
            if (l < 0 || l > 3) throw ParseError("PauliOperator: bad letter code");
            if (l == kX || l == kY) p.set_bit(p.x_, q);
            if (l == kZ || l == kY) p.set_bit(p.z_, q);
            if (l == kY) ++ys;
        }
        p.phase_xz_ = mod4(phase + ys);
        return p;
    }

    // Single nontrivial letter at one qubit.
    static PauliOperator single(int n, int qubit, int letter, int phase = 0) {
        std::vector<int> letters(n, kI);
        letters.at(qubit) = letter;
        return from_letters(letters, phase);
    }

    int n() const { return n_; }

    int x_bit(int q) const { return get_bit(x_, q); }
    int z_bit(int q) const { return get_bit(z_, q); }

    int letter(int q) const {
        int x = x_bit(q), z = z_bit(q);
        return x ? (z ? kY : kX) : (z ? kZ : kI);
    }

    // Phase exponent relative to the letter string: matrix = i^phase * letters.
    int phase() const { return mod4(phase_xz_ - y_count()); }

    int y_count() const {
        int c = 0;
        for (std::size_t w = 0; w < x_.size(); ++w) c += std::popcount(x_[w] & z_[w]);
        return c;
    }

    bool is_identity_letters() const {
        for (std::size_t w = 0; w < x_.size(); ++w)
            if (x_[w] | z_[w]) return false;
        return true;
    }

    bool is_identity() const { return is_identity_letters() && phase_xz_ == 0; }

    PauliOperator with_phase(int display_phase) const {
        PauliOperator p = *this;
        p.phase_xz_ = mod4(display_phase + y_count());
        return p;
    }

    PauliOperator phase_normalized() const { return with_phase(0); }

    PauliOperator times_i(int k) const {
        PauliOperator p = *this;
        p.phase_xz_ = mod4(p.phase_xz_ + k);
        return p;
    }

    friend PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
        if (a.n_ != b.n_) throw DimensionError("multiply: qubit counts differ");
        PauliOperator p(a.n_);
        int cross = 0;
        for (std::size_t w = 0; w < a.x_.size(); ++w) {
            p.x_[w] = a.x_[w] ^ b.x_[w];
            p.z_[w] = a.z_[w] ^ b.z_[w];
            cross += std::popcount(a.z_[w] & b.x_[w]);
        }
        p.phase_xz_ = mod4(a.phase_xz_ + b.phase_xz_ + 2 * (cross & 1));
        return p;
    }

    friend bool commutes(const PauliOperator& a, const PauliOperator& b) {
        if (a.n_ != b.n_) throw DimensionError("commutes: qubit counts differ");
        int s = 0;
        for (std::size_t w = 0; w < a.x_.size(); ++w)
            s += std::popcount(a.x_[w] & b.z_[w]) + std::popcount(a.z_[w] & b.x_[w]);
        return (s & 1) == 0;
    }

    friend int weight(const PauliOperator& p) {
        int c = 0;
        for (std::size_t w = 0; w < p.x_.size(); ++w) c += std::popcount(p.x_[w] | p.z_[w]);
        return c;
    }

    friend bool operator==(const PauliOperator& a, const PauliOperator& b) {
        return a.n_ == b.n_ && a.phase_xz_ == b.phase_xz_ && a.x_ == b.x_ && a.z_ == b.z_;
    }
    friend bool operator!=(const PauliOperator& a, const PauliOperator& b) { return !(a == b); }

    // Same letter string, phase ignored.
    friend bool same_letters(const PauliOperator& a, const PauliOperator& b) {
        return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
    }

    std::string to_string() const {
        static const char* prefix[4] = {"", "+i", "-", "-i"};
        static const char letters[5] = "IXYZ";
        std::string s = prefix[phase()];
        for (int q = 0; q < n_; ++q) s += letters[letter(q)];
        return s;
    }

    Matrix matrix() const {
        require_dense(n_, "PauliOperator::matrix");
        std::size_t idx = 0;
        for (int q = 0; q < n_; ++q) idx = idx * 4 + static_cast<std::size_t>(letter(q));
        Matrix m = pauli_matrix_from_index(idx, n_);
        static const cxd ip[4] = {cxd(1, 0), cxd(0, 1), cxd(-1, 0), cxd(0, -1)};
        return ip[phase()] * m;
    }

    struct Hash {
        std::size_t operator()(const PauliOperator& p) const {
            std::uint64_t h = 1469598103934665603ull;
            auto mix = [&h](std::uint64_t v) {
                h ^= v;
                h *= 1099511628211ull;
            };
            mix(static_cast<std::uint64_t>(p.phase_xz_));
            for (auto w : p.x_) mix(w);
            for (auto w : p.z_) mix(w);
            return static_cast<std::size_t>(h);
        }
    };

  private:
    friend class SymmetryOp;

    static int mod4(int v) { return ((v % 4) + 4) % 4; }

    static void set_bit(std::vector<std::uint64_t>& bits, int q) {
        bits[static_cast<std::size_t>(q) / 64] |= (std::uint64_t(1) << (q % 64));
    }
    static int get_bit(const std::vector<std::uint64_t>& bits, int q) {
        return static_cast<int>((bits[static_cast<std::size_t>(q) / 64] >> (q % 64)) & 1u);
    }

    int n_;
    std::vector<std::uint64_t> x_, z_;
    int phase_xz_;  // matrix = i^phase_xz_ * prod X^x Z^z
};

/// Total order used for canonical class representatives:
/// weight first, then the letter string with I < X < Y < Z, then phase.
inline bool pauli_less(const PauliOperator& a, const PauliOperator& b) {
    int wa = weight(a), wb = weight(b);
    if (wa != wb) return wa < wb;
    for (int q = 0; q < a.n(); ++q) {
        int la = a.letter(q), lb = b.letter(q);
        if (la != lb) return la < lb;
    }
    return a.phase() < b.phase();
}

inline PauliOperator parse_pauli(const std::string& text, int expected_n = -1) {
    std::size_t pos = 0;
    int phase = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        bool neg = text[pos] == '-';
        ++pos;
        if (pos < text.size() && text[pos] == 'i') {
            phase = neg ? 3 : 1;
            ++pos;
        } else {
            phase = neg ? 2 : 0;
        }
    }
    std::vector<int> letters;
    for (; pos < text.size(); ++pos) {
        switch (text[pos]) {
            case 'I': letters.push_back(kI); break;
            case 'X': letters.push_back(kX); break;
            case 'Y': letters.push_back(kY); break;
            case 'Z': letters.push_back(kZ); break;
            default:
                throw ParseError("parse_pauli: unexpected character '" +
                                 std::string(1, text[pos]) + "' in \"" + text + "\"");
        }
    }
    if (letters.empty()) throw ParseError("parse_pauli: no letters in \"" + text + "\"");
    if (expected_n >= 0 && static_cast<int>(letters.size()) != expected_n)
        throw ParseError("parse_pauli: expected " + std::to_string(expected_n) +
                         " qubits, got " + std::to_string(letters.size()));
    return PauliOperator::from_letters(letters, phase);
}

// All phase-+1 Paulis of the given weights, in canonical (weight, letters)
// order. Intended for small weights; the count is C(n,w)*3^w per weight.
inline std::vector<PauliOperator> paulis_of_weight(int n, int w) {
    std::vector<PauliOperator> out;
    if (w == 0) {
        out.push_back(PauliOperator::identity(n));
        return out;
    }
    std::vector<int> positions(w);
    for (int i = 0; i < w; ++i) positions[i] = i;
    auto emit_letters = [&out, n, w](const std::vector<int>& pos) {
        std::vector<int> assignment(w, kX);
        while (true) {
            std::vector<int> letters(n, kI);
            for (int i = 0; i < w; ++i) letters[pos[i]] = assignment[i];
            out.push_back(PauliOperator::from_letters(letters));
            int i = w - 1;
            while (i >= 0 && assignment[i] == kZ) assignment[i--] = kX;
            if (i < 0) break;
            ++assignment[i];
        }
    };
    while (true) {
        emit_letters(positions);
        int i = w - 1;
        while (i >= 0 && positions[i] == n - w + i) --i;
        if (i < 0) break;
        ++positions[i];
        for (int j = i + 1; j < w; ++j) positions[j] = positions[j - 1] + 1;
    }
    std::sort(out.begin(), out.end(), pauli_less);
    return out;
}

inline std::vector<PauliOperator> paulis_up_to_weight(int n, int wmax, bool include_identity) {
    std::vector<PauliOperator> out;
    for (int w = include_identity ? 0 : 1; w <= wmax; ++w) {
        auto layer = paulis_of_weight(n, w);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace qecsym
