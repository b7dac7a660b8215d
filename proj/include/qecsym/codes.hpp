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

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qecsym/errors.hpp"
#include "qecsym/linalg.hpp"
#include "qecsym/pauli.hpp"

namespace qecsym {

/// An (n, k) stabilizer code: n-k independent commuting generators plus a
/// chosen logical X/Z frame. Immutable after construction.
struct StabilizerCode {
    std::string name;
    int n = 0;
    int k = 0;
    std::vector<PauliOperator> generators;
    std::vector<PauliOperator> logical_x;
    std::vector<PauliOperator> logical_z;
};

inline PauliOperator pauli_inverse(const PauliOperator& p) {
    return p.with_phase((4 - p.phase()) % 4);
}

namespace detail {

// GF(2) row span of Pauli letter strings in symplectic (x|z) form, with
// combination tracking so group elements can be reconstructed exactly.
class SymplecticBasis {
  public:
    explicit SymplecticBasis(const std::vector<PauliOperator>& rows) {
        if (rows.empty()) return;
        n_ = rows.front().n();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::vector<char> bits = to_bits(rows[r]);
            std::vector<std::uint64_t> combo((rows.size() + 63) / 64, 0);
            combo[r / 64] |= std::uint64_t(1) << (r % 64);
            eliminate(bits, combo);
            int pivot = first_set(bits);
            if (pivot >= 0) {
                pivots_.push_back(pivot);
                rows_.push_back(std::move(bits));
                combos_.push_back(std::move(combo));
            }
        }
    }

    int rank() const { return static_cast<int>(rows_.size()); }

    struct Reduction {
        bool in_span = false;
        std::vector<std::uint64_t> combo;  // generator indices, bit i = row i
    };

    Reduction reduce(const PauliOperator& p) const {
        std::vector<char> bits = to_bits(p);
        Reduction red;
        red.combo.assign(combos_.empty() ? 1 : combos_.front().size(), 0);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!bits[pivots_[i]]) continue;
            for (std::size_t b = 0; b < bits.size(); ++b) bits[b] ^= rows_[i][b];
            for (std::size_t w = 0; w < red.combo.size(); ++w) red.combo[w] ^= combos_[i][w];
        }
        red.in_span = first_set(bits) < 0;
        return red;
    }

  private:
    std::vector<char> to_bits(const PauliOperator& p) const {
        std::vector<char> bits(2 * n_, 0);
        for (int q = 0; q < n_; ++q) {
            bits[q] = static_cast<char>(p.x_bit(q));
            bits[n_ + q] = static_cast<char>(p.z_bit(q));
        }
        return bits;
    }

    void eliminate(std::vector<char>& bits, std::vector<std::uint64_t>& combo) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!bits[pivots_[i]]) continue;
            for (std::size_t b = 0; b < bits.size(); ++b) bits[b] ^= rows_[i][b];
            for (std::size_t w = 0; w < combo.size(); ++w) combo[w] ^= combos_[i][w];
        }
    }

    static int first_set(const std::vector<char>& bits) {
        for (std::size_t b = 0; b < bits.size(); ++b)
            if (bits[b]) return static_cast<int>(b);
        return -1;
    }

    int n_ = 0;
    std::vector<int> pivots_;
    std::vector<std::vector<char>> rows_;
    std::vector<std::vector<std::uint64_t>> combos_;
};

inline int symplectic_rank(const std::vector<PauliOperator>& rows) {
    return SymplecticBasis(rows).rank();
}

}  // namespace detail

/// Validating constructor; every invariant of the code structure is checked.
inline StabilizerCode make_stabilizer_code(std::string name,
                                           std::vector<PauliOperator> generators,
                                           std::vector<PauliOperator> logical_x,
                                           std::vector<PauliOperator> logical_z) {
    StabilizerCode code;
    code.name = std::move(name);
    if (generators.empty()) throw ParseError("stabilizer code needs at least one generator");
    code.n = generators.front().n();
    code.k = code.n - static_cast<int>(generators.size());
    if (code.k < 1)
        throw ParseError("stabilizer code \"" + code.name + "\": no logical qubits left");
    if (logical_x.size() != static_cast<std::size_t>(code.k) ||
        logical_z.size() != static_cast<std::size_t>(code.k))
        throw ParseError("stabilizer code \"" + code.name + "\": need k logical X and Z each");

    for (const auto& g : generators)
        if (g.n() != code.n) throw DimensionError("generator size mismatch");
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            if (!commutes(generators[i], generators[j]))
                throw ParseError("generators " + generators[i].to_string() + " and " +
                                 generators[j].to_string() + " anticommute");
            if (same_letters(generators[i], generators[j]))
                throw ParseError("generators are not distinct up to phase");
        }
    if (detail::symplectic_rank(generators) != code.n - code.k)
        throw ParseError("stabilizer code \"" + code.name + "\": generators are dependent");

    auto check_logical = [&](const PauliOperator& l, const std::string& what) {
        if (l.n() != code.n) throw DimensionError(what + " size mismatch");
        for (const auto& g : generators)
            if (!commutes(l, g))
                throw ParseError(what + " " + l.to_string() + " anticommutes with a generator");
    };
    for (int j = 0; j < code.k; ++j) {
        check_logical(logical_x[j], "logical X");
        check_logical(logical_z[j], "logical Z");
        for (int l = 0; l < code.k; ++l) {
            bool want_anti = (l == j);
            if (commutes(logical_x[j], logical_z[l]) == want_anti)
                throw ParseError("logical operators have the wrong commutation pattern");
            if (l != j && (!commutes(logical_x[j], logical_x[l]) ||
                           !commutes(logical_z[j], logical_z[l])))
                throw ParseError("logical operators of like type must commute");
        }
    }
    code.generators = std::move(generators);
    code.logical_x = std::move(logical_x);
    code.logical_z = std::move(logical_z);
    return code;
}

inline StabilizerCode builtin(const std::string& name) {
    auto P = [](const std::string& s) { return parse_pauli(s); };
    if (name == "three_qubit")
        return make_stabilizer_code("three_qubit", {P("ZZI"), P("IZZ")}, {P("XXX")}, {P("ZZZ")});
    if (name == "five_qubit")
        return make_stabilizer_code("five_qubit",
                                    {P("XZZXI"), P("IXZZX"), P("XIXZZ"), P("ZXIXZ")},
                                    {P("XXXXX")}, {P("ZZZZZ")});
    if (name == "steane")
        return make_stabilizer_code("steane",
                                    {P("ZZZZIII"), P("ZZIIZZI"), P("ZIZIZIZ"), P("XXXXIII"),
                                     P("XXIIXXI"), P("XIXIXIX")},
                                    {P("XXXXXXX")}, {P("ZZZZZZZ")});
    throw ParseError("unknown builtin code \"" + name + "\"");
}

/// Toric code on an r x c grid (both even) with qubits at sites where i+j is
/// odd. X plaquettes sit at even/even sites, Z plaquettes at odd/odd sites,
/// each acting on its four grid neighbours with periodic boundaries. One X
/// and one Z stabilizer are dropped to leave an independent generating set.
struct ToricLayout {
    int rows = 0, cols = 0;
    std::map<std::pair<int, int>, int> qubit_at;  // (i, j) with i+j odd -> index

    int index(int i, int j) const {
        int ii = ((i % rows) + rows) % rows;
        int jj = ((j % cols) + cols) % cols;
        auto it = qubit_at.find({ii, jj});
        if (it == qubit_at.end()) throw DimensionError("toric: not a qubit site");
        return it->second;
    }
};

inline ToricLayout toric_layout(int r, int c) {
    if (r % 2 != 0 || c % 2 != 0) throw ParseError("toric: rows and cols must be even");
    if (r < 2 || c < 2 || (r < 4 && c < 4))
        throw ParseError("toric: lattice too small (need r >= 4 or c >= 4)");
    ToricLayout lay;
    lay.rows = r;
    lay.cols = c;
    int idx = 0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if ((i + j) % 2 == 1) lay.qubit_at[{i, j}] = idx++;
    return lay;
}

inline StabilizerCode toric(int r, int c) {
    ToricLayout lay = toric_layout(r, c);
    const int n = r * c / 2;
    auto plaquette = [&](int i, int j, int letter) {
        // Neighbours can coincide on a 2-wide torus; double action cancels.
        std::set<int> support;
        for (auto [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
            int q = lay.index(i + di, j + dj);
            if (!support.insert(q).second) support.erase(q);
        }
        std::vector<int> letters(n, kI);
        for (int q : support) letters[q] = letter;
        return PauliOperator::from_letters(letters);
    };
    std::vector<PauliOperator> gens;
    std::vector<PauliOperator> xs, zs;
    for (int i = 0; i < r; i += 2)
        for (int j = 0; j < c; j += 2) xs.push_back(plaquette(i, j, kX));
    for (int i = 1; i < r; i += 2)
        for (int j = 1; j < c; j += 2) zs.push_back(plaquette(i, j, kZ));
    xs.pop_back();
    zs.pop_back();
    gens.insert(gens.end(), xs.begin(), xs.end());
    gens.insert(gens.end(), zs.begin(), zs.end());

    auto string_op = [&](std::vector<std::pair<int, int>> sites, int letter) {
        std::vector<int> letters(n, kI);
        for (auto [i, j] : sites) letters[lay.index(i, j)] = letter;
        return PauliOperator::from_letters(letters);
    };
    std::vector<std::pair<int, int>> z1, z2, x1, x2;
    for (int j = 1; j < c; j += 2) z1.push_back({0, j});
    for (int i = 1; i < r; i += 2) z2.push_back({i, 0});
    for (int i = 0; i < r; i += 2) x1.push_back({i, 1});
    for (int j = 0; j < c; j += 2) x2.push_back({1, j});

    return make_stabilizer_code("toric_" + std::to_string(r) + "x" + std::to_string(c),
                                std::move(gens), {string_op(x1, kX), string_op(x2, kX)},
                                {string_op(z1, kZ), string_op(z2, kZ)});
}

inline std::uint64_t syndrome_bits(const StabilizerCode& code, const PauliOperator& p) {
    if (p.n() != code.n) throw DimensionError("syndrome: qubit count mismatch");
    if (code.n - code.k > 64) throw CapacityError("syndrome: more than 64 generators");
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < code.generators.size(); ++i)
        if (!commutes(p, code.generators[i])) s |= std::uint64_t(1) << i;
    return s;
}

/// Syndrome as a bit vector, bit i = 1 iff P anticommutes with generator i.
inline std::vector<int> syndrome(const StabilizerCode& code, const PauliOperator& p) {
    std::uint64_t s = syndrome_bits(code, p);
    std::vector<int> bits(code.n - code.k);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<int>((s >> i) & 1u);
    return bits;
}

// Product of the generators selected by mask, ascending index order. The
// generators commute exactly, so the order is immaterial.
inline PauliOperator stabilizer_element(const StabilizerCode& code, std::uint64_t mask) {
    PauliOperator p = PauliOperator::identity(code.n);
    for (std::size_t i = 0; i < code.generators.size(); ++i)
        if ((mask >> i) & 1u) p = multiply(p, code.generators[i]);
    return p;
}

// The full 2^(n-k)-element Pauli stabilizer group (one phased element per
// letter string), indexed by generator mask.
inline std::vector<PauliOperator> enumerate_stabilizer_group(const StabilizerCode& code,
                                                             int max_exponent = 20) {
    int m = code.n - code.k;
    if (m > max_exponent)
        throw CapacityError("enumerate_stabilizer_group: 2^" + std::to_string(m) +
                            " elements exceed the cap");
    std::vector<PauliOperator> group;
    group.reserve(std::size_t(1) << m);
    group.push_back(PauliOperator::identity(code.n));
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << m); ++mask) {
        int low = std::countr_zero(mask);
        group.push_back(multiply(code.generators[low], group[mask & (mask - 1)]));
    }
    return group;
}

// Canonical logical representative: prod_j Xbar_j^{a_j} * prod_j Zbar_j^{b_j}
// in ascending j order. Phases are fixed by this product order.
inline PauliOperator logical_coset_rep(const StabilizerCode& code, std::uint64_t a,
                                       std::uint64_t b) {
    PauliOperator p = PauliOperator::identity(code.n);
    for (int j = 0; j < code.k; ++j)
        if ((a >> j) & 1u) p = multiply(p, code.logical_x[j]);
    for (int j = 0; j < code.k; ++j)
        if ((b >> j) & 1u) p = multiply(p, code.logical_z[j]);
    return p;
}

struct LogicalDecomposition {
    bool ok = false;          // false: does not commute with the generators
    std::uint64_t a = 0;      // logical X exponents
    std::uint64_t b = 0;      // logical Z exponents
    std::vector<std::uint64_t> stab_mask;
    int phase_exponent = 0;   // P = i^gamma * Xbar^a Zbar^b * S(mask)
};

/// Exact decomposition of a Pauli that commutes with every generator into
/// i^gamma * (canonical logical rep) * (stabilizer element).
inline LogicalDecomposition decompose_logical(const StabilizerCode& code,
                                              const PauliOperator& p) {
    LogicalDecomposition out;
    for (const auto& g : code.generators)
        if (!commutes(p, g)) return out;
    for (int j = 0; j < code.k; ++j) {
        if (!commutes(p, code.logical_z[j])) out.a |= std::uint64_t(1) << j;
        if (!commutes(p, code.logical_x[j])) out.b |= std::uint64_t(1) << j;
    }
    PauliOperator rep = logical_coset_rep(code, out.a, out.b);
    PauliOperator residual = multiply(pauli_inverse(rep), p);
    detail::SymplecticBasis basis(code.generators);
    auto red = basis.reduce(residual);
    if (!red.in_span) return out;  // cannot happen for a valid code frame
    out.stab_mask = red.combo;
    PauliOperator elem = PauliOperator::identity(code.n);
    for (std::size_t i = 0; i < code.generators.size(); ++i)
        if ((red.combo[i / 64] >> (i % 64)) & 1u) elem = multiply(elem, code.generators[i]);
    PauliOperator recon = multiply(rep, elem);
    out.phase_exponent = ((p.phase() - recon.phase()) % 4 + 4) % 4;
    out.ok = true;
    return out;
}

/// Complete set of 2^(n-k) Pauli recovery maps, one per syndrome.
struct RecoverySet {
    StabilizerCode code;
    std::vector<PauliOperator> maps;  // indexed by syndrome bits (bit i = generator i)

    const PauliOperator& for_syndrome(std::uint64_t s) const { return maps.at(s); }
};

inline RecoverySet default_recovery_set(const StabilizerCode& code) {
    int m = code.n - code.k;
    if (m > 26) throw CapacityError("default_recovery_set: 2^(n-k) too large to enumerate");
    const std::size_t total = std::size_t(1) << m;
    std::vector<PauliOperator> maps(total, PauliOperator::identity(code.n));
    std::vector<char> seen(total, 0);
    std::size_t found = 0;
    for (int w = 0; w <= code.n && found < total; ++w) {
        for (const auto& p : paulis_of_weight(code.n, w)) {
            std::uint64_t s = syndrome_bits(code, p);
            if (!seen[s]) {
                seen[s] = 1;
                maps[s] = p;
                if (++found == total) break;
            }
        }
    }
    if (found < total)
        throw InvalidRecoverySetError("default_recovery_set: syndrome map is not surjective");
    RecoverySet rs;
    rs.code = code;
    rs.maps = std::move(maps);
    return rs;
}

inline RecoverySet custom_recovery_set(const StabilizerCode& code,
                                       const std::vector<PauliOperator>& maps) {
    int m = code.n - code.k;
    const std::size_t total = std::size_t(1) << m;
    if (maps.size() != total)
        throw InvalidRecoverySetError("custom_recovery_set: need exactly 2^(n-k) = " +
                                      std::to_string(total) + " maps, got " +
                                      std::to_string(maps.size()));
    std::vector<PauliOperator> by_syndrome(total, PauliOperator::identity(code.n));
    std::vector<int> owner(total, -1);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        std::uint64_t s = syndrome_bits(code, maps[i]);
        if (owner[s] >= 0)
            throw InvalidRecoverySetError(
                "custom_recovery_set: syndrome collision between " +
                maps[owner[s]].to_string() + " and " + maps[i].to_string());
        owner[s] = static_cast<int>(i);
        by_syndrome[s] = maps[i];
    }
    RecoverySet rs;
    rs.code = code;
    rs.maps = std::move(by_syndrome);
    return rs;
}

// --- dense helpers -----------------------------------------------------

// P|r> = i^w (-1)^(z.r) |r xor x>; applying a Pauli to a vector or to the
// columns of a matrix costs O(2^n) per column.
inline Vector pauli_apply_vector(const PauliOperator& p, const Vector& v) {
    const int n = p.n();
    const std::size_t dim = std::size_t(1) << n;
    if (v.size() != static_cast<Eigen::Index>(dim))
        throw DimensionError("pauli_apply_vector: dimension mismatch");
    std::size_t xmask = 0, zmask = 0;
    for (int q = 0; q < n; ++q) {
        if (p.x_bit(q)) xmask |= std::size_t(1) << (n - 1 - q);
        if (p.z_bit(q)) zmask |= std::size_t(1) << (n - 1 - q);
    }
    static const cxd ip[4] = {cxd(1, 0), cxd(0, 1), cxd(-1, 0), cxd(0, -1)};
    cxd global = ip[(p.phase() + p.y_count()) % 4];
    Vector out(v.size());
    for (std::size_t r = 0; r < dim; ++r) {
        int zpar = std::popcount(r & zmask) & 1;
        out(static_cast<Eigen::Index>(r ^ xmask)) = global * (zpar ? -1.0 : 1.0) * v(r);
    }
    return out;
}

inline Matrix pauli_apply_left(const PauliOperator& p, const Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = pauli_apply_vector(p, m.col(c));
    return out;
}

/// Encoding isometry U = sum_z |z-bar><z|, 2^n x 2^k, built from the
/// projector product prod_j (I + (-1)^{z_j} Zbar_j)/2 * prod_i (I + G_i)/2.
/// The global phase of each column is fixed so that its first nonzero
/// amplitude is real and positive.
struct EncodingIsometry {
    Matrix matrix;
    int n = 0, k = 0;
};

inline EncodingIsometry encoding_isometry(const StabilizerCode& code) {
    require_dense(code.n, "encoding_isometry");
    const std::size_t dim = std::size_t(1) << code.n;
    const std::size_t cols = std::size_t(1) << code.k;
    EncodingIsometry iso;
    iso.n = code.n;
    iso.k = code.k;
    iso.matrix = Matrix::Zero(dim, cols);
    for (std::size_t z = 0; z < cols; ++z) {
        bool built = false;
        for (std::size_t seed = 0; seed < dim && !built; ++seed) {
            Vector v = Vector::Zero(dim);
            v(static_cast<Eigen::Index>(seed)) = 1.0;
            for (const auto& g : code.generators) v = 0.5 * (v + pauli_apply_vector(g, v));
            for (int j = 0; j < code.k; ++j) {
                double sign = ((z >> (code.k - 1 - j)) & 1u) ? -1.0 : 1.0;
                v = 0.5 * (v + sign * pauli_apply_vector(code.logical_z[j], v));
            }
            double norm = v.norm();
            if (norm < 1e-6) continue;
            v /= norm;
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                if (std::abs(v(i)) > 1e-10) {
                    v *= std::conj(v(i)) / std::abs(v(i));
                    break;
                }
            }
            iso.matrix.col(static_cast<Eigen::Index>(z)) = v;
            built = true;
        }
        if (!built) throw CapacityError("encoding_isometry: projector produced no basis vector");
    }
    return iso;
}

}  // namespace qecsym
