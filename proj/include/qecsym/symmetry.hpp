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

#include <set>
#include <string>
#include <vector>

#include "qecsym/channels.hpp"
#include "qecsym/codes.hpp"
#include "qecsym/errors.hpp"
#include "qecsym/symmetry_op.hpp"

namespace qecsym {

struct MembershipVerdict {
    enum class Kind { stabilizer, logical, neither };
    Kind kind = Kind::neither;
    LogicalChannel logical_action;  // identity PTM for stabilizer verdicts
    std::string detail;             // reason when kind == neither
};

// Lift of a k-qubit Pauli through per-qubit X/Z representatives. Exact
// homomorphism: p = i^w prod_q X^{x_q} Z^{z_q} maps to
// i^w prod_q xrep_q^{x_q} zrep_q^{z_q} (ascending q, X before Z within q).
inline PauliOperator lift_pauli(const PauliOperator& p, const std::vector<PauliOperator>& xrep,
                                const std::vector<PauliOperator>& zrep) {
    const int big_n = xrep.front().n();
    PauliOperator out = PauliOperator::identity(big_n);
    for (int q = 0; q < p.n(); ++q) {
        if (p.x_bit(q)) out = multiply(out, xrep[q]);
        if (p.z_bit(q)) out = multiply(out, zrep[q]);
    }
    return out.times_i(p.phase() + p.y_count());
}

namespace detail {

// PTM of conjugation by the k-qubit Pauli with the given X/Z exponent masks:
// diagonal +-1 depending on commutation.
inline RealMatrix pauli_conj_ptm(int k, std::uint64_t a, std::uint64_t b) {
    std::vector<int> letters(k, kI);
    for (int j = 0; j < k; ++j) {
        bool x = (a >> j) & 1u, z = (b >> j) & 1u;
        letters[j] = x ? (z ? kY : kX) : (z ? kZ : kI);
    }
    PauliOperator l = PauliOperator::from_letters(letters);
    const Eigen::Index dim = Eigen::Index(1) << (2 * k);
    RealMatrix ptm = RealMatrix::Zero(dim, dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        std::vector<int> ls(k);
        for (int q = 0; q < k; ++q) ls[q] = static_cast<int>((idx >> (2 * (k - 1 - q))) & 3u);
        PauliOperator sigma = PauliOperator::from_letters(ls);
        ptm(idx, idx) = commutes(sigma, l) ? 1.0 : -1.0;
    }
    return ptm;
}

}  // namespace detail

/// Decides whether a symmetry operation is a stabilizer symmetry, a logical
/// symmetry (with its induced logical action), or neither. Clifford
/// transversal parts are decided exactly at the Pauli level; anything else
/// falls back to the dense isometry criterion A U == U A-bar.
inline MembershipVerdict check_membership(const StabilizerCode& code, const SymmetryOp& op) {
    if (op.n() != code.n) throw DimensionError("check_membership: qubit count mismatch");
    MembershipVerdict verdict;

    if (op.is_clifford()) {
        for (const auto& g : code.generators) {
            PauliOperator img = conjugate_by_symmetry(g, op);
            LogicalDecomposition d = decompose_logical(code, img);
            if (!d.ok || d.a != 0 || d.b != 0 || d.phase_exponent != 0) {
                verdict.detail = "image of generator " + g.to_string() +
                                 " is not a stabilizer element";
                return verdict;
            }
        }
        // Build the induced action on the logical Pauli basis.
        const Eigen::Index dim = Eigen::Index(1) << (2 * code.k);
        RealMatrix action = RealMatrix::Zero(dim, dim);
        bool is_stabilizer = true;
        for (Eigen::Index b = 0; b < dim; ++b) {
            std::vector<int> ls(code.k);
            for (int q = 0; q < code.k; ++q)
                ls[q] = static_cast<int>((b >> (2 * (code.k - 1 - q))) & 3u);
            PauliOperator sigma = PauliOperator::from_letters(ls);
            PauliOperator lifted = lift_pauli(sigma, code.logical_x, code.logical_z);
            PauliOperator img = conjugate_by_symmetry(lifted, op);
            LogicalDecomposition d = decompose_logical(code, img);
            if (!d.ok) {
                verdict.detail = "image of logical " + sigma.to_string() +
                                 " leaves the logical group";
                return verdict;
            }
            // Reassemble the image as a k-qubit Pauli with exact phase.
            PauliOperator small = PauliOperator::identity(code.k);
            for (int j = 0; j < code.k; ++j)
                if ((d.a >> j) & 1u) small = multiply(small, PauliOperator::single(code.k, j, kX));
            for (int j = 0; j < code.k; ++j)
                if ((d.b >> j) & 1u) small = multiply(small, PauliOperator::single(code.k, j, kZ));
            small = small.times_i(d.phase_exponent);
            int ph = small.phase();
            if (ph != 0 && ph != 2) {
                verdict.detail = "non-Hermitian logical image";  // cannot happen for unitary ops
                return verdict;
            }
            std::size_t row = 0;
            for (int q = 0; q < code.k; ++q) row = row * 4 + static_cast<std::size_t>(small.letter(q));
            action(static_cast<Eigen::Index>(row), b) = (ph == 2) ? -1.0 : 1.0;
            if (b > 0 && (row != static_cast<std::size_t>(b) || ph != 0)) is_stabilizer = false;
        }
        verdict.kind = is_stabilizer ? MembershipVerdict::Kind::stabilizer
                                     : MembershipVerdict::Kind::logical;
        verdict.logical_action = LogicalChannel{action, code.k};
        return verdict;
    }

    if (code.n > dense_qubit_limit())
        throw UnsupportedSymmetryError(
            "check_membership: non-Clifford transversal part above the dense limit is undecidable");

    EncodingIsometry iso = encoding_isometry(code);
    Matrix a = op.dense();
    Matrix au = a * iso.matrix;
    Matrix proj = iso.matrix * iso.matrix.adjoint();
    double leak = (au - proj * au).norm() / au.norm();
    if (leak > 1e-10) {
        verdict.detail = "operation does not preserve the code space";
        return verdict;
    }
    Matrix abar = iso.matrix.adjoint() * au;
    const Eigen::Index dk = Eigen::Index(1) << code.k;
    if ((au - iso.matrix * abar).norm() > 1e-10 * au.norm()) {
        verdict.detail = "A U != U A-bar";
        return verdict;
    }
    RealMatrix ptm(dk * dk, dk * dk);
    for (Eigen::Index b = 0; b < dk * dk; ++b) {
        Matrix img = abar * pauli_matrix_from_index(static_cast<std::size_t>(b), code.k) *
                     abar.adjoint();
        for (Eigen::Index aa = 0; aa < dk * dk; ++aa)
            ptm(aa, b) =
                (pauli_matrix_from_index(static_cast<std::size_t>(aa), code.k) * img).trace().real() /
                static_cast<double>(dk);
    }
    verdict.kind = (std::abs(std::abs(abar.trace()) - static_cast<double>(dk)) < 1e-8)
                       ? MembershipVerdict::Kind::stabilizer
                       : MembershipVerdict::Kind::logical;
    verdict.logical_action = LogicalChannel{ptm, code.k};
    return verdict;
}

inline LogicalChannel induced_logical_action(const StabilizerCode& code, const SymmetryOp& op) {
    MembershipVerdict v = check_membership(code, op);
    if (v.kind == MembershipVerdict::Kind::neither)
        throw SymmetryRejectedError("induced_logical_action: " + op.name() +
                                    " is not a symmetry of " + code.name + " (" + v.detail + ")");
    return v.logical_action;
}

namespace detail {

inline bool superops_commute(const Matrix& a, const Matrix& b, double tol = 1e-12) {
    double scale = std::max(a.norm() * b.norm(), 1.0);
    return (a * b - b * a).norm() <= tol * scale;
}

inline bool channels_equal(const QuantumChannel& a, const QuantumChannel& b, double tol = 1e-12) {
    return (a.superop() - b.superop()).norm() <= tol * std::max(a.superop().norm(), 1.0);
}

}  // namespace detail

/// Structural commutation check between a symmetry operation and a noise
/// model (or noise family). Permutations always commute with IID noise;
/// every transversal unitary commutes with depolarizing noise; tensor models
/// require the permutation to map each factor to an equal factor. A "false"
/// verdict is definitive only up to the numerical tolerance.
inline bool commutes_with_noise(const SymmetryOp& op, const NoiseModel& noise,
                                double tol = 1e-12) {
    if (op.n() != noise.n) throw DimensionError("commutes_with_noise: qubit count mismatch");
    switch (noise.kind) {
        case NoiseModel::Kind::depolarizing:
            return true;  // permutations and unital single-qubit conjugations both commute
        case NoiseModel::Kind::iid: {
            if (!noise.factor.has_value()) return op.is_pure_permutation();
            if (noise.factor->qubits() != 1) {
                std::vector<QuantumChannel> fs(static_cast<std::size_t>(op.n()) /
                                                   noise.factor->qubits(),
                                               *noise.factor);
                return commutes_with_noise(op, NoiseModel::tensor(fs), tol);
            }
            Matrix fsuper = noise.factor->superop();
            for (const auto& g : op.transversal()) {
                Matrix gs = superop_from_kraus({Matrix(g.matrix())});
                if (!detail::superops_commute(gs, fsuper, tol)) return false;
            }
            return true;
        }
        case NoiseModel::Kind::tensor: {
            for (const auto& f : noise.factors)
                if (f.qubits() != 1)
                    throw UnsupportedSymmetryError(
                        "commutes_with_noise: structural rule needs single-qubit tensor factors");
            std::vector<int> inv(op.n());
            for (int q = 0; q < op.n(); ++q) inv[op.permutation()[q]] = q;
            for (int q = 0; q < op.n(); ++q) {
                int src = inv[q];
                Matrix lhs = superop_from_kraus({Matrix(op.transversal()[src].matrix())}) *
                             noise.factors[src].superop();
                Matrix rhs = noise.factors[q].superop() *
                             superop_from_kraus({Matrix(op.transversal()[src].matrix())});
                if ((lhs - rhs).norm() > tol * std::max(lhs.norm(), 1.0)) return false;
            }
            return true;
        }
        case NoiseModel::Kind::kraus: {
            if (noise.n > dense_qubit_limit() || noise.n > 6)
                throw UnsupportedSymmetryError(
                    "commutes_with_noise: general Kraus noise above the dense probe limit");
            Matrix a = op.dense();
            Rng rng(0x9ec5u);
            for (int probe = 0; probe < 6; ++probe) {
                Matrix x = random_ginibre(a.rows(), a.cols(), rng);
                x = Matrix(0.5 * (x + x.adjoint()));
                Matrix lhs = a * apply_noise(noise, x) * a.adjoint();
                Matrix rhs = apply_noise(noise, a * x * a.adjoint());
                if ((lhs - rhs).norm() > 1e-10 * std::max(lhs.norm(), 1.0)) return false;
            }
            return true;
        }
    }
    return false;
}

// --- builtin symmetry lists --------------------------------------------

inline std::vector<SymmetryOp> toric_symmetries(int r, int c) {
    ToricLayout lay = toric_layout(r, c);
    const int n = r * c / 2;
    auto perm_from_map = [&](auto&& f, const std::string& name) {
        std::vector<int> perm(n);
        for (const auto& [site, q] : lay.qubit_at) {
            auto [i, j] = f(site.first, site.second);
            perm[q] = lay.index(i, j);
        }
        return SymmetryOp::pure_permutation(std::move(perm), name);
    };
    std::vector<SymmetryOp> ops;
    ops.push_back(perm_from_map([](int i, int j) { return std::pair{i + 2, j}; }, "twist"));
    ops.push_back(perm_from_map([](int i, int j) { return std::pair{i, j + 2}; }, "rotation"));
    ops.push_back(
        perm_from_map([](int i, int j) { return std::pair{-i, j}; }, "vertical_reflection"));
    ops.push_back(
        perm_from_map([](int i, int j) { return std::pair{i, -j}; }, "horizontal_reflection"));
    {
        std::vector<int> perm(n);
        for (const auto& [site, q] : lay.qubit_at)
            perm[q] = lay.index(site.first + 1, site.second + 1);
        ops.emplace_back(std::move(perm),
                         std::vector<SingleQubitGate>(n, SingleQubitGate::named("H")), "J");
    }
    if (r == c)
        ops.push_back(
            perm_from_map([](int i, int j) { return std::pair{j, i}; }, "diagonal_reflection"));
    return ops;
}

/// The symmetry generators the analysis of each builtin code rests on.
inline std::vector<SymmetryOp> builtin_symmetries(const StabilizerCode& code) {
    auto cyc = [&](const std::string& cycles, const std::string& name) {
        return SymmetryOp::pure_permutation(parse_permutation_cycles(cycles, code.n), name);
    };
    if (code.name == "three_qubit") return {cyc("(0 1 2)", "cycle")};
    if (code.name == "five_qubit")
        return {cyc("(0 1 2 3 4)", "cycle"), cyc("(0 4)(1 3)", "reflection"),
                SymmetryOp::transversal_uniform(SingleQubitGate::named("Q"), 5, "Q5")};
    if (code.name == "steane")
        return {cyc("(3 4)(5 6)", "perm_a"), cyc("(0 3 1)(2 4 5)", "perm_b"),
                SymmetryOp::transversal_uniform(SingleQubitGate::named("Q"), 7, "Q7"),
                SymmetryOp::transversal_uniform(SingleQubitGate::named("H"), 7, "H7")};
    if (code.name.rfind("toric_", 0) == 0) {
        std::size_t sep = code.name.find('x');
        int r = std::stoi(code.name.substr(6, sep - 6));
        int c = std::stoi(code.name.substr(sep + 1));
        return toric_symmetries(r, c);
    }
    throw ParseError("builtin_symmetries: no builtin list for code \"" + code.name + "\"");
}

/// Enumerates the permutation group generated by the permutation parts and
/// reports the largest k <= max_k such that the group is k-transitive.
inline int transitivity_level(const std::vector<SymmetryOp>& ops, int n, int max_k = 2,
                              std::size_t group_cap = 200000) {
    std::set<std::vector<int>> group;
    std::vector<int> id(n);
    for (int q = 0; q < n; ++q) id[q] = q;
    std::vector<std::vector<int>> gens;
    for (const auto& op : ops)
        if (op.is_pure_permutation()) gens.push_back(op.permutation());
    std::vector<std::vector<int>> frontier{id};
    group.insert(id);
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& p : frontier)
            for (const auto& g : gens) {
                std::vector<int> comp(n);
                for (int q = 0; q < n; ++q) comp[q] = g[p[q]];
                if (group.insert(comp).second) next.push_back(std::move(comp));
                if (group.size() > group_cap)
                    throw CapacityError("transitivity_level: permutation group too large");
            }
        frontier = std::move(next);
    }
    int level = 0;
    for (int k = 1; k <= max_k; ++k) {
        // Orbit of the ordered tuple (0, 1, ..., k-1) must cover all tuples.
        std::set<std::vector<int>> orbit;
        std::size_t want = 1;
        for (int i = 0; i < k; ++i) want *= static_cast<std::size_t>(n - i);
        for (const auto& p : group) {
            std::vector<int> tup(k);
            for (int i = 0; i < k; ++i) tup[i] = p[i];
            orbit.insert(tup);
        }
        if (orbit.size() == want)
            level = k;
        else
            break;
    }
    return level;
}

}  // namespace qecsym
