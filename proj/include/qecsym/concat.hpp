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
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qecsym/channels.hpp"
#include "qecsym/codes.hpp"
#include "qecsym/degeneracy.hpp"
#include "qecsym/errors.hpp"
#include "qecsym/symmetry.hpp"

namespace qecsym {

/// Two-level concatenated encoding W = V^(x blocks) U with outer code U on
/// `blocks` qubits and inner code V (one logical qubit) per block.
struct ConcatCode {
    StabilizerCode outer;
    StabilizerCode inner;
    StabilizerCode flat;  // the concatenated code on outer.n * inner.n qubits
    int blocks = 0;

    int total_qubits() const { return blocks * inner.n; }
};

// Embeds an inner-code Pauli at the given block of the flat code.
inline PauliOperator embed_at_block(const PauliOperator& p, int block, int inner_n, int total) {
    std::vector<int> letters(total, kI);
    for (int q = 0; q < p.n(); ++q) letters[block * inner_n + q] = p.letter(q);
    return PauliOperator::from_letters(letters, p.phase());
}

/// Physical implementation of an outer-code Pauli through the inner
/// encoding: each outer letter becomes the corresponding inner logical.
inline PauliOperator lift_through_inner(const ConcatCode& cc, const PauliOperator& outer_p) {
    std::vector<PauliOperator> xrep, zrep;
    for (int b = 0; b < cc.blocks; ++b) {
        xrep.push_back(embed_at_block(cc.inner.logical_x[0], b, cc.inner.n, cc.total_qubits()));
        zrep.push_back(embed_at_block(cc.inner.logical_z[0], b, cc.inner.n, cc.total_qubits()));
    }
    return lift_pauli(outer_p, xrep, zrep);
}

inline ConcatCode make_concat(const StabilizerCode& outer, const StabilizerCode& inner) {
    if (inner.k != 1) throw ParseError("make_concat: inner code must encode one logical qubit");
    ConcatCode cc;
    cc.outer = outer;
    cc.inner = inner;
    cc.blocks = outer.n;
    const int total = cc.total_qubits();
    std::vector<PauliOperator> gens;
    for (int b = 0; b < cc.blocks; ++b)
        for (const auto& g : inner.generators)
            gens.push_back(embed_at_block(g, b, inner.n, total));
    for (const auto& g : outer.generators) gens.push_back(lift_through_inner(cc, g));
    std::vector<PauliOperator> lx, lz;
    for (const auto& l : outer.logical_x) lx.push_back(lift_through_inner(cc, l));
    for (const auto& l : outer.logical_z) lz.push_back(lift_through_inner(cc, l));
    cc.flat = make_stabilizer_code(outer.name + "." + inner.name, std::move(gens), std::move(lx),
                                   std::move(lz));
    return cc;
}

/// The Hadamard-rotated repetition code V = U H (logical X = ZZZ, logical
/// Z = XXX); concatenating it under the plain repetition code gives the
/// nine-qubit Shor code.
inline StabilizerCode shor_inner_code() {
    return make_stabilizer_code("three_qubit_h", {parse_pauli("ZZI"), parse_pauli("IZZ")},
                                {parse_pauli("ZZZ")}, {parse_pauli("XXX")});
}

inline ConcatCode shor_code() { return make_concat(builtin("three_qubit"), shor_inner_code()); }

/// Dense W = (V (x) ... (x) V) * U; the isometry the recursion is checked
/// against.
inline EncodingIsometry concat_dense_isometry(const ConcatCode& cc) {
    require_dense(cc.total_qubits(), "concat_dense_isometry");
    Matrix v = encoding_isometry(cc.inner).matrix;
    Matrix vn = Matrix::Identity(1, 1);
    for (int b = 0; b < cc.blocks; ++b) vn = kron(vn, v);
    Matrix u = encoding_isometry(cc.outer).matrix;
    EncodingIsometry iso;
    iso.matrix = vn * u;
    iso.n = cc.total_qubits();
    iso.k = cc.outer.k;
    return iso;
}

/// Recovery map (tensor of inner recoveries F_j) * (lifted outer recovery G).
struct ConcatRecovery {
    std::vector<PauliOperator> inner_maps;  // one per block, inner.n qubits each
    PauliOperator outer_map = PauliOperator(1);
};

inline PauliOperator flat_recovery(const ConcatCode& cc, const ConcatRecovery& rec) {
    if (static_cast<int>(rec.inner_maps.size()) != cc.blocks)
        throw DimensionError("flat_recovery: need one inner map per block");
    PauliOperator r = lift_through_inner(cc, rec.outer_map);
    for (int b = cc.blocks - 1; b >= 0; --b)
        r = multiply(embed_at_block(rec.inner_maps[b], b, cc.inner.n, cc.total_qubits()), r);
    return r;
}

/// Effective logical channel by recursion: the inner conditional channels
/// become single-qubit effective noise factors for the outer code. The
/// (blocks * inner.n)-qubit space is never materialized.
inline LogicalChannel effective_logical_channel(const ConcatCode& cc, const ConcatRecovery& rec,
                                                const NoiseModel& block_noise) {
    if (block_noise.n != cc.inner.n)
        throw DimensionError("effective_logical_channel: block noise must act on one block");
    if (static_cast<int>(rec.inner_maps.size()) != cc.blocks)
        throw DimensionError("effective_logical_channel: need one inner map per block");
    EncodingIsometry inner_iso = encoding_isometry(cc.inner);
    std::map<std::string, RealMatrix> cache;
    std::vector<QuantumChannel> factors;
    for (const auto& f : rec.inner_maps) {
        std::string key = f.to_string();
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, conditional_logical_channel(inner_iso, f, block_noise).ptm)
                     .first;
        factors.push_back(channel_from_ptm(it->second, 1));
    }
    return conditional_logical_channel(cc.outer, rec.outer_map, NoiseModel::tensor(factors));
}

/// Upper bound on the level-2 class count: inner_classes^blocks * outer
/// recovery count.
inline std::uint64_t level2_class_count(int inner_classes, int blocks,
                                        int outer_recovery_count) {
    if (inner_classes < 1 || blocks < 1 || outer_recovery_count < 1)
        throw ParseError("level2_class_count: arguments must be positive");
    std::uint64_t result = outer_recovery_count;
    for (int i = 0; i < blocks; ++i) {
        if (result > UINT64_MAX / static_cast<std::uint64_t>(inner_classes))
            throw CapacityError("level2_class_count: overflow");
        result *= static_cast<std::uint64_t>(inner_classes);
    }
    return result;
}

/// A (noise, recovery) pair at the outer level: inner degeneracy class label
/// per block plus the outer recovery map.
struct NoiseRecoveryPair {
    std::vector<int> labels;
    PauliOperator outer_map = PauliOperator(1);
};

struct ConcatReduction {
    DegeneracyPartition inner_partition;
    std::vector<std::vector<int>> label_reps;  // canonical label vectors
    std::vector<NoiseRecoveryPair> pairs;      // symmetry-reduced pair classes
    std::uint64_t raw = 0;                // |R_V|^blocks * |R_U|
    std::uint64_t cached_bound = 0;       // inner_classes^blocks * |R_U|
    std::uint64_t reflection_reduced = 0; // label reps x common G classes
};

namespace detail {

inline std::vector<std::vector<int>> permutation_group(const std::vector<SymmetryOp>& ops,
                                                       int n, std::size_t cap = 100000) {
    std::set<std::vector<int>> group;
    std::vector<int> id(n);
    for (int q = 0; q < n; ++q) id[q] = q;
    group.insert(id);
    std::vector<std::vector<int>> gens;
    for (const auto& op : ops)
        if (op.is_pure_permutation()) gens.push_back(op.permutation());
    std::vector<std::vector<int>> frontier{id};
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& p : frontier)
            for (const auto& g : gens) {
                std::vector<int> comp(n);
                for (int q = 0; q < n; ++q) comp[q] = g[p[q]];
                if (group.insert(comp).second) next.push_back(std::move(comp));
                if (group.size() > cap)
                    throw CapacityError("permutation_group: group too large");
            }
        frontier = std::move(next);
    }
    return {group.begin(), group.end()};
}

inline std::vector<int> apply_perm_to_labels(const std::vector<int>& labels,
                                             const std::vector<int>& perm) {
    std::vector<int> out(labels.size());
    for (std::size_t q = 0; q < labels.size(); ++q) out[perm[q]] = labels[q];
    return out;
}

}  // namespace detail

/// Reduces the (inner-class labels, outer recovery) pairs by the outer
/// symmetry group: label vectors are canonicalized under simultaneous
/// permutation of labels and recovery (representatives chosen invariant
/// under as many listed generators as possible), then the outer recovery is
/// reduced by the subgroup fixing the label vector plus any transversal
/// outer symmetry that commutes with every effective inner channel (checked
/// numerically against `probe_noise`).
inline ConcatReduction symmetry_reduced_pairs(const ConcatCode& cc, const NoiseModel& family,
                                              const NoiseModel& probe_noise) {
    if (family.n != cc.inner.n || probe_noise.n != cc.inner.n)
        throw DimensionError("symmetry_reduced_pairs: family and probe act on one block");
    if (!probe_noise.is_concrete())
        throw ParseError("symmetry_reduced_pairs: probe noise must be concrete");
    ConcatReduction red;
    RecoverySet inner_rs = default_recovery_set(cc.inner);
    red.inner_partition = partition(cc.inner, inner_rs, builtin_symmetries(cc.inner), family,
                                    DegeneracyMode::logical);
    const int num_classes = red.inner_partition.num_classes();

    red.raw = level2_class_count(static_cast<int>(inner_rs.maps.size()), cc.blocks,
                                 static_cast<int>(std::uint64_t(1) << (cc.outer.n - cc.outer.k)));
    red.cached_bound = level2_class_count(num_classes, cc.blocks,
                                          static_cast<int>(std::uint64_t(1)
                                                           << (cc.outer.n - cc.outer.k)));

    // Effective inner channels, one per class, for transversal admissibility.
    EncodingIsometry inner_iso = encoding_isometry(cc.inner);
    std::vector<RealMatrix> class_ptms;
    for (const auto& cls : red.inner_partition.classes)
        class_ptms.push_back(
            conditional_logical_channel(inner_iso, cls.representative, probe_noise).ptm);

    auto outer_syms = builtin_symmetries(cc.outer);
    auto group = detail::permutation_group(outer_syms, cc.outer.n);
    std::vector<std::vector<int>> listed_gens;
    for (const auto& op : outer_syms)
        if (op.is_pure_permutation()) listed_gens.push_back(op.permutation());

    std::vector<SymmetryOp> transversal_ops;
    for (const auto& op : outer_syms) {
        if (op.is_pure_permutation() || !op.is_clifford()) continue;
        if (check_membership(cc.outer, op).kind == MembershipVerdict::Kind::neither) continue;
        bool commutes_all = true;
        for (const auto& ptm : class_ptms) {
            Matrix factor_super = superop_from_ptm(ptm, 1);
            for (const auto& g : op.transversal()) {
                Matrix gs = superop_from_kraus({Matrix(g.matrix())});
                if ((gs * factor_super - factor_super * gs).norm() >
                    1e-9 * std::max(factor_super.norm(), 1.0)) {
                    commutes_all = false;
                    break;
                }
            }
            if (!commutes_all) break;
        }
        if (commutes_all) transversal_ops.push_back(op);
    }

    // Canonical label vectors: maximally generator-invariant, then lex-min.
    auto canon_key = [&](const std::vector<int>& v) {
        int fixed = 0;
        for (const auto& g : listed_gens)
            if (detail::apply_perm_to_labels(v, g) == v) ++fixed;
        return std::pair<int, std::vector<int>>(-fixed, v);
    };
    std::set<std::vector<int>> seen_reps;
    std::vector<std::vector<int>> all_vectors;
    {
        std::uint64_t count = 1;
        for (int b = 0; b < cc.blocks; ++b) {
            count *= static_cast<std::uint64_t>(num_classes);
            if (count > 2000000) throw CapacityError("symmetry_reduced_pairs: label space");
        }
        std::vector<int> vec(cc.blocks, 0);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint64_t rest = i;
            for (int b = 0; b < cc.blocks; ++b) {
                vec[b] = static_cast<int>(rest % num_classes);
                rest /= num_classes;
            }
            all_vectors.push_back(vec);
        }
    }
    for (const auto& vec : all_vectors) {
        std::vector<int> best = vec;
        auto best_key = canon_key(vec);
        for (const auto& g : group) {
            std::vector<int> img = detail::apply_perm_to_labels(vec, g);
            auto key = canon_key(img);
            if (key < best_key) {
                best_key = key;
                best = img;
            }
        }
        seen_reps.insert(best);
    }
    red.label_reps.assign(seen_reps.begin(), seen_reps.end());
    std::sort(red.label_reps.begin(), red.label_reps.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  int wa = 0, wb = 0;
                  for (int v : a) wa += (v != 0);
                  for (int v : b) wb += (v != 0);
                  if (wa != wb) return wa < wb;
                  return a < b;
              });

    RecoverySet outer_rs = default_recovery_set(cc.outer);

    auto g_classes_under = [&](const std::vector<std::vector<int>>& perms) {
        // Orbit reduction of the outer recovery set under the given
        // permutations (conjugation) plus admissible transversal symmetries.
        std::map<std::string, int> index_of;
        for (std::size_t i = 0; i < outer_rs.maps.size(); ++i)
            index_of[outer_rs.maps[i].to_string()] = static_cast<int>(i);
        std::vector<int> cls(outer_rs.maps.size(), -1);
        std::vector<PauliOperator> reps;
        for (std::size_t i = 0; i < outer_rs.maps.size(); ++i) {
            if (cls[i] >= 0) continue;
            int id = static_cast<int>(reps.size());
            std::vector<std::size_t> stack{i};
            cls[i] = id;
            PauliOperator best = outer_rs.maps[i];
            while (!stack.empty()) {
                std::size_t cur = stack.back();
                stack.pop_back();
                if (pauli_less(outer_rs.maps[cur], best)) best = outer_rs.maps[cur];
                auto visit = [&](const PauliOperator& img) {
                    // Map back into the recovery set via its syndrome.
                    std::uint64_t s = syndrome_bits(cc.outer, img);
                    auto it = index_of.find(outer_rs.for_syndrome(s).to_string());
                    if (it == index_of.end()) return;
                    std::size_t j = static_cast<std::size_t>(it->second);
                    if (cls[j] < 0) {
                        cls[j] = id;
                        stack.push_back(j);
                    }
                };
                for (const auto& perm : perms) {
                    SymmetryOp op = SymmetryOp::pure_permutation(perm, "g");
                    visit(conjugate_by_symmetry(outer_rs.maps[cur], op));
                }
                for (const auto& t : transversal_ops) {
                    visit(conjugate_by_symmetry(outer_rs.maps[cur], t));
                    visit(conjugate_by_symmetry(outer_rs.maps[cur], t.inverse()));
                }
            }
            reps.push_back(best);
        }
        std::sort(reps.begin(), reps.end(), pauli_less);
        return reps;
    };

    // Stage count with only the common subgroup (the generators fixing every
    // chosen representative).
    {
        std::vector<std::vector<int>> common;
        for (const auto& g : group) {
            bool fixes_all = true;
            for (const auto& rep : red.label_reps)
                if (detail::apply_perm_to_labels(rep, g) != rep) {
                    fixes_all = false;
                    break;
                }
            if (fixes_all) common.push_back(g);
        }
        red.reflection_reduced =
            red.label_reps.size() * g_classes_under(common).size();
    }

    for (const auto& rep : red.label_reps) {
        std::vector<std::vector<int>> fixing;
        for (const auto& g : group)
            if (detail::apply_perm_to_labels(rep, g) == rep) fixing.push_back(g);
        for (const auto& g_rep : g_classes_under(fixing)) {
            NoiseRecoveryPair pair;
            pair.labels = rep;
            pair.outer_map = g_rep;
            red.pairs.push_back(std::move(pair));
        }
    }
    return red;
}

struct MergeRelation {
    int pair_a = 0, pair_b = 0;  // indices into ConcatReduction::pairs
    double scalar = 0.0;
    double residual = 0.0;
};

struct ConcatMergeReport {
    int before = 0;
    int after = 0;
    std::vector<MergeRelation> relations;       // all proportional pairs found
    std::vector<RealMatrix> pair_ptms;
};

/// Computes the effective logical channel of one representative per pair
/// class and merges classes whose channels are proportional within the
/// tolerance.
inline ConcatMergeReport numerical_class_merge(const ConcatCode& cc, const ConcatReduction& red,
                                               const NoiseModel& block_noise, double tol) {
    if (!block_noise.is_concrete())
        throw ParseError("numerical_class_merge: need concrete block noise");
    ConcatMergeReport report;
    report.before = static_cast<int>(red.pairs.size());

    EncodingIsometry inner_iso = encoding_isometry(cc.inner);
    std::vector<RealMatrix> class_ptms;
    for (const auto& cls : red.inner_partition.classes)
        class_ptms.push_back(
            conditional_logical_channel(inner_iso, cls.representative, block_noise).ptm);

    for (const auto& pair : red.pairs) {
        std::vector<QuantumChannel> factors;
        for (int label : pair.labels) factors.push_back(channel_from_ptm(class_ptms[label], 1));
        report.pair_ptms.push_back(conditional_logical_channel(cc.outer, pair.outer_map,
                                                               NoiseModel::tensor(factors))
                                       .ptm);
    }

    std::vector<int> parent(red.pairs.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (std::size_t a = 0; a < red.pairs.size(); ++a)
        for (std::size_t b = a + 1; b < red.pairs.size(); ++b) {
            MergeRelation rel;
            rel.pair_a = static_cast<int>(a);
            rel.pair_b = static_cast<int>(b);
            if (proportional_ptm(report.pair_ptms[a], report.pair_ptms[b], tol, &rel.scalar,
                                 &rel.residual)) {
                report.relations.push_back(rel);
                parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
            }
        }
    std::set<int> roots;
    for (std::size_t i = 0; i < parent.size(); ++i) roots.insert(find(static_cast<int>(i)));
    report.after = static_cast<int>(roots.size());
    return report;
}

/// Weight-two degeneracy analysis of the Shor code under IID noise: inner
/// and outer permutation lifts plus weight-bounded stabilizer
/// multiplication. Targets include the identity.
inline DegeneracyPartition shor_weight2_classes() {
    ConcatCode cc = shor_code();
    std::vector<SymmetryOp> syms;
    const int n = cc.total_qubits();
    for (int b = 0; b < cc.blocks; ++b) {
        std::string base = "block" + std::to_string(b);
        std::vector<int> cyc(n), swp(n);
        for (int q = 0; q < n; ++q) cyc[q] = swp[q] = q;
        cyc[3 * b] = 3 * b + 1;
        cyc[3 * b + 1] = 3 * b + 2;
        cyc[3 * b + 2] = 3 * b;
        swp[3 * b] = 3 * b + 1;
        swp[3 * b + 1] = 3 * b;
        syms.push_back(SymmetryOp::pure_permutation(cyc, base + "_cycle"));
        syms.push_back(SymmetryOp::pure_permutation(swp, base + "_swap"));
    }
    syms.push_back(SymmetryOp::pure_permutation(
        parse_permutation_cycles("(0 3 6)(1 4 7)(2 5 8)", n), "outer_cycle"));
    syms.push_back(SymmetryOp::pure_permutation(parse_permutation_cycles("(0 3)(1 4)(2 5)", n),
                                                "outer_swap"));
    PartitionOptions opts;
    opts.weight_bound = 2;
    return partition(cc.flat, paulis_up_to_weight(n, 2, true), syms,
                     NoiseModel::iid_family(n), DegeneracyMode::strict, opts);
}

}  // namespace qecsym
