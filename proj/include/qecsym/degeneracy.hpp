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
#include <string>
#include <unordered_map>
#include <vector>

#include "qecsym/channels.hpp"
#include "qecsym/codes.hpp"
#include "qecsym/errors.hpp"
#include "qecsym/symmetry.hpp"

namespace qecsym {

enum class DegeneracyMode { strict, logical };

inline std::string to_string(DegeneracyMode m) {
    return m == DegeneracyMode::strict ? "strict" : "logical";
}

/// One generating relation in a witness chain. Multiplication steps
/// normalize the resulting phase to +1 (recovery maps are phase classes);
/// symmetry conjugation steps are exact, signs included.
struct WitnessStep {
    enum class Kind { symmetry, stabilizer, logical };
    Kind kind = Kind::stabilizer;
    int symmetry_index = -1;                        // into DegeneracyPartition::symmetries
    PauliOperator element = PauliOperator(1);       // stabilizer / logical multiplier
};

/// Chain from the class representative to `member`, together with the
/// accumulated relation N(member) = scalar * left_ptm * N(rep) * right_ptm.
struct Witness {
    PauliOperator member = PauliOperator(1);
    std::vector<WitnessStep> steps;
    double scalar = 1.0;
    RealMatrix left_ptm, right_ptm;
};

struct DegeneracyClass {
    PauliOperator representative = PauliOperator(1);
    std::vector<PauliOperator> members;
    std::vector<Witness> witnesses;  // parallel to members
};

struct UsedSymmetry {
    SymmetryOp op;
    MembershipVerdict verdict;
    RealMatrix action_ptm;      // induced logical action of op
    RealMatrix action_dag_ptm;  // of op^dagger (transpose; the PTM is orthogonal)
};

struct DegeneracyPartition {
    StabilizerCode code;
    DegeneracyMode mode = DegeneracyMode::logical;
    NoiseModel noise_family;
    int weight_bound = -1;  // >= 0: multiplication moves pruned to this weight
    std::vector<UsedSymmetry> symmetries;
    std::vector<std::pair<std::string, std::string>> skipped;  // (name, reason)
    std::vector<DegeneracyClass> classes;

    int num_classes() const { return static_cast<int>(classes.size()); }

    // Class index containing the given element, or -1.
    int class_of(const PauliOperator& p) const {
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (const auto& m : classes[c].members)
                if (m == p) return static_cast<int>(c);
        return -1;
    }
};

struct PartitionOptions {
    int weight_bound = -1;       // prune multiplication moves beyond this weight
    int stab_enum_exponent = 20; // enumerate the full stabilizer group up to 2^this
    std::size_t node_cap = 5000000;
};

namespace detail {

struct LogicalMove {
    PauliOperator element;
    RealMatrix conj_ptm;
};

}  // namespace detail

/// Partitions the target Paulis into (logical) degeneracy classes: orbits
/// under symmetry conjugation (for symmetries that pass membership and
/// commute with the noise family), right multiplication by stabilizer
/// elements, and, in logical mode, left multiplication by logical Paulis.
/// Symmetries that fail a filter are skipped and recorded, not errors;
/// a symmetry that is not a symmetry of the code at all is rejected.
inline DegeneracyPartition partition(const StabilizerCode& code,
                                     std::vector<PauliOperator> targets,
                                     const std::vector<SymmetryOp>& symmetries,
                                     const NoiseModel& noise_family, DegeneracyMode mode,
                                     const PartitionOptions& opts = {}) {
    DegeneracyPartition part;
    part.code = code;
    part.mode = mode;
    part.noise_family = noise_family;
    part.weight_bound = opts.weight_bound;

    for (const auto& op : symmetries) {
        MembershipVerdict v = check_membership(code, op);
        if (v.kind == MembershipVerdict::Kind::neither)
            throw SymmetryRejectedError("partition: \"" + op.name() + "\" rejected: " + v.detail);
        if (!op.is_clifford()) {
            part.skipped.emplace_back(op.name(), "non-Clifford transversal part");
            continue;
        }
        if (mode == DegeneracyMode::strict && v.kind != MembershipVerdict::Kind::stabilizer) {
            part.skipped.emplace_back(op.name(), "logical symmetry unused in strict mode");
            continue;
        }
        if (!commutes_with_noise(op, noise_family)) {
            part.skipped.emplace_back(op.name(), "does not commute with the noise family");
            continue;
        }
        for (const SymmetryOp& variant : {op, op.inverse()}) {
            MembershipVerdict vv = check_membership(code, variant);
            UsedSymmetry used{variant, vv, vv.logical_action.ptm,
                              vv.logical_action.ptm.transpose()};
            part.symmetries.push_back(std::move(used));
        }
    }

    std::vector<PauliOperator> stab_moves;
    if (code.n - code.k <= opts.stab_enum_exponent) {
        auto group = enumerate_stabilizer_group(code, opts.stab_enum_exponent);
        stab_moves.assign(group.begin() + 1, group.end());
    } else {
        stab_moves = code.generators;
    }

    std::vector<detail::LogicalMove> logical_moves;
    if (mode == DegeneracyMode::logical) {
        for (std::uint64_t a = 0; a < (std::uint64_t(1) << code.k); ++a)
            for (std::uint64_t b = 0; b < (std::uint64_t(1) << code.k); ++b) {
                if (a == 0 && b == 0) continue;
                logical_moves.push_back(
                    {logical_coset_rep(code, a, b), detail::pauli_conj_ptm(code.k, a, b)});
            }
    }

    std::sort(targets.begin(), targets.end(), pauli_less);
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    std::unordered_map<PauliOperator, int, PauliOperator::Hash> target_index;
    for (std::size_t i = 0; i < targets.size(); ++i)
        target_index.emplace(targets[i], static_cast<int>(i));
    std::vector<char> assigned(targets.size(), 0);

    const Eigen::Index dk = Eigen::Index(1) << (2 * code.k);
    auto within_bound = [&](const PauliOperator& p) {
        return opts.weight_bound < 0 || weight(p) <= opts.weight_bound;
    };

    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (assigned[t]) continue;
        // BFS over phased Paulis from the (lexicographically minimal)
        // unassigned target; it becomes the class representative.
        std::vector<PauliOperator> nodes{targets[t]};
        std::vector<int> parent{-1};
        std::vector<WitnessStep> incoming{WitnessStep{}};
        std::unordered_map<PauliOperator, int, PauliOperator::Hash> seen;
        seen.emplace(targets[t], 0);
        std::vector<int> member_nodes{0};

        auto push = [&](const PauliOperator& next, int from, WitnessStep step) {
            if (seen.size() > opts.node_cap)
                throw CapacityError("partition: orbit exceeded the node cap");
            auto [it, inserted] = seen.emplace(next, static_cast<int>(nodes.size()));
            if (!inserted) return;
            nodes.push_back(next);
            parent.push_back(from);
            incoming.push_back(std::move(step));
            auto ti = target_index.find(next);
            if (ti != target_index.end() && !assigned[ti->second]) {
                assigned[ti->second] = 1;
                member_nodes.push_back(static_cast<int>(nodes.size()) - 1);
            }
        };

        for (std::size_t head = 0; head < nodes.size(); ++head) {
            PauliOperator cur = nodes[head];
            for (std::size_t si = 0; si < part.symmetries.size(); ++si) {
                WitnessStep step;
                step.kind = WitnessStep::Kind::symmetry;
                step.symmetry_index = static_cast<int>(si);
                push(conjugate_by_symmetry(cur, part.symmetries[si].op),
                     static_cast<int>(head), step);
            }
            for (const auto& s : stab_moves) {
                PauliOperator next = multiply(cur, s).phase_normalized();
                if (!within_bound(next)) continue;
                WitnessStep step;
                step.kind = WitnessStep::Kind::stabilizer;
                step.element = s;
                push(next, static_cast<int>(head), step);
            }
            for (const auto& l : logical_moves) {
                PauliOperator next = multiply(l.element, cur).phase_normalized();
                if (!within_bound(next)) continue;
                WitnessStep step;
                step.kind = WitnessStep::Kind::logical;
                step.element = l.element;
                push(next, static_cast<int>(head), step);
            }
        }

        DegeneracyClass cls;
        cls.representative = targets[t];
        std::sort(member_nodes.begin(), member_nodes.end(), [&](int a, int b) {
            return pauli_less(nodes[a], nodes[b]);
        });
        for (int node : member_nodes) {
            Witness w;
            w.member = nodes[node];
            std::vector<WitnessStep> reversed;
            for (int cur = node; parent[cur] >= 0; cur = parent[cur])
                reversed.push_back(incoming[cur]);
            w.steps.assign(reversed.rbegin(), reversed.rend());
            w.left_ptm = RealMatrix::Identity(dk, dk);
            w.right_ptm = RealMatrix::Identity(dk, dk);
            for (const auto& step : w.steps) {
                switch (step.kind) {
                    case WitnessStep::Kind::symmetry: {
                        const auto& us = part.symmetries[step.symmetry_index];
                        w.left_ptm = us.action_ptm * w.left_ptm;
                        w.right_ptm = w.right_ptm * us.action_dag_ptm;
                        break;
                    }
                    case WitnessStep::Kind::logical: {
                        LogicalDecomposition d = decompose_logical(code, step.element);
                        w.left_ptm = detail::pauli_conj_ptm(code.k, d.a, d.b) * w.left_ptm;
                        break;
                    }
                    case WitnessStep::Kind::stabilizer: break;
                }
            }
            cls.members.push_back(w.member);
            cls.witnesses.push_back(std::move(w));
        }
        part.classes.push_back(std::move(cls));
    }
    return part;
}

inline DegeneracyPartition partition(const StabilizerCode& code, const RecoverySet& recovery,
                                     const std::vector<SymmetryOp>& symmetries,
                                     const NoiseModel& noise_family, DegeneracyMode mode,
                                     const PartitionOptions& opts = {}) {
    return partition(code, recovery.maps, symmetries, noise_family, mode, opts);
}

/// Replays a witness chain with pure Pauli algebra; no numerics involved.
inline PauliOperator replay_witness(const DegeneracyPartition& part,
                                    const PauliOperator& representative,
                                    const std::vector<WitnessStep>& steps) {
    PauliOperator cur = representative;
    for (const auto& step : steps) {
        switch (step.kind) {
            case WitnessStep::Kind::symmetry:
                cur = conjugate_by_symmetry(cur, part.symmetries[step.symmetry_index].op);
                break;
            case WitnessStep::Kind::stabilizer:
                cur = multiply(cur, step.element).phase_normalized();
                break;
            case WitnessStep::Kind::logical:
                cur = multiply(step.element, cur).phase_normalized();
                break;
        }
    }
    return cur;
}

struct WitnessCheck {
    int class_index = 0;
    std::string member;
    double residual = 0.0;
    bool pass = false;
};

struct NegativeControl {
    int class_a = 0, class_b = 0;
    double scalar = 0.0;
    double residual = 0.0;
    bool proportional = false;  // reported, never asserted
};

struct VerificationReport {
    double tolerance = 0.0;
    bool all_pass = false;
    std::vector<WitnessCheck> checks;
    std::vector<NegativeControl> negative_controls;
};

// Least-squares proportionality: a ~ c * b. Two near-zero maps count as
// proportional; a zero map is not proportional to a nonzero one.
inline bool proportional_ptm(const RealMatrix& a, const RealMatrix& b, double tol,
                             double* scalar_out = nullptr, double* residual_out = nullptr) {
    double na = a.norm(), nb = b.norm();
    if (scalar_out) *scalar_out = 0.0;
    if (residual_out) *residual_out = 0.0;
    if (na < 1e-14 && nb < 1e-14) {
        if (scalar_out) *scalar_out = 1.0;
        return true;
    }
    if (na < 1e-14 || nb < 1e-14) {
        if (residual_out) *residual_out = 1.0;
        return false;
    }
    double c = (a.cwiseProduct(b)).sum() / (nb * nb);
    double resid = (a - c * b).norm() / na;
    if (scalar_out) *scalar_out = c;
    if (residual_out) *residual_out = resid;
    return resid <= tol;
}

/// Checks every witness relation numerically against a concrete noise model:
/// strict mode asserts N(member) == scalar * N(rep); logical mode asserts
/// N(member) == scalar * left * N(rep) * right. Distinct representatives are
/// additionally compared for proportionality as a reported (never asserted)
/// negative control.
inline VerificationReport verify_partition(const DegeneracyPartition& part,
                                           const NoiseModel& noise, double tolerance) {
    if (!noise.is_concrete())
        throw ParseError("verify_partition: need a concrete noise instance");
    require_dense(part.code.n, "verify_partition");
    EncodingIsometry iso = encoding_isometry(part.code);
    VerificationReport report;
    report.tolerance = tolerance;
    report.all_pass = true;

    std::vector<LogicalChannel> rep_channels;
    rep_channels.reserve(part.classes.size());
    for (const auto& cls : part.classes)
        rep_channels.push_back(conditional_logical_channel(iso, cls.representative, noise));

    for (std::size_t c = 0; c < part.classes.size(); ++c) {
        const auto& cls = part.classes[c];
        for (const auto& w : cls.witnesses) {
            LogicalChannel got = conditional_logical_channel(iso, w.member, noise);
            RealMatrix expected = w.scalar * w.left_ptm * rep_channels[c].ptm * w.right_ptm;
            WitnessCheck check;
            check.class_index = static_cast<int>(c);
            check.member = w.member.to_string();
            check.residual = rel_distance(got.ptm, expected);
            check.pass = check.residual <= tolerance;
            report.all_pass = report.all_pass && check.pass;
            report.checks.push_back(check);
        }
    }
    for (std::size_t a = 0; a < part.classes.size(); ++a)
        for (std::size_t b = a + 1; b < part.classes.size(); ++b) {
            NegativeControl ctl;
            ctl.class_a = static_cast<int>(a);
            ctl.class_b = static_cast<int>(b);
            ctl.proportional = proportional_ptm(rep_channels[a].ptm, rep_channels[b].ptm,
                                                tolerance, &ctl.scalar, &ctl.residual);
            report.negative_controls.push_back(ctl);
        }
    return report;
}

/// Number of unordered weight-k letter combinations: C(|E| + k - 2, k).
inline std::int64_t transitive_bound(int basis_size, int k) {
    if (basis_size < 2 || k < 1) throw ParseError("transitive_bound: need basis_size >= 2, k >= 1");
    std::int64_t top = basis_size + k - 2;
    std::int64_t result = 1;
    for (std::int64_t i = 1; i <= k; ++i) result = result * (top - k + i) / i;
    return result;
}

/// Closed-form cap on weight-two toric classes under translations and
/// reflections: 9((n + r + c)/2 - 2).
inline std::int64_t toric_weight2_bound(int r, int c) {
    std::int64_t n = std::int64_t(r) * c / 2;
    return 9 * ((n + r + c) / 2 - 2);
}

/// Orbit partition of the weight-limited Paulis of a toric code (identity
/// excluded) under the chosen symmetry subset, with stabilizer
/// multiplication explored only inside the weight bound.
inline DegeneracyPartition toric_weight_classes(int r, int c, int max_weight,
                                                const std::vector<std::string>& symmetry_names,
                                                const NoiseModel& noise_family,
                                                DegeneracyMode mode) {
    if (max_weight < 1 || max_weight > 2)
        throw ParseError("toric_weight_classes: max_weight must be 1 or 2");
    StabilizerCode code = toric(r, c);
    std::vector<SymmetryOp> ops;
    for (const auto& op : toric_symmetries(r, c)) {
        if (symmetry_names.empty() ||
            std::find(symmetry_names.begin(), symmetry_names.end(), op.name()) !=
                symmetry_names.end())
            ops.push_back(op);
    }
    PartitionOptions opts;
    opts.weight_bound = max_weight;
    NoiseModel family = noise_family;
    family.n = code.n;
    return partition(code, paulis_up_to_weight(code.n, max_weight, false), ops, family, mode,
                     opts);
}

}  // namespace qecsym
