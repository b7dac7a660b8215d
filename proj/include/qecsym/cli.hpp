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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qecsym/concat.hpp"
#include "qecsym/degeneracy.hpp"
#include "qecsym/json_io.hpp"
#include "qecsym/measurement.hpp"

namespace qecsym {

/// Parsed command-line request. Specs may be inline JSON, a builtin name,
/// or a path to a JSON file.
struct RunConfig {
    std::string command;  // channel | classes | verify | toric | concat
    std::string code_spec;
    std::string noise_spec;
    std::string readout_spec;
    std::string recovery_file;
    std::string symmetries_spec;
    std::string partition_file;
    std::string outer_spec;
    std::string inner_spec;
    std::string mode = "logical";
    int weight_max = 1;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    int draws = 10;
    std::string output_path;
    std::string format = "json";
};

namespace cli_detail {

inline json spec_to_json(const std::string& spec, const std::string& what) {
    if (spec.empty()) throw ParseError("missing " + what + " spec");
    if (spec.front() == '{' || spec.front() == '[' || spec.front() == '"')
        return parse_json_text(spec, what);
    // Bare word: builtin name; otherwise a file path.
    if (spec.find('.') == std::string::npos && spec.find('/') == std::string::npos)
        return json(spec);
    return load_json_file(spec);
}

inline json config_to_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["code"] = cfg.code_spec;
    j["noise"] = cfg.noise_spec;
    j["readout"] = cfg.readout_spec;
    j["recovery"] = cfg.recovery_file;
    j["symmetries"] = cfg.symmetries_spec;
    j["partition"] = cfg.partition_file;
    j["outer"] = cfg.outer_spec;
    j["inner"] = cfg.inner_spec;
    j["mode"] = cfg.mode;
    j["weight_max"] = cfg.weight_max;
    j["tol"] = cfg.tol;
    j["seed"] = cfg.seed;
    j["draws"] = cfg.draws;
    j["format"] = cfg.format;
    return j;
}

inline std::string syndrome_string(std::uint64_t s, int bits) {
    std::string out(static_cast<std::size_t>(bits), '0');
    for (int i = 0; i < bits; ++i)
        if ((s >> i) & 1u) out[static_cast<std::size_t>(i)] = '1';
    return out;
}

inline RecoverySet recovery_from_config(const StabilizerCode& code, const std::string& spec) {
    if (spec.empty()) return default_recovery_set(code);
    json j = spec.front() == '[' ? parse_json_text(spec, "recovery") : load_json_file(spec);
    std::vector<PauliOperator> maps;
    for (const auto& s : j) maps.push_back(parse_pauli(s.get<std::string>(), code.n));
    return custom_recovery_set(code, maps);
}

inline std::vector<SymmetryOp> symmetries_from_config(const StabilizerCode& code,
                                                      const std::string& spec) {
    if (spec.empty()) return builtin_symmetries(code);
    json j = spec.front() == '[' ? parse_json_text(spec, "symmetries") : load_json_file(spec);
    std::vector<SymmetryOp> ops;
    for (const auto& sj : j) ops.push_back(symmetry_from_json(sj, code.n));
    return ops;
}

inline std::vector<NoiseModel> sample_family(const NoiseModel& family, int draws,
                                             std::uint64_t seed) {
    std::vector<NoiseModel> out;
    if (family.is_concrete()) {
        out.push_back(family);
        return out;
    }
    Rng rng(seed);
    for (int i = 0; i < draws; ++i) {
        if (family.kind == NoiseModel::Kind::depolarizing) {
            out.push_back(NoiseModel::depolarizing(0.5 + 0.49 * rng.uniform(), family.n));
        } else {
            out.push_back(
                NoiseModel::iid(QuantumChannel{random_kraus_channel(2, 2, rng)}, family.n));
        }
    }
    return out;
}

inline std::string classes_csv(const DegeneracyPartition& part) {
    std::ostringstream out;
    out << "class,representative,size,members\n";
    for (std::size_t c = 0; c < part.classes.size(); ++c) {
        out << c << "," << part.classes[c].representative.to_string() << ","
            << part.classes[c].members.size() << ",";
        for (std::size_t m = 0; m < part.classes[c].members.size(); ++m) {
            if (m) out << ";";
            out << part.classes[c].members[m].to_string();
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace cli_detail

/// Dispatches one command; returns the process exit status (0 success,
/// 1 input error, 2 verification failure) and writes the report to
/// `cfg.output_path` or to `fallback`.
inline int run(const RunConfig& cfg, std::ostream& fallback = std::cout) {
    json report;
    int status = 0;
    try {
        json cfg_json = cli_detail::config_to_json(cfg);
        report["command"] = cfg.command;
        report["version"] = version_string();
        report["config_hash"] = config_hash(cfg_json);

        if (cfg.command == "channel") {
            StabilizerCode code = code_from_json(cli_detail::spec_to_json(cfg.code_spec, "code"));
            NoiseModel noise =
                noise_from_json(cli_detail::spec_to_json(cfg.noise_spec, "noise"), code.n);
            if (!noise.is_concrete())
                throw ParseError("channel: the noise spec must be concrete");
            RecoverySet rs = cli_detail::recovery_from_config(code, cfg.recovery_file);
            bool noisy = !cfg.readout_spec.empty();
            ReadoutNoise readout =
                noisy ? readout_from_json(cli_detail::spec_to_json(cfg.readout_spec, "readout"),
                                          code.n - code.k)
                      : ReadoutNoise::ideal(code.n - code.k);
            EncodingIsometry iso = encoding_isometry(code);
            report["code"] = code_to_json(code);
            report["syndromes"] = json::array();
            RealMatrix ideal_sum, noisy_sum;
            for (std::size_t s = 0; s < rs.maps.size(); ++s) {
                LogicalChannel cond = conditional_logical_channel(iso, rs.maps[s], noise);
                json e;
                e["syndrome"] = cli_detail::syndrome_string(s, code.n - code.k);
                e["recovery"] = rs.maps[s].to_string();
                e["ptm"] = real_matrix_to_json(cond.ptm);
                double factor = 1.0;
                if (noisy) {
                    factor = renormalization_factor(readout, s);
                    e["renormalization"] = factor;
                }
                report["syndromes"].push_back(std::move(e));
                if (s == 0) {
                    ideal_sum = cond.ptm;
                    noisy_sum = factor * cond.ptm;
                } else {
                    ideal_sum += cond.ptm;
                    noisy_sum += factor * cond.ptm;
                }
            }
            report["average"] = real_matrix_to_json(ideal_sum);
            if (noisy) report["noisy_average"] = real_matrix_to_json(noisy_sum);
        } else if (cfg.command == "classes") {
            StabilizerCode code = code_from_json(cli_detail::spec_to_json(cfg.code_spec, "code"));
            NoiseModel family =
                noise_from_json(cli_detail::spec_to_json(cfg.noise_spec, "noise"), code.n);
            RecoverySet rs = cli_detail::recovery_from_config(code, cfg.recovery_file);
            auto syms = cli_detail::symmetries_from_config(code, cfg.symmetries_spec);
            DegeneracyMode mode =
                cfg.mode == "strict" ? DegeneracyMode::strict : DegeneracyMode::logical;
            DegeneracyPartition part = partition(code, rs, syms, family, mode);
            if (cfg.format == "csv") {
                std::string csv = cli_detail::classes_csv(part);
                if (!cfg.output_path.empty()) {
                    std::ofstream out(cfg.output_path);
                    out << csv;
                } else {
                    fallback << csv;
                }
                return 0;
            }
            report["partition"] = partition_to_json(part);
            report["num_classes"] = part.num_classes();
        } else if (cfg.command == "verify") {
            DegeneracyPartition part = partition_from_json(
                load_json_file(cfg.partition_file.empty() ? cfg.code_spec : cfg.partition_file));
            NoiseModel noise = noise_from_json(
                cli_detail::spec_to_json(cfg.noise_spec, "noise"), part.code.n);
            // Witness replay is exact Pauli algebra and must reproduce the
            // members before any numerics run.
            bool replay_ok = true;
            for (const auto& cls : part.classes)
                for (const auto& w : cls.witnesses)
                    replay_ok = replay_ok &&
                                (replay_witness(part, cls.representative, w.steps) == w.member);
            report["witness_replay_ok"] = replay_ok;
            report["instances"] = json::array();
            bool all_pass = replay_ok;
            for (const auto& instance :
                 cli_detail::sample_family(noise, cfg.draws, cfg.seed)) {
                VerificationReport vr = verify_partition(part, instance, cfg.tol);
                json ij;
                ij["noise"] = noise_to_json(instance);
                ij["all_pass"] = vr.all_pass;
                ij["checks"] = json::array();
                for (const auto& c : vr.checks)
                    ij["checks"].push_back({{"class", c.class_index},
                                            {"member", c.member},
                                            {"residual", c.residual},
                                            {"pass", c.pass}});
                ij["negative_controls"] = json::array();
                for (const auto& c : vr.negative_controls)
                    ij["negative_controls"].push_back({{"class_a", c.class_a},
                                                       {"class_b", c.class_b},
                                                       {"proportional", c.proportional},
                                                       {"residual", c.residual}});
                all_pass = all_pass && vr.all_pass;
                report["instances"].push_back(std::move(ij));
            }
            report["all_pass"] = all_pass;
            if (!all_pass) status = 2;
        } else if (cfg.command == "toric") {
            json code_json = cli_detail::spec_to_json(cfg.code_spec, "code");
            StabilizerCode code = code_from_json(code_json);
            if (code.name.rfind("toric_", 0) != 0)
                throw ParseError("toric: the code spec must be a toric code");
            std::size_t sep = code.name.find('x');
            int r = std::stoi(code.name.substr(6, sep - 6));
            int c = std::stoi(code.name.substr(sep + 1));
            NoiseModel family =
                cfg.noise_spec.empty()
                    ? NoiseModel::iid_family(code.n)
                    : noise_from_json(cli_detail::spec_to_json(cfg.noise_spec, "noise"), code.n);
            std::vector<std::string> names;
            if (!cfg.symmetries_spec.empty())
                for (const auto& s : parse_json_text(cfg.symmetries_spec, "symmetries"))
                    names.push_back(s.get<std::string>());
            DegeneracyMode mode =
                cfg.mode == "strict" ? DegeneracyMode::strict : DegeneracyMode::logical;
            DegeneracyPartition part =
                toric_weight_classes(r, c, cfg.weight_max, names, family, mode);
            report["rows"] = r;
            report["cols"] = c;
            report["weight_max"] = cfg.weight_max;
            report["num_classes"] = part.num_classes();
            if (cfg.weight_max == 2) report["weight2_bound"] = toric_weight2_bound(r, c);
            json reps = json::array();
            for (const auto& cls : part.classes) reps.push_back(cls.representative.to_string());
            report["representatives"] = reps;
            if (cfg.format == "csv") {
                std::string csv = cli_detail::classes_csv(part);
                if (!cfg.output_path.empty()) {
                    std::ofstream out(cfg.output_path);
                    out << csv;
                } else {
                    fallback << csv;
                }
                return 0;
            }
            report["partition"] = partition_to_json(part);
        } else if (cfg.command == "concat") {
            StabilizerCode outer =
                code_from_json(cli_detail::spec_to_json(cfg.outer_spec, "outer"));
            json inner_json = cli_detail::spec_to_json(cfg.inner_spec, "inner");
            StabilizerCode inner = (inner_json.is_string() && inner_json == "three_qubit_h")
                                       ? shor_inner_code()
                                       : code_from_json(inner_json);
            ConcatCode cc = make_concat(outer, inner);
            NoiseModel block_noise = noise_from_json(
                cli_detail::spec_to_json(cfg.noise_spec, "noise"), cc.inner.n);
            if (!block_noise.is_concrete())
                throw ParseError("concat: the noise spec must carry a concrete parameter");
            NoiseModel family = block_noise.kind == NoiseModel::Kind::depolarizing
                                    ? NoiseModel::depolarizing_family(cc.inner.n)
                                    : NoiseModel::iid_family(cc.inner.n);
            ConcatReduction red = symmetry_reduced_pairs(cc, family, block_noise);
            ConcatMergeReport merge = numerical_class_merge(cc, red, block_noise, cfg.tol);
            report["outer"] = cc.outer.name;
            report["inner"] = cc.inner.name;
            report["raw"] = red.raw;
            report["cached_bound"] = red.cached_bound;
            report["reflection_reduced"] = red.reflection_reduced;
            report["symmetry_reduced"] = static_cast<int>(red.pairs.size());
            report["numerically_merged"] = merge.after;
            json pairs = json::array();
            for (const auto& p : red.pairs) {
                json pj;
                pj["labels"] = p.labels;
                pj["outer_map"] = p.outer_map.to_string();
                pairs.push_back(std::move(pj));
            }
            report["pairs"] = pairs;
            json rels = json::array();
            for (const auto& r : merge.relations) {
                json rj;
                rj["a"] = {{"labels", red.pairs[r.pair_a].labels},
                           {"outer_map", red.pairs[r.pair_a].outer_map.to_string()}};
                rj["b"] = {{"labels", red.pairs[r.pair_b].labels},
                           {"outer_map", red.pairs[r.pair_b].outer_map.to_string()}};
                rj["scalar"] = r.scalar;
                rj["residual"] = r.residual;
                rels.push_back(std::move(rj));
            }
            report["relations"] = rels;
        } else {
            throw ParseError("unknown command \"" + cfg.command + "\"");
        }
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        err["command"] = cfg.command;
        if (!cfg.output_path.empty()) {
            std::ofstream out(cfg.output_path);
            out << err.dump(2) << "\n";
        } else {
            fallback << err.dump(2) << "\n";
        }
        return 1;
    }
    std::string text = report.dump(2) + "\n";
    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path);
        if (!out) {
            fallback << "{\"error\": \"cannot write output file\"}\n";
            return 1;
        }
        out << text;
    } else {
        fallback << text;
    }
    return status;
}

}  // namespace qecsym
