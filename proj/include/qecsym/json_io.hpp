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
#include <string>
#include <vector>

#include <json.hpp>

#include "qecsym/channels.hpp"
#include "qecsym/codes.hpp"
#include "qecsym/degeneracy.hpp"
#include "qecsym/errors.hpp"
#include "qecsym/measurement.hpp"
#include "qecsym/symmetry_op.hpp"

namespace qecsym {

using json = nlohmann::json;

// --- basic pieces -------------------------------------------------------

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix: expected a non-empty array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& e = j.at(i).at(c);
            if (e.is_array())
                m(i, c) = cxd(e.at(0).get<double>(), e.size() > 1 ? e.at(1).get<double>() : 0.0);
            else
                m(i, c) = cxd(e.get<double>(), 0.0);
        }
    return m;
}

inline json real_matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline RealMatrix real_matrix_from_json(const json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    return m;
}

// --- codes ---------------------------------------------------------------

inline json code_to_json(const StabilizerCode& code) {
    json j;
    j["name"] = code.name;
    j["generators"] = json::array();
    for (const auto& g : code.generators) j["generators"].push_back(g.to_string());
    j["logical_x"] = json::array();
    for (const auto& l : code.logical_x) j["logical_x"].push_back(l.to_string());
    j["logical_z"] = json::array();
    for (const auto& l : code.logical_z) j["logical_z"].push_back(l.to_string());
    return j;
}

inline StabilizerCode code_from_json(const json& j) {
    if (j.is_string()) {
        std::string name = j.get<std::string>();
        if (name.rfind("toric_", 0) == 0) {
            std::size_t sep = name.find('x');
            return toric(std::stoi(name.substr(6, sep - 6)), std::stoi(name.substr(sep + 1)));
        }
        return builtin(name);
    }
    if (j.contains("toric"))
        return toric(j.at("toric").at("rows").get<int>(), j.at("toric").at("cols").get<int>());
    if (j.contains("generators")) {
        std::vector<PauliOperator> gens, lx, lz;
        for (const auto& s : j.at("generators")) gens.push_back(parse_pauli(s.get<std::string>()));
        for (const auto& s : j.at("logical_x")) lx.push_back(parse_pauli(s.get<std::string>()));
        for (const auto& s : j.at("logical_z")) lz.push_back(parse_pauli(s.get<std::string>()));
        return make_stabilizer_code(j.value("name", std::string("custom")), std::move(gens),
                                    std::move(lx), std::move(lz));
    }
    if (j.contains("name")) return code_from_json(j.at("name"));
    throw ParseError("code spec: expected a builtin name, a toric spec, or generators");
}

// --- channels and noise ---------------------------------------------------

inline QuantumChannel channel_from_json(const json& j) {
    if (j.contains("kraus")) {
        QuantumChannel ch;
        for (const auto& k : j.at("kraus")) ch.kraus.push_back(matrix_from_json(k));
        return ch;
    }
    if (j.contains("depolarizing")) return depolarizing_channel(j.at("depolarizing").get<double>());
    if (j.contains("name") && j.at("name") == "identity") return identity_channel(1);
    throw ParseError("channel spec: expected \"kraus\", \"depolarizing\", or identity");
}

inline json channel_to_json(const QuantumChannel& ch) {
    json j;
    j["kraus"] = json::array();
    for (const auto& k : ch.kraus) j["kraus"].push_back(matrix_to_json(k));
    return j;
}

inline NoiseModel noise_from_json(const json& j, int n) {
    std::string type = j.at("type").get<std::string>();
    if (type == "iid") {
        if (j.contains("factor")) {
            QuantumChannel f = channel_from_json(j.at("factor"));
            if (n % f.qubits() != 0) throw ParseError("iid noise: factor does not divide n");
            return NoiseModel::iid(f, n / f.qubits());
        }
        return NoiseModel::iid_family(n);
    }
    if (type == "depolarizing") {
        if (j.contains("p")) return NoiseModel::depolarizing(j.at("p").get<double>(), n);
        return NoiseModel::depolarizing_family(n);
    }
    if (type == "tensor") {
        std::vector<QuantumChannel> fs;
        for (const auto& f : j.at("factors")) fs.push_back(channel_from_json(f));
        NoiseModel nm = NoiseModel::tensor(std::move(fs));
        if (nm.n != n) throw ParseError("tensor noise: factors do not cover the qubit count");
        return nm;
    }
    if (type == "kraus") {
        std::vector<Matrix> ks;
        for (const auto& k : j.at("kraus")) ks.push_back(matrix_from_json(k));
        NoiseModel nm = NoiseModel::general_kraus(std::move(ks), n);
        if (nm.kraus.front().rows() != (Eigen::Index(1) << n))
            throw ParseError("kraus noise: operator dimension does not match the code");
        return nm;
    }
    throw ParseError("noise spec: unknown type \"" + type + "\"");
}

inline json noise_to_json(const NoiseModel& nm) {
    json j;
    switch (nm.kind) {
        case NoiseModel::Kind::iid:
            j["type"] = "iid";
            if (nm.factor) j["factor"] = channel_to_json(*nm.factor);
            break;
        case NoiseModel::Kind::depolarizing:
            j["type"] = "depolarizing";
            if (nm.p) j["p"] = *nm.p;
            break;
        case NoiseModel::Kind::tensor: {
            j["type"] = "tensor";
            j["factors"] = json::array();
            for (const auto& f : nm.factors) j["factors"].push_back(channel_to_json(f));
            break;
        }
        case NoiseModel::Kind::kraus: {
            j["type"] = "kraus";
            j["kraus"] = json::array();
            for (const auto& k : nm.kraus) j["kraus"].push_back(matrix_to_json(k));
            break;
        }
    }
    return j;
}

// --- readout ---------------------------------------------------------------

inline ReadoutNoise readout_from_json(const json& j, int generators) {
    ReadoutNoise rn;
    if (j.contains("per_generator")) {
        for (const auto& e : j.at("per_generator")) {
            if (e.contains("matrix")) {
                ConfusionMatrix2 c;
                c.c(0, 0) = e.at("matrix").at(0).at(0).get<double>();
                c.c(0, 1) = e.at("matrix").at(0).at(1).get<double>();
                c.c(1, 0) = e.at("matrix").at(1).at(0).get<double>();
                c.c(1, 1) = e.at("matrix").at(1).at(1).get<double>();
                c.validate();
                rn.per_generator.push_back(c);
            } else {
                rn.per_generator.push_back(
                    ConfusionMatrix2::from_rates(e.at("a").get<double>(), e.at("b").get<double>()));
            }
        }
    } else if (j.contains("a")) {
        rn = ReadoutNoise::uniform(j.at("a").get<double>(), j.at("b").get<double>(), generators);
    } else {
        throw ParseError("readout spec: expected \"per_generator\" or uniform rates");
    }
    if (static_cast<int>(rn.per_generator.size()) != generators)
        throw ParseError("readout spec: need one confusion matrix per generator");
    return rn;
}

// --- symmetries ------------------------------------------------------------

inline SymmetryOp symmetry_from_json(const json& j, int n) {
    std::vector<int> perm;
    if (j.contains("permutation"))
        perm = j.at("permutation").get<std::vector<int>>();
    else if (j.contains("cycles"))
        perm = parse_permutation_cycles(j.at("cycles").get<std::string>(), n);
    else {
        perm.resize(n);
        for (int q = 0; q < n; ++q) perm[q] = q;
    }
    std::vector<SingleQubitGate> gates;
    if (j.contains("transversal")) {
        for (const auto& g : j.at("transversal")) {
            if (g.is_string())
                gates.push_back(SingleQubitGate::named(g.get<std::string>()));
            else
                gates.push_back(SingleQubitGate("custom", matrix_from_json(g)));
        }
        if (gates.size() == 1 && n > 1) gates.assign(static_cast<std::size_t>(n), gates.front());
    } else {
        gates.assign(static_cast<std::size_t>(n), SingleQubitGate());
    }
    return SymmetryOp(std::move(perm), std::move(gates), j.value("name", std::string("custom")));
}

inline json symmetry_to_json(const SymmetryOp& op) {
    json j;
    j["name"] = op.name();
    j["permutation"] = op.permutation();
    json trans = json::array();
    bool nontrivial = false;
    for (const auto& g : op.transversal()) {
        if (g.label() != "I" && g.label().find("custom") == std::string::npos) {
            trans.push_back(g.label());
            nontrivial = nontrivial || g.label() != "I";
        } else if (g.is_identity_conjugation()) {
            trans.push_back("I");
        } else {
            trans.push_back(matrix_to_json(g.matrix()));
            nontrivial = true;
        }
    }
    if (nontrivial) j["transversal"] = trans;
    return j;
}

// --- logical channels -------------------------------------------------------

inline json logical_channel_to_json(const LogicalChannel& ch) {
    json j;
    j["k"] = ch.k;
    j["ptm"] = real_matrix_to_json(ch.ptm);
    return j;
}

// --- partitions --------------------------------------------------------------

inline json partition_to_json(const DegeneracyPartition& part) {
    json j;
    j["format"] = "qecsym-partition-v1";
    j["code"] = code_to_json(part.code);
    j["mode"] = to_string(part.mode);
    j["noise_family"] = noise_to_json(part.noise_family);
    if (part.weight_bound >= 0) j["weight_bound"] = part.weight_bound;
    j["symmetries"] = json::array();
    for (const auto& us : part.symmetries) j["symmetries"].push_back(symmetry_to_json(us.op));
    j["skipped_symmetries"] = json::array();
    for (const auto& [name, reason] : part.skipped)
        j["skipped_symmetries"].push_back({{"name", name}, {"reason", reason}});
    j["num_classes"] = part.num_classes();
    j["classes"] = json::array();
    for (const auto& cls : part.classes) {
        json c;
        c["representative"] = cls.representative.to_string();
        c["members"] = json::array();
        for (const auto& m : cls.members) c["members"].push_back(m.to_string());
        c["witnesses"] = json::array();
        for (const auto& w : cls.witnesses) {
            json wj;
            wj["member"] = w.member.to_string();
            wj["scalar"] = w.scalar;
            wj["left_ptm"] = real_matrix_to_json(w.left_ptm);
            wj["right_ptm"] = real_matrix_to_json(w.right_ptm);
            wj["steps"] = json::array();
            for (const auto& s : w.steps) {
                json sj;
                switch (s.kind) {
                    case WitnessStep::Kind::symmetry:
                        sj["kind"] = "symmetry";
                        sj["symmetry"] = s.symmetry_index;
                        break;
                    case WitnessStep::Kind::stabilizer:
                        sj["kind"] = "stabilizer";
                        sj["element"] = s.element.to_string();
                        break;
                    case WitnessStep::Kind::logical:
                        sj["kind"] = "logical";
                        sj["element"] = s.element.to_string();
                        break;
                }
                wj["steps"].push_back(std::move(sj));
            }
            c["witnesses"].push_back(std::move(wj));
        }
        j["classes"].push_back(std::move(c));
    }
    return j;
}

inline DegeneracyPartition partition_from_json(const json& j) {
    DegeneracyPartition part;
    part.code = code_from_json(j.at("code"));
    part.mode = j.at("mode") == "strict" ? DegeneracyMode::strict : DegeneracyMode::logical;
    part.noise_family = noise_from_json(j.at("noise_family"), part.code.n);
    part.weight_bound = j.value("weight_bound", -1);
    for (const auto& sj : j.at("symmetries")) {
        SymmetryOp op = symmetry_from_json(sj, part.code.n);
        MembershipVerdict v = check_membership(part.code, op);
        if (v.kind == MembershipVerdict::Kind::neither)
            throw SymmetryRejectedError("partition file: \"" + op.name() +
                                        "\" is not a symmetry: " + v.detail);
        part.symmetries.push_back(
            {op, v, v.logical_action.ptm, v.logical_action.ptm.transpose()});
    }
    if (j.contains("skipped_symmetries"))
        for (const auto& sj : j.at("skipped_symmetries"))
            part.skipped.emplace_back(sj.at("name").get<std::string>(),
                                      sj.at("reason").get<std::string>());
    for (const auto& cj : j.at("classes")) {
        DegeneracyClass cls;
        cls.representative = parse_pauli(cj.at("representative").get<std::string>(), part.code.n);
        for (const auto& m : cj.at("members"))
            cls.members.push_back(parse_pauli(m.get<std::string>(), part.code.n));
        for (const auto& wj : cj.at("witnesses")) {
            Witness w;
            w.member = parse_pauli(wj.at("member").get<std::string>(), part.code.n);
            w.scalar = wj.value("scalar", 1.0);
            w.left_ptm = real_matrix_from_json(wj.at("left_ptm"));
            w.right_ptm = real_matrix_from_json(wj.at("right_ptm"));
            for (const auto& sj : wj.at("steps")) {
                WitnessStep s;
                std::string kind = sj.at("kind").get<std::string>();
                if (kind == "symmetry") {
                    s.kind = WitnessStep::Kind::symmetry;
                    s.symmetry_index = sj.at("symmetry").get<int>();
                } else {
                    s.kind = kind == "stabilizer" ? WitnessStep::Kind::stabilizer
                                                  : WitnessStep::Kind::logical;
                    s.element = parse_pauli(sj.at("element").get<std::string>(), part.code.n);
                }
                w.steps.push_back(std::move(s));
            }
            cls.witnesses.push_back(std::move(w));
        }
        part.classes.push_back(std::move(cls));
    }
    return part;
}

// --- files -------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("JSON parse error in \"" + path + "\": " + e.what());
    }
    return j;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError("JSON parse error in " + what + ": " + e.what());
    }
}

// FNV-1a over the canonical dump; stable across runs for identical configs.
inline std::string config_hash(const json& j) {
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace qecsym
