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

#include <CLI11.hpp>

#include "qecsym/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qecsym: exact logical noise in stabilizer codes with symmetry reduction"};
    app.require_subcommand(1);

    qecsym::RunConfig cfg;

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "numerical tolerance");
        sub->add_option("--seed", cfg.seed, "seed for sampled noise");
        sub->add_option("--output", cfg.output_path, "report file (default: stdout)");
        sub->add_option("--format", cfg.format, "json or csv");
    };

    CLI::App* channel = app.add_subcommand("channel", "conditional and average logical channels");
    channel->add_option("--code", cfg.code_spec, "code name, JSON spec, or file")->required();
    channel->add_option("--noise", cfg.noise_spec, "concrete noise spec")->required();
    channel->add_option("--readout", cfg.readout_spec, "readout confusion spec");
    channel->add_option("--recovery", cfg.recovery_file, "custom recovery maps (JSON)");
    add_common(channel);

    CLI::App* classes = app.add_subcommand("classes", "degeneracy classes of the recovery maps");
    classes->add_option("--code", cfg.code_spec)->required();
    classes->add_option("--noise", cfg.noise_spec, "noise family spec")->required();
    classes->add_option("--mode", cfg.mode, "strict or logical");
    classes->add_option("--recovery", cfg.recovery_file, "custom recovery maps (JSON)");
    classes->add_option("--symmetries", cfg.symmetries_spec, "override builtin symmetries");
    add_common(classes);

    CLI::App* verify = app.add_subcommand("verify", "replay witnesses and verify numerically");
    verify->add_option("--partition", cfg.partition_file, "partition file from `classes`")
        ->required();
    verify->add_option("--noise", cfg.noise_spec, "concrete noise or family to sample")
        ->required();
    verify->add_option("--draws", cfg.draws, "instances to sample from a family");
    add_common(verify);

    CLI::App* toric_cmd = app.add_subcommand("toric", "weight-limited toric degeneracy classes");
    toric_cmd->add_option("--code", cfg.code_spec, "toric spec, e.g. '{\"toric\":{\"rows\":4,\"cols\":4}}'")
        ->required();
    toric_cmd->add_option("--weight-max", cfg.weight_max, "1 or 2");
    toric_cmd->add_option("--noise", cfg.noise_spec, "noise family spec");
    toric_cmd->add_option("--symmetries", cfg.symmetries_spec, "symmetry name subset (JSON list)");
    toric_cmd->add_option("--mode", cfg.mode, "strict or logical");
    add_common(toric_cmd);

    CLI::App* concat_cmd = app.add_subcommand("concat", "two-level concatenation analysis");
    concat_cmd->add_option("--outer", cfg.outer_spec)->required();
    concat_cmd->add_option("--inner", cfg.inner_spec)->required();
    concat_cmd->add_option("--noise", cfg.noise_spec, "concrete per-block noise")->required();
    add_common(concat_cmd);

    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    return qecsym::run(cfg);
}
