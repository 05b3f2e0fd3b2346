/*
 Copyright 2026 The limbless Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/


// Command-line front end: forward | ocp | beam-benchmark | audit | sweep.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "limbless/output.hpp"
#include "limbless/sweep.hpp"

using namespace limbless;
using nlohmann::json;

namespace {

struct Options {
    std::string config;
    std::string out = "out";
    std::string preset;
    int threads = 1;
};

Scenario resolve(const Options& o) {
    json j = json::object();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ConfigError({"cannot open config file '" + o.config + "'"});
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
        }
    }
    if (!o.preset.empty()) {
        if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
        j["preset"] = o.preset;
    }
    if (o.config.empty() && o.preset.empty()) throw ConfigError({"give --config or --preset"});
    return scenario_from_json(j);
}

void write(const Options& o, const std::string& name, const std::string& content) {
    write_file_atomic((std::filesystem::path(o.out) / name).string(), content);
}

void write_meta(const Options& o, const Scenario& s, const std::string& command, const json& results) {
    json meta = scenario_to_json(s);
    meta["meta"] = {{"version", kVersion}, {"command", command}, {"results", results}};
    write(o, "meta.json", meta.dump(2) + "\n");
}

int cmd_forward(const Options& o) {
    const Scenario s = resolve(o);
    Problem p(s);
    const Matrix u = p.gait_controls();
    SimulateOptions opt;
    opt.cache_tangents = false;
    const Trajectory tr = p.solver().simulate(p.initial_positions(), u, opt);
    write(o, "trajectory.csv", trajectory_csv(tr));
    write(o, "controls.csv", controls_csv(tr.t, u));
    if (s.state_stride > 0) write(o, "states.csv", states_csv(tr, s.state_stride));
    const Vec3 d = tr.centroid.back() - tr.centroid.front();
    int max_it = 0, max_sub = 1;
    for (const StageCache& st : tr.stages) {
        max_it = std::max(max_it, st.iterations);
        max_sub = std::max(max_sub, st.substeps);
    }
    write_meta(o, s, "forward",
               {{"net_displacement", {d.x(), d.y(), d.z()}},
                {"W_end", tr.W.back()},
                {"newton_iterations_max", max_it},
                {"substeps_max", max_sub}});
    std::printf("forward: %d steps, net displacement %s\n", tr.steps(), fmt(d.x()).c_str());
    return 0;
}

int cmd_ocp(const Options& o) {
    const Scenario s = resolve(o);
    Problem p(s);
    const Matrix u0 = Matrix::Constant(p.assembler().num_channels(), s.steps() + 1, s.u0);
    const FbsmResult res = fbsm(p.solver(), p.initial_positions(), u0, s.ocp, [](const FbsmIteration& it) {
        std::printf("k=%d J=%s pg=%s theta=%s\n", it.k, fmt(it.J).c_str(), fmt(it.pg_norm).c_str(),
                    fmt(it.theta).c_str());
        std::fflush(stdout);
    });
    const Trajectory& tr = res.trajectory;
    write(o, "trajectory.csv", trajectory_csv(tr));
    write(o, "controls.csv", controls_csv(tr.t, res.u));
    write(o, "convergence.csv", convergence_csv(res.history));
    write(o, "hamiltonian.csv", hamiltonian_csv(tr.t, hamiltonian(tr, res.adjoint, p.assembler(), s.ocp)));
    if (s.state_stride > 0) write(o, "states.csv", states_csv(tr, s.state_stride));
    const double dist = (tr.centroid.back() - s.ocp.x_d).norm();
    write_meta(o, s, "ocp",
               {{"converged", res.converged},
                {"stop_reason", res.stop_reason},
                {"iterations", res.history.back().k},
                {"J", res.history.back().J},
                {"terminal_distance", dist}});
    std::printf("ocp: %s after %d sweeps, terminal distance %s\n", res.stop_reason.c_str(), res.history.back().k,
                fmt(dist).c_str());
    return 0;
}

int cmd_beam(const Options& o) {
    const Scenario s = resolve(o);
    const std::vector<BeamResult> rows = run_beam_benchmark(s);
    write(o, "beam.csv", beam_csv(rows));
    write_meta(o, s, "beam-benchmark", json::object());
    for (const BeamResult& r : rows)
        std::printf("nu=%-5g nx=%-3d x_cm=%-10.6f analytic=%-10.6f rel_error=%.4g\n", r.nu, r.nx, r.computed,
                    r.analytic, r.rel_error);
    return 0;
}

int cmd_audit(const Options& o) {
    constexpr double kThreshold = 1e-4;
    const std::vector<AuditEntry> rows = derivative_audit();
    std::filesystem::create_directories(o.out);
    write(o, "audit.csv", audit_csv(rows));
    bool ok = true;
    for (const AuditEntry& r : rows) {
        std::printf("%-28s %.3e\n", r.name.c_str(), r.max_rel_error);
        ok = ok && r.max_rel_error <= kThreshold;
    }
    std::printf("audit %s\n", ok ? "passed" : "FAILED");
    return ok ? 0 : 1;
}

int cmd_sweep(const Options& o) {
    const Scenario s = resolve(o);
    const std::vector<SweepRow> rows = run_sweep(s, o.threads);
    write(o, "sweep.csv", sweep_csv(rows));
    write_meta(o, s, "sweep", json::object());
    for (const SweepRow& r : rows)
        std::printf("ratio=%-6g gamma=%-6g f=%-6g dx=%s\n", r.ratio, r.gamma, r.f, fmt(r.dx).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Growth-driven soft-body locomotion: forward simulation and optimal control"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Scenario JSON file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "Output directory")->capture_default_str();
        sub->add_option("--preset", o.preset, "Built-in scenario used as the base");
        sub->add_option("--threads", o.threads, "Worker threads (sweep)")->check(CLI::PositiveNumber);
    };
    CLI::App* forward = app.add_subcommand("forward", "Simulate a prescribed gait");
    CLI::App* ocp = app.add_subcommand("ocp", "Optimise the growth history with the forward-backward sweep");
    CLI::App* beam = app.add_subcommand("beam-benchmark", "Tethered beam against the analytic arc");
    CLI::App* audit = app.add_subcommand("audit", "Finite-difference audit of all analytic derivatives");
    CLI::App* sweep = app.add_subcommand("sweep", "Gait sweep over anisotropy, wave number and frequency");
    for (CLI::App* sub : {forward, ocp, beam, audit, sweep}) add_common(sub);
    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(o.out);
        if (forward->parsed()) return cmd_forward(o);
        if (ocp->parsed()) return cmd_ocp(o);
        if (beam->parsed()) return cmd_beam(o);
        if (audit->parsed()) return cmd_audit(o);
        if (sweep->parsed()) return cmd_sweep(o);
    } catch (const std::exception& e) {
        const std::string text = error_json(e).dump(2);
        std::cerr << text << "\n";
        try {
            write(o, "error.json", text + "\n");
        } catch (...) {
        }
        return dynamic_cast<const ConfigError*>(&e) ? 2 : 3;
    }
    return 0;
}
