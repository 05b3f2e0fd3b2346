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


#include "limbless/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "limbless/errors.hpp"

namespace limbless {

using nlohmann::json;

namespace {

/// Reads typed fields from one JSON object, collecting problems instead of
/// throwing on the first one.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& problems)
        : j_(j), path_(std::move(path)), problems_(problems) {
        if (!j_.is_object()) problems_.push_back(path_ + " must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            problems_.push_back(path_ + "." + key + " has the wrong type");
        }
    }

    void get_vec3(const char* key, Vec3& out) {
        std::vector<double> v;
        const bool present = j_.is_object() && j_.contains(key);
        get(key, v);
        if (!present) return;
        if (v.size() != 3) {
            problems_.push_back(path_ + "." + key + " must have three entries");
            return;
        }
        out = Vec3(v[0], v[1], v[2]);
    }

    const json* child(const char* key) {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key)) return nullptr;
        return &j_.at(key);
    }

    void finish() {
        if (!j_.is_object()) return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) problems_.push_back("unknown key " + path_ + "." + it.key());
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

ChamberAxis parse_axis(const std::string& s, std::vector<std::string>& problems) {
    if (s == "y") return ChamberAxis::y;
    if (s == "z") return ChamberAxis::z;
    problems.push_back("mesh.chamber_axis must be \"y\" or \"z\"");
    return ChamberAxis::z;
}

ConstraintKind parse_constraint(const std::string& s, std::vector<std::string>& problems) {
    if (s == "none") return ConstraintKind::none;
    if (s == "bottom") return ConstraintKind::bottom;
    if (s == "ends") return ConstraintKind::ends;
    if (s == "left-axial") return ConstraintKind::left_axial;
    problems.push_back("constraints.kind must be none, bottom, ends or left-axial");
    return ConstraintKind::none;
}

std::string to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::none: return "none";
        case ConstraintKind::bottom: return "bottom";
        case ConstraintKind::ends: return "ends";
        case ConstraintKind::left_axial: return "left-axial";
    }
    return "?";
}

ControlLayout parse_layout(const std::string& s, std::vector<std::string>& problems) {
    if (s == "column") return ControlLayout::column;
    if (s == "pair") return ControlLayout::pair;
    if (s == "element") return ControlLayout::element;
    problems.push_back("controls.layout must be column, pair or element");
    return ControlLayout::column;
}

std::string to_string(ControlLayout l) {
    switch (l) {
        case ControlLayout::column: return "column";
        case ControlLayout::pair: return "pair";
        case ControlLayout::element: return "element";
    }
    return "?";
}

Polarity parse_polarity(const std::string& s, std::vector<std::string>& problems) {
    if (s == "antagonistic") return Polarity::antagonistic;
    if (s == "synergistic") return Polarity::synergistic;
    problems.push_back("controls.polarity must be antagonistic or synergistic");
    return Polarity::antagonistic;
}

Scenario base_gait(GaitKind kind) {
    Scenario s;
    GaitSpec g;
    g.kind = kind;
    s.model.heading = 1.0;
    s.polarity = gait_polarity(kind);
    switch (kind) {
        case GaitKind::undulatory:
            s.mesh.chamber_axis = ChamberAxis::y;
            s.model.friction.mu_l = 10.0;
            g.u_o = 0.3;
            g.f = 1.0;
            g.gamma = 1.0;
            break;
        case GaitKind::crawling:
            s.mesh.chamber_axis = ChamberAxis::y;
            s.model.friction.mu_b = 10.0;
            g.u_o = 0.3;
            g.f = 2.0;
            g.gamma = 1.0;
            break;
        case GaitKind::inching:
            s.mesh.chamber_axis = ChamberAxis::z;
            s.mesh.width = 0.5;
            s.constraint = ConstraintKind::ends;
            s.contact = "ends";
            s.model.friction.mu_b = 10.0;
            g.u_o = 0.75;
            g.f = 1.0;
            g.gamma = 0.5;
            g.n_strokes = 4;
            break;
    }
    s.gait = g;
    return s;
}

Scenario base_ocp(GaitKind kind) {
    Scenario s = base_gait(kind);
    s.gait.reset();
    s.model.heading = -1.0;
    s.ocp.x_d = Vec3(1.0, 0.5 * s.mesh.width, 0.5 * s.mesh.width);
    switch (kind) {
        case GaitKind::undulatory:
            break;
        case GaitKind::crawling:
            s.ocp.theta_policy = ThetaPolicy::constant;
            break;
        case GaitKind::inching:
            s.mesh.width = 1.0;
            s.ocp.x_d = Vec3(1.0, 0.5, 0.5);
            s.model.friction.mu_f = 0.0;
            s.model.friction.mu_b = 1.0;
            s.ocp.u_min = -0.3;
            s.ocp.u_max = 0.0;
            s.ocp.theta_policy = ThetaPolicy::constant;
            s.u0 = -0.01;
            break;
    }
    return s;
}

}  // namespace

int Scenario::steps() const { return static_cast<int>(std::lround(T / dt)); }

std::vector<double> Scenario::time_grid() const {
    std::vector<double> t(steps() + 1);
    for (size_t n = 0; n < t.size(); ++n) t[n] = static_cast<double>(n) * dt;
    return t;
}

std::vector<std::string> preset_names() {
    return {"undulatory-paper", "crawling-paper", "inching-paper", "undulatory-ocp-paper", "crawling-ocp-paper", "inching-ocp-paper",
            "scaled-paper", "beam-paper"};
}

Scenario preset(const std::string& name) {
    Scenario s;
    if (name == "undulatory-paper") s = base_gait(GaitKind::undulatory);
    else if (name == "crawling-paper") s = base_gait(GaitKind::crawling);
    else if (name == "inching-paper") s = base_gait(GaitKind::inching);
    else if (name == "undulatory-ocp-paper") s = base_ocp(GaitKind::undulatory);
    else if (name == "crawling-ocp-paper") s = base_ocp(GaitKind::crawling);
    else if (name == "inching-ocp-paper") s = base_ocp(GaitKind::inching);
    else if (name == "scaled-paper") {
        s = base_ocp(GaitKind::undulatory);
        s.mesh.length = 20.0;
        s.mesh.width = 2.0;
        s.ocp.x_d = Vec3(5.0, 1.0, 1.0);
    } else if (name == "beam-paper") {
        s.mesh.chamber_axis = ChamberAxis::z;
        s.model.friction_enabled = false;
        s.constraint = ConstraintKind::left_axial;
        s.scheme = "implicit-euler";
    } else {
        throw ConfigError({"unknown preset '" + name + "'"});
    }
    s.name = name;
    s.newton.tol = 1e-8 * s.model.material.mu * s.mesh.width * s.mesh.width;
    return s;
}

Scenario scenario_from_json(const json& j) {
    std::vector<std::string> problems;
    Scenario s;
    if (j.is_object() && j.contains("preset")) {
        try {
            s = preset(j.at("preset").get<std::string>());
        } catch (const ConfigError& e) {
            problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        } catch (const json::exception&) {
            problems.push_back("preset must be a string");
        }
    }
    Reader top(j, "scenario", problems);
    std::string preset_name;
    top.get("preset", preset_name);
    top.get("name", s.name);
    top.child("meta");

    if (const json* m = top.child("mesh")) {
        Reader r(*m, "mesh", problems);
        r.get("length", s.mesh.length);
        r.get("width", s.mesh.width);
        r.get("nx", s.mesh.nx);
        r.get("ny", s.mesh.ny);
        r.get("nz", s.mesh.nz);
        std::string axis;
        r.get("chamber_axis", axis);
        if (!axis.empty()) s.mesh.chamber_axis = parse_axis(axis, problems);
        r.get("ventral_split", s.mesh.ventral_split);
        r.finish();
    }
    if (const json* m = top.child("material")) {
        Reader r(*m, "material", problems);
        r.get("mu", s.model.material.mu);
        r.get("lambda", s.model.material.lambda);
        r.finish();
    }
    if (const json* m = top.child("substrate")) {
        Reader r(*m, "substrate", problems);
        r.get("mu_l", s.model.friction.mu_l);
        r.get("mu_f", s.model.friction.mu_f);
        r.get("mu_b", s.model.friction.mu_b);
        r.get("beta", s.model.friction.beta);
        r.get("mu_o", s.model.viscous.mu_o);
        r.get("friction", s.model.friction_enabled);
        r.get("heading", s.model.heading);
        r.get("contact", s.contact);
        r.finish();
    }
    if (const json* m = top.child("constraints")) {
        Reader r(*m, "constraints", problems);
        std::string kind;
        r.get("kind", kind);
        if (!kind.empty()) s.constraint = parse_constraint(kind, problems);
        r.get("columns", s.clamp_columns);
        r.finish();
    }
    bool tol_given = false;
    if (const json* m = top.child("time")) {
        Reader r(*m, "time", problems);
        r.get("T", s.T);
        r.get("dt", s.dt);
        r.get("scheme", s.scheme);
        tol_given = m->is_object() && m->contains("newton_tol");
        r.get("newton_tol", s.newton.tol);
        r.get("newton_max_iter", s.newton.max_iter);
        r.get("max_halvings", s.newton.max_halvings);
        r.finish();
    }
    if (!tol_given) s.newton.tol = 1e-8 * s.model.material.mu * s.mesh.width * s.mesh.width;
    if (const json* m = top.child("controls")) {
        Reader r(*m, "controls", problems);
        std::string layout, pol;
        r.get("layout", layout);
        r.get("polarity", pol);
        if (!layout.empty()) s.layout = parse_layout(layout, problems);
        if (!pol.empty()) s.polarity = parse_polarity(pol, problems);
        r.finish();
    }
    if (const json* m = top.child("gait")) {
        if (m->is_null()) {
            s.gait.reset();
        } else {
            Reader r(*m, "gait", problems);
            GaitSpec g = s.gait.value_or(GaitSpec{});
            std::string kind;
            r.get("kind", kind);
            if (!kind.empty()) {
                try {
                    g.kind = gait_kind(kind);
                } catch (const ConfigError& e) {
                    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
                }
            }
            r.get("u_o", g.u_o);
            r.get("f", g.f);
            r.get("gamma", g.gamma);
            r.get("n_strokes", g.n_strokes);
            r.finish();
            s.gait = g;
        }
    }
    if (const json* m = top.child("ocp")) {
        Reader r(*m, "ocp", problems);
        r.get_vec3("x_d", s.ocp.x_d);
        r.get("alpha", s.ocp.alpha);
        r.get("u_min", s.ocp.u_min);
        r.get("u_max", s.ocp.u_max);
        r.get("tol", s.ocp.tol);
        r.get("max_sweeps", s.ocp.max_sweeps);
        r.get("theta_max", s.ocp.theta_max);
        r.get("max_rejections", s.ocp.max_rejections);
        std::string policy;
        r.get("theta_policy", policy);
        if (!policy.empty()) {
            try {
                s.ocp.theta_policy = theta_policy(policy);
            } catch (const ConfigError& e) {
                problems.insert(problems.end(), e.problems().begin(), e.problems().end());
            }
        }
        r.get("u0", s.u0);
        r.finish();
    }
    if (const json* m = top.child("sweep")) {
        Reader r(*m, "sweep", problems);
        r.get("ratios", s.sweep_ratios);
        r.get("gamma", s.sweep_gamma);
        r.get("f", s.sweep_f);
        r.finish();
    }
    if (const json* m = top.child("beam")) {
        Reader r(*m, "beam", problems);
        r.get("nu", s.beam_nu);
        r.get("nx", s.beam_nx);
        r.finish();
    }
    if (const json* m = top.child("output")) {
        Reader r(*m, "output", problems);
        r.get("state_stride", s.state_stride);
        r.finish();
    }
    top.finish();
    if (!problems.empty()) throw ConfigError(problems);
    validate(s);
    return s;
}

void validate(const Scenario& s) {
    std::vector<std::string> problems;
    auto collect = [&](auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        }
    };
    if (!(s.T > 0.0)) problems.push_back("time.T must be positive");
    if (!(s.dt > 0.0)) problems.push_back("time.dt must be positive");
    if (s.T > 0.0 && s.dt > 0.0 && std::abs(s.steps() * s.dt - s.T) > 1e-9 * s.T)
        problems.push_back("time.T must be an integer multiple of time.dt");
    if (!(s.model.material.mu > 0.0)) problems.push_back("material.mu must be positive");
    if (!(s.model.material.lambda >= 0.0)) problems.push_back("material.lambda must be non-negative");
    const FrictionParams& fp = s.model.friction;
    if (!(fp.mu_l >= 0.0 && fp.mu_f >= 0.0 && fp.mu_b >= 0.0))
        problems.push_back("substrate friction coefficients must be non-negative");
    if (!(fp.beta > 0.0)) problems.push_back("substrate.beta must be positive");
    if (!(s.model.viscous.mu_o > 0.0)) problems.push_back("substrate.mu_o must be positive");
    if (std::abs(s.model.heading) != 1.0) problems.push_back("substrate.heading must be +1 or -1");
    if (s.contact != "all" && s.contact != "ends") problems.push_back("substrate.contact must be all or ends");
    if (s.clamp_columns < 1) problems.push_back("constraints.columns must be >= 1");
    if (s.state_stride < 0) problems.push_back("output.state_stride must be >= 0");
    if (s.sweep_ratios.empty()) problems.push_back("sweep.ratios must not be empty");
    for (double r : s.sweep_ratios)
        if (!(r > 0.0)) problems.push_back("sweep.ratios must be positive");
    for (double g : s.sweep_gamma)
        if (!(g > 0.0)) problems.push_back("sweep.gamma must be positive");
    for (double f : s.sweep_f)
        if (!(f > 0.0)) problems.push_back("sweep.f must be positive");
    for (double nu : s.beam_nu)
        if (!(nu > 0.0)) problems.push_back("beam.nu must be positive");
    for (int nx : s.beam_nx)
        if (nx < 1) problems.push_back("beam.nx must be >= 1");
    if (s.layout != ControlLayout::element && s.gait && gait_polarity(s.gait->kind) != s.polarity)
        problems.push_back("controls.polarity does not match the gait");
    collect([&] { validate(tau_scheme(s.scheme)); });
    if (s.gait) collect([&] { validate(*s.gait); });
    collect([&] { validate(s.ocp); });
    if (!(s.newton.tol > 0.0)) problems.push_back("time.newton_tol must be positive");
    if (s.newton.max_iter < 1) problems.push_back("time.newton_max_iter must be >= 1");
    if (!problems.empty()) throw ConfigError(problems);
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["mesh"] = {{"length", s.mesh.length},
                 {"width", s.mesh.width},
                 {"nx", s.mesh.nx},
                 {"ny", s.mesh.ny},
                 {"nz", s.mesh.nz},
                 {"chamber_axis", s.mesh.chamber_axis == ChamberAxis::y ? "y" : "z"},
                 {"ventral_split", s.mesh.ventral_split}};
    j["material"] = {{"mu", s.model.material.mu}, {"lambda", s.model.material.lambda}};
    const FrictionParams& fp = s.model.friction;
    j["substrate"] = {{"mu_l", fp.mu_l},
                      {"mu_f", fp.mu_f},
                      {"mu_b", fp.mu_b},
                      {"beta", fp.beta},
                      {"mu_o", s.model.viscous.mu_o},
                      {"friction", s.model.friction_enabled},
                      {"heading", s.model.heading},
                      {"contact", s.contact}};
    j["constraints"] = {{"kind", to_string(s.constraint)}, {"columns", s.clamp_columns}};
    j["time"] = {{"T", s.T},
                 {"dt", s.dt},
                 {"scheme", s.scheme},
                 {"newton_tol", s.newton.tol},
                 {"newton_max_iter", s.newton.max_iter},
                 {"max_halvings", s.newton.max_halvings}};
    j["controls"] = {{"layout", to_string(s.layout)},
                     {"polarity", s.polarity == Polarity::antagonistic ? "antagonistic" : "synergistic"}};
    if (s.gait)
        j["gait"] = {{"kind", to_string(s.gait->kind)},
                     {"u_o", s.gait->u_o},
                     {"f", s.gait->f},
                     {"gamma", s.gait->gamma},
                     {"n_strokes", s.gait->n_strokes}};
    else
        j["gait"] = nullptr;
    j["ocp"] = {{"x_d", {s.ocp.x_d.x(), s.ocp.x_d.y(), s.ocp.x_d.z()}},
                {"alpha", s.ocp.alpha},
                {"u_min", s.ocp.u_min},
                {"u_max", s.ocp.u_max},
                {"tol", s.ocp.tol},
                {"max_sweeps", s.ocp.max_sweeps},
                {"theta_max", s.ocp.theta_max},
                {"max_rejections", s.ocp.max_rejections},
                {"theta_policy", s.ocp.theta_policy == ThetaPolicy::constant ? "constant" : "bb"},
                {"u0", s.u0}};
    j["sweep"] = {{"ratios", s.sweep_ratios}, {"gamma", s.sweep_gamma}, {"f", s.sweep_f}};
    j["beam"] = {{"nu", s.beam_nu}, {"nx", s.beam_nx}};
    j["output"] = {{"state_stride", s.state_stride}};
    return j;
}

void apply_anisotropy(Scenario& s, double ratio) {
    if (!(ratio > 0.0)) throw ConfigError({"anisotropy ratio must be positive"});
    FrictionParams& fp = s.model.friction;
    if (s.gait && s.gait->kind == GaitKind::undulatory) {
        fp.mu_b = fp.mu_f;
        fp.mu_l = ratio * fp.mu_f;
    } else {
        fp.mu_b = ratio * fp.mu_f;
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    return scenario_from_json(j);
}

Problem::Problem(Scenario scenario) : scenario_(std::move(scenario)) {
    validate(scenario_);
    BoxMeshSpec spec = scenario_.mesh;
    spec.pair_chambers = scenario_.layout != ControlLayout::element;
    mesh_ = build_box_mesh(spec);

    PhysicalModel model = scenario_.model;
    if (scenario_.contact == "ends") {
        model.facet_active.assign(mesh_.contact_facets.size(), 0);
        for (size_t f = 0; f < mesh_.contact_facets.size(); ++f) {
            const int col = mesh_.column(mesh_.contact_facets[f].element);
            model.facet_active[f] = col < scenario_.clamp_columns || col >= mesh_.nx - scenario_.clamp_columns;
        }
    }

    std::vector<int> fixed;
    switch (scenario_.constraint) {
        case ConstraintKind::none: break;
        case ConstraintKind::bottom: fixed = clamp_bottom_vertical(mesh_); break;
        case ConstraintKind::ends: fixed = clamp_end_columns_vertical(mesh_, scenario_.clamp_columns); break;
        case ConstraintKind::left_axial: fixed = clamp_left_face_axial(mesh_); break;
    }

    ControlMap controls;
    switch (scenario_.layout) {
        case ControlLayout::column: controls = column_controls(mesh_, scenario_.polarity); break;
        case ControlLayout::pair: controls = pair_controls(mesh_, scenario_.polarity); break;
        case ControlLayout::element: controls = per_element_controls(mesh_); break;
    }
    assembler_ = std::make_unique<Assembler>(mesh_, std::move(model), std::move(controls),
                                             DofMap(mesh_.num_dofs(), std::move(fixed)));
    solver_ = std::make_unique<ForwardSolver>(*assembler_, tau_scheme(scenario_.scheme), scenario_.newton,
                                              scenario_.dt);
}

Matrix Problem::gait_controls() const {
    if (!scenario_.gait) throw ConfigError({"scenario has no gait block"});
    if (scenario_.layout == ControlLayout::element) throw ConfigError({"gaits need column or pair controls"});
    return sample_to_channels(*scenario_.gait, assembler_->controls(), scenario_.time_grid());
}

}  // namespace limbless
