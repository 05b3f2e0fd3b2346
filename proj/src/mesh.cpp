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

#include "limbless/mesh.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "limbless/errors.hpp"

namespace limbless {

namespace {

constexpr std::array<double, 3> kGaussPoints{-0.77459666924148337704, 0.0, 0.77459666924148337704};
constexpr std::array<double, 3> kGaussWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

Mat3 parametric_jacobian(const Mesh& mesh, int element, const ShapeValues& sv) {
    Mat3 J = Mat3::Zero();
    const auto& conn = mesh.elements[element];
    for (int a = 0; a < 8; ++a) J += mesh.nodes[conn[a]] * sv.dN[a].transpose();
    return J;
}

}  // namespace

Vec3 Mesh::element_centroid(int e) const {
    Vec3 c = Vec3::Zero();
    for (int a : elements[e]) c += nodes[a];
    return c / 8.0;
}

Mesh build_box_mesh(const BoxMeshSpec& spec) {
    std::vector<std::string> problems;
    if (!(spec.length > 0.0)) problems.push_back("mesh.length must be positive");
    if (!(spec.width > 0.0)) problems.push_back("mesh.width must be positive");
    if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1) problems.push_back("mesh.nx, ny, nz must be >= 1");
    const int n_across = spec.chamber_axis == ChamberAxis::z ? spec.nz : spec.ny;
    if (spec.pair_chambers && n_across % 2 != 0)
        problems.push_back("chamber pairing needs an even element count across the chamber axis");
    if (!problems.empty()) throw ConfigError(problems);

    Mesh m;
    m.length = spec.length;
    m.width = spec.width;
    m.nx = spec.nx;
    m.ny = spec.ny;
    m.nz = spec.nz;
    m.chamber_axis = spec.chamber_axis;

    const double hx = spec.length / spec.nx;
    const double hy = spec.width / spec.ny;
    const double hz = spec.width / spec.nz;

    m.nodes.reserve(static_cast<size_t>((spec.nx + 1) * (spec.ny + 1) * (spec.nz + 1)));
    for (int k = 0; k <= spec.nz; ++k)
        for (int j = 0; j <= spec.ny; ++j)
            for (int i = 0; i <= spec.nx; ++i) m.nodes.emplace_back(i * hx, j * hy, k * hz);

    const int n_el = spec.nx * spec.ny * spec.nz;
    m.elements.reserve(n_el);
    for (int k = 0; k < spec.nz; ++k)
        for (int j = 0; j < spec.ny; ++j)
            for (int i = 0; i < spec.nx; ++i) {
                std::array<int, 8> conn{};
                for (int a = 0; a < 8; ++a) {
                    const int di = kCornerSign[a][0] > 0 ? 1 : 0;
                    const int dj = kCornerSign[a][1] > 0 ? 1 : 0;
                    const int dk = kCornerSign[a][2] > 0 ? 1 : 0;
                    conn[a] = m.node_index(i + di, j + dj, k + dk);
                }
                m.elements.push_back(conn);
            }

    for (int j = 0; j < spec.ny; ++j)
        for (int i = 0; i < spec.nx; ++i) {
            const int e = m.element_index(i, j, 0);
            const auto& conn = m.elements[e];
            m.contact_facets.push_back({e, {conn[0], conn[1], conn[2], conn[3]}, Vec3(0.0, 0.0, -1.0)});
        }

    m.fiber_dir.assign(n_el, Vec3::UnitX());

    m.chamber.resize(n_el);
    m.partner.assign(n_el, -1);
    const int axis = spec.chamber_axis == ChamberAxis::z ? 2 : 1;
    const double split = spec.ventral_split * spec.width;
    for (int e = 0; e < n_el; ++e)
        m.chamber[e] = m.element_centroid(e)[axis] > split ? Chamber::dorsal : Chamber::ventral;

    if (spec.pair_chambers) {
        for (int k = 0; k < spec.nz; ++k)
            for (int j = 0; j < spec.ny; ++j)
                for (int i = 0; i < spec.nx; ++i) {
                    const int e = m.element_index(i, j, k);
                    const int mirror = spec.chamber_axis == ChamberAxis::z
                                           ? m.element_index(i, j, spec.nz - 1 - k)
                                           : m.element_index(i, spec.ny - 1 - j, k);
                    m.partner[e] = mirror;
                }
        for (int e = 0; e < n_el; ++e) {
            if (m.chamber[e] == m.chamber[m.partner[e]]) {
                std::ostringstream os;
                os << "ventral_split " << spec.ventral_split << " does not separate element " << e
                   << " from its mirror";
                throw ConfigError({os.str()});
            }
        }
    }
    return m;
}

const QuadratureRule& gauss_hex27() {
    static const QuadratureRule rule = [] {
        QuadratureRule r;
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i) {
                    r.points.emplace_back(kGaussPoints[i], kGaussPoints[j], kGaussPoints[k]);
                    r.weights.push_back(kGaussWeights[i] * kGaussWeights[j] * kGaussWeights[k]);
                }
        return r;
    }();
    return rule;
}

const SurfaceRule& gauss_quad9() {
    static const SurfaceRule rule = [] {
        SurfaceRule r;
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                r.points.emplace_back(kGaussPoints[i], kGaussPoints[j]);
                r.weights.push_back(kGaussWeights[i] * kGaussWeights[j]);
            }
        return r;
    }();
    return rule;
}

ShapeValues shape_functions(const Vec3& xi) {
    ShapeValues sv;
    for (int a = 0; a < 8; ++a) {
        const double sx = kCornerSign[a][0], sy = kCornerSign[a][1], sz = kCornerSign[a][2];
        const double fx = 1.0 + sx * xi.x(), fy = 1.0 + sy * xi.y(), fz = 1.0 + sz * xi.z();
        sv.N[a] = 0.125 * fx * fy * fz;
        sv.dN[a] = 0.125 * Vec3(sx * fy * fz, sy * fx * fz, sz * fx * fy);
    }
    return sv;
}

ReferenceGradients referential_gradients(const Mesh& mesh, int element, const Vec3& xi) {
    const ShapeValues sv = shape_functions(xi);
    const Mat3 J = parametric_jacobian(mesh, element, sv);
    ReferenceGradients rg;
    rg.det = J.determinant();
    if (!(rg.det > 0.0)) {
        std::ostringstream os;
        os << "element " << element << " has non-positive reference Jacobian " << rg.det;
        throw GeometryError(os.str(), element);
    }
    const Mat3 Jinv_t = J.inverse().transpose();
    for (int a = 0; a < 8; ++a) rg.dNdX[a] = Jinv_t * sv.dN[a];
    return rg;
}

double bottom_face_jacobian(const Mesh& mesh, int element, const Eigen::Vector2d& st) {
    const ShapeValues sv = shape_functions(bottom_face_point(st));
    const Mat3 J = parametric_jacobian(mesh, element, sv);
    return J.col(0).cross(J.col(1)).norm();
}

ElementTangent element_tangent(const Vec3& x1, const Vec3& x2, double eps_geom) {
    const Vec3 d = x2 - x1;
    const double len = d.norm();
    if (!(len > eps_geom)) {
        std::ostringstream os;
        os << "degenerate element edge: |x2 - x1| = " << len;
        throw GeometryError(os.str(), -1);
    }
    ElementTangent t;
    t.tau = d / len;
    t.d_dx2 = (Mat3::Identity() - t.tau * t.tau.transpose()) / len;
    t.d_dx1 = -t.d_dx2;
    return t;
}

nlohmann::json mesh_to_json(const Mesh& mesh) {
    nlohmann::json j;
    j["length"] = mesh.length;
    j["width"] = mesh.width;
    j["grid"] = {mesh.nx, mesh.ny, mesh.nz};
    auto& nodes = j["nodes"] = nlohmann::json::array();
    for (const auto& p : mesh.nodes) nodes.push_back({p.x(), p.y(), p.z()});
    auto& els = j["elements"] = nlohmann::json::array();
    for (const auto& c : mesh.elements) els.push_back(c);
    auto& facets = j["contact_facets"] = nlohmann::json::array();
    for (const auto& f : mesh.contact_facets)
        facets.push_back({{"element", f.element},
                          {"nodes", f.nodes},
                          {"normal", {f.normal.x(), f.normal.y(), f.normal.z()}}});
    auto& ch = j["chamber"] = nlohmann::json::array();
    for (auto c : mesh.chamber) ch.push_back(c == Chamber::ventral ? "ventral" : "dorsal");
    j["partner"] = mesh.partner;
    return j;
}

}  // namespace limbless
