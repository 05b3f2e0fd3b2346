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

#include "limbless/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "limbless/errors.hpp"

namespace limbless {

namespace {

using Mat24 = Eigen::Matrix<double, 24, 24>;
using Vec24 = Eigen::Matrix<double, 24, 1>;

Vec3 node_value(const Vector& x, int node) { return x.segment<3>(3 * node); }

}  // namespace

// ---------------------------------------------------------------------------
// DofMap

DofMap::DofMap(int n_dofs, std::vector<int> constrained) : free_index_(n_dofs, 0) {
    std::sort(constrained.begin(), constrained.end());
    constrained.erase(std::unique(constrained.begin(), constrained.end()), constrained.end());
    for (int d : constrained) {
        if (d < 0 || d >= n_dofs) throw ConfigError({"constrained DOF out of range"});
        free_index_[d] = -1;
    }
    constrained_ = std::move(constrained);
    for (int d = 0; d < n_dofs; ++d) {
        if (free_index_[d] < 0) continue;
        free_index_[d] = static_cast<int>(dof_of_free_.size());
        dof_of_free_.push_back(d);
    }
}

Vector DofMap::restrict_to_free(const Vector& full) const {
    Vector out(num_free());
    for (int i = 0; i < num_free(); ++i) out[i] = full[dof_of_free_[i]];
    return out;
}

void DofMap::add_free(Vector& full, const Vector& delta_free) const {
    for (int i = 0; i < num_free(); ++i) full[dof_of_free_[i]] += delta_free[i];
}

std::vector<int> clamp_left_face_axial(const Mesh& mesh) {
    std::vector<int> out;
    for (int k = 0; k <= mesh.nz; ++k)
        for (int j = 0; j <= mesh.ny; ++j) out.push_back(3 * mesh.node_index(0, j, k));
    return out;
}

std::vector<int> clamp_bottom_vertical(const Mesh& mesh) {
    std::vector<int> out;
    for (int j = 0; j <= mesh.ny; ++j)
        for (int i = 0; i <= mesh.nx; ++i) out.push_back(3 * mesh.node_index(i, j, 0) + 2);
    return out;
}

std::vector<int> clamp_end_columns_vertical(const Mesh& mesh, int columns) {
    if (columns < 1 || 2 * columns > mesh.nx) throw ConfigError({"clamped end columns must be in [1, nx/2]"});
    std::vector<int> out;
    for (int j = 0; j <= mesh.ny; ++j)
        for (int i = 0; i <= mesh.nx; ++i)
            if (i <= columns || i >= mesh.nx - columns) out.push_back(3 * mesh.node_index(i, j, 0) + 2);
    return out;
}

// ---------------------------------------------------------------------------
// Controls

Vector ControlMap::expand(const Vector& u_channels, int n_elements) const {
    Vector u = Vector::Zero(n_elements);
    for (int c = 0; c < num_channels(); ++c)
        for (const auto& [e, sign] : channels[c].elements) u[e] += sign * u_channels[c];
    return u;
}

ControlMap per_element_controls(const Mesh& mesh) {
    ControlMap map;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        ControlChannel ch;
        ch.elements.emplace_back(e, 1.0);
        ch.s = mesh.element_centroid(e).x() / mesh.length;
        map.channels.push_back(std::move(ch));
    }
    return map;
}

ControlMap column_controls(const Mesh& mesh, Polarity polarity) {
    if (!mesh.paired()) throw ConfigError({"column controls need a mesh with paired chambers"});
    const double dorsal_sign = polarity == Polarity::antagonistic ? -1.0 : 1.0;
    ControlMap map;
    map.channels.resize(mesh.nx);
    for (int i = 0; i < mesh.nx; ++i) map.channels[i].s = (i + 0.5) / mesh.nx;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double sign = mesh.chamber[e] == Chamber::ventral ? 1.0 : dorsal_sign;
        map.channels[mesh.column(e)].elements.emplace_back(e, sign);
    }
    return map;
}

ControlMap pair_controls(const Mesh& mesh, Polarity polarity) {
    if (!mesh.paired()) throw ConfigError({"pair controls need a mesh with paired chambers"});
    const double dorsal_sign = polarity == Polarity::antagonistic ? -1.0 : 1.0;
    ControlMap map;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        if (mesh.chamber[e] != Chamber::ventral) continue;
        ControlChannel ch;
        ch.elements.emplace_back(e, 1.0);
        ch.elements.emplace_back(mesh.partner[e], dorsal_sign);
        ch.s = mesh.element_centroid(e).x() / mesh.length;
        map.channels.push_back(std::move(ch));
    }
    return map;
}

// ---------------------------------------------------------------------------
// Assembler

Assembler::Assembler(const Mesh& mesh, PhysicalModel model, ControlMap controls, DofMap dofs)
    : mesh_(&mesh), model_(std::move(model)), controls_(std::move(controls)), dofs_(std::move(dofs)) {
    if (dofs_.num_dofs() != mesh.num_dofs()) throw ConfigError({"DOF map does not match the mesh"});
    if (!model_.facet_active.empty() && model_.facet_active.size() != mesh.contact_facets.size())
        throw ConfigError({"contact mask size does not match the contact facets"});

    const int n_el = mesh.num_elements();
    const auto& rule = gauss_hex27();
    volume_points_.resize(n_el);
    for (int e = 0; e < n_el; ++e) {
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const ReferenceGradients rg = referential_gradients(mesh, e, rule.points[q]);
            VolumePoint vp;
            vp.dNdX = rg.dNdX;
            vp.N = shape_functions(rule.points[q]).N;
            vp.weight = rule.weights[q] * rg.det;
            volume_points_[e].push_back(vp);
        }
    }

    const auto& srule = gauss_quad9();
    surface_points_.resize(mesh.contact_facets.size());
    for (size_t f = 0; f < mesh.contact_facets.size(); ++f) {
        const int e = mesh.contact_facets[f].element;
        for (size_t q = 0; q < srule.points.size(); ++q) {
            const ShapeValues sv = shape_functions(bottom_face_point(srule.points[q]));
            SurfacePoint sp;
            for (int a = 0; a < 4; ++a) sp.N[a] = sv.N[a];
            sp.weight = srule.weights[q] * bottom_face_jacobian(mesh, e, srule.points[q]);
            surface_points_[f].push_back(sp);
        }
    }

    element_channels_.resize(n_el);
    for (int c = 0; c < controls_.num_channels(); ++c)
        for (const auto& [e, sign] : controls_.channels[c].elements) {
            if (e < 0 || e >= n_el) throw ConfigError({"control channel references a missing element"});
            element_channels_[e].emplace_back(c, sign);
        }

    // Shared K/G pattern: every free-free pair inside one element.
    const int nf = dofs_.num_free();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n_el) * 24 * 24);
    for (int e = 0; e < n_el; ++e) {
        const auto& conn = mesh.elements[e];
        for (int i = 0; i < 24; ++i) {
            const int fi = dofs_.free_index(3 * conn[i / 3] + i % 3);
            if (fi < 0) continue;
            for (int j = 0; j < 24; ++j) {
                const int fj = dofs_.free_index(3 * conn[j / 3] + j % 3);
                if (fj >= 0) trip.emplace_back(fi, fj, 0.0);
            }
        }
    }
    pattern_.resize(nf, nf);
    pattern_.setFromTriplets(trip.begin(), trip.end());
    pattern_.makeCompressed();

    const int* outer = pattern_.outerIndexPtr();
    const int* inner = pattern_.innerIndexPtr();
    scatter_.resize(n_el);
    for (int e = 0; e < n_el; ++e) {
        const auto& conn = mesh.elements[e];
        for (int i = 0; i < 24; ++i) {
            const int fi = dofs_.free_index(3 * conn[i / 3] + i % 3);
            for (int j = 0; j < 24; ++j) {
                const int fj = dofs_.free_index(3 * conn[j / 3] + j % 3);
                int pos = -1;
                if (fi >= 0 && fj >= 0) {
                    const int* it = std::lower_bound(inner + outer[fj], inner + outer[fj + 1], fi);
                    pos = static_cast<int>(it - inner);
                }
                scatter_[e][i * 24 + j] = pos;
            }
        }
    }

    // Scalar mass and centroid operator.
    const int nn = mesh.num_nodes();
    std::vector<Eigen::Triplet<double>> mtrip;
    Vector node_weight = Vector::Zero(nn);
    volume_ = 0.0;
    for (int e = 0; e < n_el; ++e) {
        const auto& conn = mesh.elements[e];
        for (const auto& vp : volume_points_[e]) {
            volume_ += vp.weight;
            for (int a = 0; a < 8; ++a) {
                node_weight[conn[a]] += vp.weight * vp.N[a];
                for (int b = 0; b < 8; ++b) mtrip.emplace_back(conn[a], conn[b], vp.weight * vp.N[a] * vp.N[b]);
            }
        }
    }
    scalar_mass_.resize(nn, nn);
    scalar_mass_.setFromTriplets(mtrip.begin(), mtrip.end());

    std::vector<Eigen::Triplet<double>> ctrip;
    for (int a = 0; a < nn; ++a)
        for (int i = 0; i < 3; ++i) ctrip.emplace_back(i, 3 * a + i, node_weight[a] / volume_);
    centroid_op_.resize(3, 3 * nn);
    centroid_op_.setFromTriplets(ctrip.begin(), ctrip.end());
}

Vector Assembler::reference_positions() const {
    Vector x(mesh_->num_dofs());
    for (int a = 0; a < mesh_->num_nodes(); ++a) x.segment<3>(3 * a) = mesh_->nodes[a];
    return x;
}

Vec3 Assembler::centroid(const Vector& x) const { return centroid_op_ * x; }

ElementTangent Assembler::projected_tangent(const Vector& x, int element) const {
    const auto& conn = mesh_->elements[element];
    const Vec3& n = model_.friction.normal;
    const Mat3 P = Mat3::Identity() - n * n.transpose();
    ElementTangent t;
    try {
        t = element_tangent(P * node_value(x, conn[0]), P * node_value(x, conn[1]), eps_geom());
    } catch (const GeometryError&) {
        std::ostringstream os;
        os << "element " << element << " edge collapsed in the substrate plane";
        throw GeometryError(os.str(), element);
    }
    const double h = model_.heading;
    t.tau *= h;
    t.d_dx1 = h * t.d_dx1 * P;
    t.d_dx2 = h * t.d_dx2 * P;
    return t;
}

AssembledSystem Assembler::assemble(const Vector& x, const Vector& v, const Vector& u,
                                    const AssemblyRequest& req) const {
    const Mesh& mesh = *mesh_;
    const int nf = dofs_.num_free();
    const int n_el = mesh.num_elements();
    if (x.size() != mesh.num_dofs() || v.size() != mesh.num_dofs())
        throw Error("assemble: state vectors have the wrong length");
    if (u.size() != controls_.num_channels()) throw Error("assemble: control vector has the wrong length");

    const Vector u_el = controls_.expand(u, n_el);
    const MaterialParams& mp = model_.material;
    const double mu_o = model_.viscous.mu_o;

    AssembledSystem out;
    if (req.residual) out.g = Vector::Zero(nf);
    const bool need_matrix = req.K || req.G;
    std::vector<double> kval, gval;
    if (req.K) kval.assign(pattern_.nonZeros(), 0.0);
    if (req.G) gval.assign(pattern_.nonZeros(), 0.0);
    if (req.B) out.B = Matrix::Zero(nf, controls_.num_channels());

    // Facets grouped by element.
    std::vector<std::vector<int>> facets_of(n_el);
    if (model_.friction_enabled)
        for (size_t f = 0; f < mesh.contact_facets.size(); ++f)
            if (model_.facet_active.empty() || model_.facet_active[f])
                facets_of[mesh.contact_facets[f].element].push_back(static_cast<int>(f));

    Mat24 Ke, Ge;
    Vec24 ge, be;
    for (int e = 0; e < n_el; ++e) {
        const auto& conn = mesh.elements[e];
        std::array<Vec3, 8> xe, ve;
        for (int a = 0; a < 8; ++a) {
            xe[a] = node_value(x, conn[a]);
            ve[a] = node_value(v, conn[a]);
        }
        ge.setZero();
        be.setZero();
        if (need_matrix) {
            Ke.setZero();
            Ge.setZero();
        }

        const GrowthPoint gp = growth_tensors(u_el[e], mesh.fiber_dir[e]);
        for (const auto& vp : volume_points_[e]) {
            Mat3 F = Mat3::Zero();
            Vec3 vq = Vec3::Zero();
            for (int a = 0; a < 8; ++a) {
                F += xe[a] * vp.dNdX[a].transpose();
                vq += vp.N[a] * ve[a];
            }
            const StressState s = neo_hookean(F, gp, mp, e);
            const double w = vp.weight;
            for (int a = 0; a < 8; ++a) ge.segment<3>(3 * a) += w * (s.P * vp.dNdX[a] + mu_o * vp.N[a] * vq);

            if (req.B && !element_channels_[e].empty()) {
                const ControlDerivatives cd = control_derivatives(s, gp, mp);
                for (int a = 0; a < 8; ++a) be.segment<3>(3 * a) += w * cd.dP_du * vp.dNdX[a];
            }
            if (req.K) {
                const double c = mp.lambda * s.log_Je - mp.mu;
                std::array<Vec3, 8> f, g;
                for (int a = 0; a < 8; ++a) {
                    f[a] = s.Fe_inv_t * (gp.Fg_inv.transpose() * vp.dNdX[a]);
                    g[a] = gp.Fg_inv.transpose() * vp.dNdX[a];
                }
                // F_e^{-T} F_g^{-T} = F^{-T}, so f = F^{-T} grad N.
                const double wj = w * gp.Jg;
                for (int a = 0; a < 8; ++a)
                    for (int d = 0; d < 8; ++d) {
                        Mat3 blk = (mp.mu * g[a].dot(g[d])) * Mat3::Identity() +
                                   mp.lambda * f[a] * f[d].transpose() - c * f[d] * f[a].transpose();
                        Ke.block<3, 3>(3 * a, 3 * d) += wj * blk;
                    }
            }
            if (req.G) {
                for (int a = 0; a < 8; ++a)
                    for (int b = 0; b < 8; ++b)
                        Ge.block<3, 3>(3 * a, 3 * b).diagonal().array() += w * mu_o * vp.N[a] * vp.N[b];
            }
        }

        if (!facets_of[e].empty()) {
            const ElementTangent tg = projected_tangent(x, e);
            for (int f : facets_of[e]) {
                for (const auto& sp : surface_points_[f]) {
                    Vec3 vq = Vec3::Zero();
                    for (int a = 0; a < 4; ++a) vq += sp.N[a] * ve[a];
                    const Traction tr = traction(vq, tg.tau, model_.friction);
                    const double w = sp.weight;
                    for (int a = 0; a < 4; ++a) ge.segment<3>(3 * a) -= w * sp.N[a] * tr.t;
                    if (req.G)
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b)
                                Ge.block<3, 3>(3 * a, 3 * b) -= w * sp.N[a] * sp.N[b] * tr.d_dv;
                    if (req.K) {
                        const Mat3 k0 = tr.d_dtau * tg.d_dx1;
                        const Mat3 k1 = tr.d_dtau * tg.d_dx2;
                        for (int a = 0; a < 4; ++a) {
                            Ke.block<3, 3>(3 * a, 0) -= w * sp.N[a] * k0;
                            Ke.block<3, 3>(3 * a, 3) -= w * sp.N[a] * k1;
                        }
                    }
                }
            }
        }

        const auto& sc = scatter_[e];
        for (int i = 0; i < 24; ++i) {
            const int fi = dofs_.free_index(3 * conn[i / 3] + i % 3);
            if (fi < 0) continue;
            if (req.residual) out.g[fi] += ge[i];
            if (req.B)
                for (const auto& [c, sign] : element_channels_[e]) out.B(fi, c) += sign * be[i];
            if (!need_matrix) continue;
            for (int j = 0; j < 24; ++j) {
                const int pos = sc[i * 24 + j];
                if (pos < 0) continue;
                if (req.K) kval[pos] += Ke(i, j);
                if (req.G) gval[pos] += Ge(i, j);
            }
        }
    }

    if (req.K) {
        out.K = pattern_;
        std::copy(kval.begin(), kval.end(), out.K.valuePtr());
    }
    if (req.G) {
        out.G = pattern_;
        std::copy(gval.begin(), gval.end(), out.G.valuePtr());
    }
    return out;
}

Vector Assembler::residual(const Vector& x, const Vector& v, const Vector& u) const {
    return assemble(x, v, u, AssemblyRequest{}).g;
}

double Assembler::internal_energy(const Vector& x, const Vector& u) const {
    const Mesh& mesh = *mesh_;
    const Vector u_el = controls_.expand(u, mesh.num_elements());
    double U = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& conn = mesh.elements[e];
        const GrowthPoint gp = growth_tensors(u_el[e], mesh.fiber_dir[e]);
        for (const auto& vp : volume_points_[e]) {
            Mat3 F = Mat3::Zero();
            for (int a = 0; a < 8; ++a) F += node_value(x, conn[a]) * vp.dNdX[a].transpose();
            U += vp.weight * neo_hookean(F, gp, model_.material, e).psi;
        }
    }
    return U;
}

double Assembler::dissipation_rate(const Vector& x, const Vector& v) const {
    const Mesh& mesh = *mesh_;
    double p = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& conn = mesh.elements[e];
        for (const auto& vp : volume_points_[e]) {
            Vec3 vq = Vec3::Zero();
            for (int a = 0; a < 8; ++a) vq += vp.N[a] * node_value(v, conn[a]);
            p += vp.weight * model_.viscous.mu_o * vq.squaredNorm();
        }
    }
    if (!model_.friction_enabled) return p;
    for (size_t f = 0; f < mesh.contact_facets.size(); ++f) {
        if (!model_.facet_active.empty() && !model_.facet_active[f]) continue;
        const int e = mesh.contact_facets[f].element;
        const auto& conn = mesh.elements[e];
        const Vec3 tau = projected_tangent(x, e).tau;
        for (const auto& sp : surface_points_[f]) {
            Vec3 vq = Vec3::Zero();
            for (int a = 0; a < 4; ++a) vq += sp.N[a] * node_value(v, conn[a]);
            p -= sp.weight * traction(vq, tau, model_.friction).t.dot(vq);
        }
    }
    return p;
}

}  // namespace limbless
