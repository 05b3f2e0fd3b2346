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

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "limbless/material.hpp"
#include "limbless/mesh.hpp"
#include "limbless/substrate.hpp"

namespace limbless {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Free/constrained bookkeeping over the 3 * n_nodes nodal DOFs. Constrained
/// DOFs keep their reference position and zero velocity; they never appear in
/// the free system.
class DofMap {
public:
    DofMap() = default;
    DofMap(int n_dofs, std::vector<int> constrained);

    int num_dofs() const { return static_cast<int>(free_index_.size()); }
    int num_free() const { return static_cast<int>(dof_of_free_.size()); }
    /// Free index of a global DOF, or -1 when constrained.
    int free_index(int dof) const { return free_index_[dof]; }
    int dof(int free) const { return dof_of_free_[free]; }
    const std::vector<int>& constrained() const { return constrained_; }

    Vector restrict_to_free(const Vector& full) const;
    /// Adds `delta_free` into the free entries of `full`.
    void add_free(Vector& full, const Vector& delta_free) const;

private:
    std::vector<int> free_index_;
    std::vector<int> dof_of_free_;
    std::vector<int> constrained_;
};

/// DOFs that pin the X coordinate of every node on the X = 0 face.
std::vector<int> clamp_left_face_axial(const Mesh& mesh);
/// Vertical DOFs of every bottom-face node (body confined to the substrate).
std::vector<int> clamp_bottom_vertical(const Mesh& mesh);
/// Vertical DOFs of the bottom nodes lying in the first and last `columns`
/// element columns (ends held on the substrate).
std::vector<int> clamp_end_columns_vertical(const Mesh& mesh, int columns);

enum class Polarity { antagonistic, synergistic };

/// One scalar control drives a set of elements with fixed signs.
struct ControlChannel {
    std::vector<std::pair<int, double>> elements;  // (element, sign)
    double s = 0.0;  // normalised arclength of the driven cross-section
};

struct ControlMap {
    std::vector<ControlChannel> channels;
    int num_channels() const { return static_cast<int>(channels.size()); }
    /// Per-element growth from channel values.
    Vector expand(const Vector& u_channels, int n_elements) const;
};

/// One channel per element, sign +1.
ControlMap per_element_controls(const Mesh& mesh);
/// One channel per longitudinal column: ventral elements get +u, dorsal ones
/// -u (antagonistic) or +u (synergistic). Requires a paired mesh.
ControlMap column_controls(const Mesh& mesh, Polarity polarity);
/// One channel per ventral/dorsal element pair.
ControlMap pair_controls(const Mesh& mesh, Polarity polarity);

struct PhysicalModel {
    MaterialParams material;
    FrictionParams friction;
    ViscousParams viscous;
    bool friction_enabled = true;
    /// +1: the forward tangent points along +X; -1: along -X.
    double heading = -1.0;
    /// Active contact facets (empty = all).
    std::vector<char> facet_active;
};

/// Requested outputs of one assembly pass.
struct AssemblyRequest {
    bool residual = true;
    bool K = false;
    bool G = false;
    bool B = false;
};

/// Quantities over the free DOFs. K and G share one fixed sparsity pattern.
struct AssembledSystem {
    Vector g;
    SparseMatrix K;
    SparseMatrix G;
    Matrix B;  // free DOFs x channels
};

class Assembler {
public:
    Assembler(const Mesh& mesh, PhysicalModel model, ControlMap controls, DofMap dofs);

    const Mesh& mesh() const { return *mesh_; }
    const PhysicalModel& model() const { return model_; }
    const ControlMap& controls() const { return controls_; }
    const DofMap& dofs() const { return dofs_; }
    int num_free() const { return dofs_.num_free(); }
    int num_channels() const { return controls_.num_channels(); }

    /// Reference nodal positions (3 * n_nodes).
    Vector reference_positions() const;

    /// Full-length x, v; channel controls u.
    AssembledSystem assemble(const Vector& x, const Vector& v, const Vector& u, const AssemblyRequest& req) const;
    Vector residual(const Vector& x, const Vector& v, const Vector& u) const;

    /// Empty matrix with the shared K/G pattern, values zero.
    const SparseMatrix& pattern() const { return pattern_; }

    /// Consistent scalar mass M^{ab} = int N^a N^b over the full mesh
    /// (n_nodes x n_nodes); the vector mass is M (x) I.
    const SparseMatrix& scalar_mass() const { return scalar_mass_; }

    /// Centroid operator Lambda (3 x 3 n_nodes): x_cm = Lambda x.
    const SparseMatrix& centroid_operator() const { return centroid_op_; }
    Vec3 centroid(const Vector& x) const;
    double reference_volume() const { return volume_; }

    /// Stored energy U = int J_g psi_e.
    double internal_energy(const Vector& x, const Vector& u) const;
    /// Viscous plus frictional power, int mu_o |v|^2 + int (-t . v).
    double dissipation_rate(const Vector& x, const Vector& v) const;

    double eps_geom() const { return 1e-10 * mesh_->length; }

private:
    struct VolumePoint {
        std::array<Vec3, 8> dNdX;
        std::array<double, 8> N;
        double weight;  // Gauss weight x reference Jacobian
    };
    struct SurfacePoint {
        std::array<double, 4> N;  // bottom-face corners 0..3
        double weight;
    };

    ElementTangent projected_tangent(const Vector& x, int element) const;

    const Mesh* mesh_;
    PhysicalModel model_;
    ControlMap controls_;
    DofMap dofs_;
    std::vector<std::vector<VolumePoint>> volume_points_;
    std::vector<std::vector<SurfacePoint>> surface_points_;  // per contact facet
    std::vector<std::vector<std::pair<int, double>>> element_channels_;  // element -> (channel, sign)

    SparseMatrix pattern_;
    // For each element, value-array offsets of the 24x24 free-free entries (-1 if constrained).
    std::vector<std::array<int, 24 * 24>> scatter_;
    SparseMatrix scalar_mass_;
    SparseMatrix centroid_op_;
    double volume_ = 0.0;
};

}  // namespace limbless
