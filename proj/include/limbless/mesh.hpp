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

#include <array>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace limbless {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Local corner numbering of the trilinear brick. Corner a sits at parametric
// (kCornerSign[a][0], kCornerSign[a][1], kCornerSign[a][2]); nodes 0..3 form
// the bottom face (zeta = -1) counter-clockwise seen from +z, 4..7 the top.
// The element tangent is taken along the edge 0 -> 1.
inline constexpr std::array<std::array<int, 3>, 8> kCornerSign{{
    {-1, -1, -1}, {+1, -1, -1}, {+1, +1, -1}, {-1, +1, -1},
    {-1, -1, +1}, {+1, -1, +1}, {+1, +1, +1}, {-1, +1, +1},
}};

enum class Chamber { ventral, dorsal };

/// Axis across which the body is split into ventral/dorsal halves.
/// `z` stacks the chambers vertically (bending out of the substrate plane),
/// `y` places them side by side (bending within the plane).
enum class ChamberAxis { y, z };

struct ContactFacet {
    int element = 0;
    std::array<int, 4> nodes{};   // global node indices (local corners 0..3)
    Vec3 normal = Vec3::Zero();   // outward reference normal
};

struct Mesh {
    double length = 0.0;
    double width = 0.0;
    int nx = 0, ny = 0, nz = 0;

    std::vector<Vec3> nodes;
    std::vector<std::array<int, 8>> elements;
    std::vector<ContactFacet> contact_facets;
    std::vector<Vec3> fiber_dir;

    ChamberAxis chamber_axis = ChamberAxis::z;
    std::vector<Chamber> chamber;
    /// Paired element in the opposite chamber, or -1 when the mesh was built
    /// without pairing.
    std::vector<int> partner;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }
    int num_dofs() const { return 3 * num_nodes(); }

    int node_index(int i, int j, int k) const { return i + (nx + 1) * (j + (ny + 1) * k); }
    int element_index(int i, int j, int k) const { return i + nx * (j + ny * k); }
    /// Longitudinal column (0..nx-1) containing element e.
    int column(int e) const { return e % nx; }
    Vec3 element_centroid(int e) const;
    bool paired() const { return !partner.empty() && partner.front() >= 0; }
};

struct BoxMeshSpec {
    double length = 10.0;
    double width = 1.0;
    int nx = 20, ny = 2, nz = 2;
    ChamberAxis chamber_axis = ChamberAxis::z;
    /// Split position as a fraction of the cross-section along chamber_axis.
    double ventral_split = 0.5;
    bool pair_chambers = true;
};

/// Structured L x B x B brick mesh on [0,L] x [0,B] x [0,B], nodes ordered
/// x-fastest. Contact facets cover the whole bottom face (z = 0) and every
/// fiber points along +X.
Mesh build_box_mesh(const BoxMeshSpec& spec);

// ---------------------------------------------------------------------------
// Quadrature and shape functions

struct QuadratureRule {
    std::vector<Vec3> points;
    std::vector<double> weights;
};

struct SurfaceRule {
    std::vector<Eigen::Vector2d> points;
    std::vector<double> weights;
};

/// 3x3x3 Gauss rule on [-1,1]^3 (weights sum to 8).
const QuadratureRule& gauss_hex27();
/// 3x3 Gauss rule on [-1,1]^2 (weights sum to 4).
const SurfaceRule& gauss_quad9();

struct ShapeValues {
    std::array<double, 8> N{};
    std::array<Vec3, 8> dN{};  // parametric gradients
};

ShapeValues shape_functions(const Vec3& xi);

struct ReferenceGradients {
    std::array<Vec3, 8> dNdX{};
    double det = 0.0;
};

/// Gradients of the shape functions with respect to reference coordinates at
/// the parametric point xi of `element`. Throws GeometryError if the
/// isoparametric map is singular or inverted there.
ReferenceGradients referential_gradients(const Mesh& mesh, int element, const Vec3& xi);

/// Parametric point on the bottom face (zeta = -1) for a 2D facet point.
inline Vec3 bottom_face_point(const Eigen::Vector2d& st) { return {st.x(), st.y(), -1.0}; }

/// Reference area element |dX/dxi x dX/deta| of the bottom face of `element`.
double bottom_face_jacobian(const Mesh& mesh, int element, const Eigen::Vector2d& st);

// ---------------------------------------------------------------------------
// Element tangent

struct ElementTangent {
    Vec3 tau = Vec3::Zero();
    Mat3 d_dx1 = Mat3::Zero();  // d tau / d x1
    Mat3 d_dx2 = Mat3::Zero();  // d tau / d x2
};

/// Unit vector from x1 to x2 with its derivatives. Throws GeometryError when
/// |x2 - x1| <= eps_geom.
ElementTangent element_tangent(const Vec3& x1, const Vec3& x2, double eps_geom);

nlohmann::json mesh_to_json(const Mesh& mesh);

}  // namespace limbless
