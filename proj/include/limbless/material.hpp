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

#include "limbless/mesh.hpp"

namespace limbless {

struct MaterialParams {
    double mu = 100.0;      // shear modulus
    double lambda = 10.0;   // bulk-type Lame parameter
};

/// Fiber growth F_g = I + u i (x) i and the closed-form quantities derived
/// from it. Cof F_g = (1+u) I - u A and F_g^{-1} = I - u/(1+u) A are exact
/// rank-one updates for a unit fiber i.
struct GrowthPoint {
    double u = 0.0;
    Vec3 fiber = Vec3::UnitX();
    Mat3 A = Mat3::Zero();
    Mat3 Fg = Mat3::Identity();
    Mat3 Fg_inv = Mat3::Identity();
    Mat3 cof_Fg = Mat3::Identity();
    /// d(Cof F_g)/du = I - A.
    Mat3 dcof_du = Mat3::Identity();
    double Jg = 1.0;
};

/// Throws GrowthValidityError for u <= -1.
GrowthPoint growth_tensors(double u, const Vec3& fiber);

struct StressState {
    Mat3 F = Mat3::Identity();
    Mat3 Fe = Mat3::Identity();
    Mat3 Fe_inv_t = Mat3::Identity();
    double J = 1.0;
    double Je = 1.0;
    double log_Je = 0.0;
    Mat3 Pe = Mat3::Zero();   // elastic first Piola-Kirchhoff stress
    double psi_e = 0.0;       // energy per unit intermediate volume
    double psi = 0.0;         // J_g psi_e, per unit reference volume
    Mat3 P = Mat3::Zero();    // J_g Pe F_g^{-T}, total first Piola-Kirchhoff stress
};

/// Compressible Neo-Hookean response of the elastic part F_e = F F_g^{-1}.
/// Throws ElementInversionError (tagged with `element`) if J_e <= 0.
StressState neo_hookean(const Mat3& F, const GrowthPoint& gp, const MaterialParams& mp, int element = -1);

/// psi_e(F_e), for finite-difference audits. Returns +inf for det F_e <= 0.
double neo_hookean_energy(const Mat3& Fe, const MaterialParams& mp);

/// Contraction A_e : H of the referential elastic tangent with H.
Mat3 elastic_tangent_apply(const StressState& s, const MaterialParams& mp, const Mat3& H);

struct ControlDerivatives {
    Mat3 jg_du_Pe = Mat3::Zero();   // J_g dP_e/du at fixed F
    Mat3 dcof_du = Mat3::Identity();
    /// dP/du at fixed F, i.e. jg_du_Pe F_g^{-T} + P_e dcof_du.
    Mat3 dP_du = Mat3::Zero();
};

ControlDerivatives control_derivatives(const StressState& s, const GrowthPoint& gp, const MaterialParams& mp);
ControlDerivatives control_derivatives(const Mat3& F, const GrowthPoint& gp, const MaterialParams& mp);

}  // namespace limbless
