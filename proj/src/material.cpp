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

#include "limbless/material.hpp"

#include <cmath>
#include <limits>

#include "limbless/errors.hpp"

namespace limbless {

GrowthPoint growth_tensors(double u, const Vec3& fiber) {
    if (!(u > -1.0)) throw GrowthValidityError(u);
    GrowthPoint gp;
    const Mat3 I = Mat3::Identity();
    gp.u = u;
    gp.fiber = fiber;
    gp.A = fiber * fiber.transpose();
    gp.Fg = I + u * gp.A;
    gp.Jg = 1.0 + u;
    gp.Fg_inv = I - (u / (1.0 + u)) * gp.A;
    gp.cof_Fg = (1.0 + u) * I - u * gp.A;
    gp.dcof_du = I - gp.A;
    return gp;
}

StressState neo_hookean(const Mat3& F, const GrowthPoint& gp, const MaterialParams& mp, int element) {
    StressState s;
    s.F = F;
    s.Fe = F * gp.Fg_inv;
    s.Je = s.Fe.determinant();
    if (!(s.Je > 0.0)) throw ElementInversionError(element, s.Je);
    s.J = s.Je * gp.Jg;
    s.log_Je = std::log(s.Je);
    s.Fe_inv_t = s.Fe.inverse().transpose();

    const double trace_Ee = 0.5 * (s.Fe.squaredNorm() - 3.0);
    s.psi_e = 0.5 * mp.lambda * s.log_Je * s.log_Je - mp.mu * s.log_Je + mp.mu * trace_Ee;
    s.psi = gp.Jg * s.psi_e;
    s.Pe = mp.mu * s.Fe + (mp.lambda * s.log_Je - mp.mu) * s.Fe_inv_t;
    s.P = s.Pe * gp.cof_Fg;
    return s;
}

double neo_hookean_energy(const Mat3& Fe, const MaterialParams& mp) {
    const double je = Fe.determinant();
    if (!(je > 0.0)) return std::numeric_limits<double>::infinity();
    const double lj = std::log(je);
    return 0.5 * mp.lambda * lj * lj - mp.mu * lj + 0.5 * mp.mu * (Fe.squaredNorm() - 3.0);
}

Mat3 elastic_tangent_apply(const StressState& s, const MaterialParams& mp, const Mat3& H) {
    const Mat3& Fit = s.Fe_inv_t;
    const double c = mp.lambda * s.log_Je - mp.mu;
    return mp.mu * H - c * (Fit * H.transpose() * Fit) + mp.lambda * Fit.cwiseProduct(H).sum() * Fit;
}

ControlDerivatives control_derivatives(const StressState& s, const GrowthPoint& gp, const MaterialParams& mp) {
    ControlDerivatives cd;
    // F_g^{-1}' = (J - F_g^{-1}) / J_g, hence F_e' = F (J - F_g^{-1}) / J_g.
    const Mat3 dFe = s.F * (gp.dcof_du - gp.Fg_inv) / gp.Jg;
    const Mat3 dPe = elastic_tangent_apply(s, mp, dFe);
    cd.jg_du_Pe = gp.Jg * dPe;
    cd.dcof_du = gp.dcof_du;
    cd.dP_du = dPe * gp.cof_Fg + s.Pe * gp.dcof_du;
    return cd;
}

ControlDerivatives control_derivatives(const Mat3& F, const GrowthPoint& gp, const MaterialParams& mp) {
    return control_derivatives(neo_hookean(F, gp, mp), gp, mp);
}

}  // namespace limbless
