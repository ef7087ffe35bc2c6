#pragma once

#include <Eigen/Dense>

#include "dopf/common.hpp"
#include "dopf/dq.hpp"
#include "dopf/netmodel.hpp"

namespace dopf {

// =========================================================================
// Converter static model
// =========================================================================
//
// With the network reduced to static gains, each VSC's internal quantities
// are linear in the stacked voltage vector as well: the filter inductor
// current is the capacitor current plus the bus export, and the bridge
// voltage is the commanded voltage plus the filter impedance drop. The DC
// side power is the bridge voltage of the converter dotted with its
// inductor current, positive when the DC source discharges.

/// Per-VSC linear maps from the stacked voltage vector (2 per VSC) to the
/// converter's own filter inductor current and bridge voltage.
struct VscStaticModel {
    Eigen::MatrixXd g_il; ///< inductor current, 2 x 2*n_vsc
    Eigen::MatrixXd g_u;  ///< bridge voltage, 2 x 2*n_vsc
};

/// Builds the static model of VSC `idx` from the network gains and its
/// filter parameters.
[[nodiscard]] inline VscStaticModel vsc_static_gains(const StaticGains& gains,
                                                     const LclParams& lcl,
                                                     int idx) {
    if (idx < 0 || idx >= gains.n_vsc) throw validation_error("vsc_static_gains: VSC index out of range");
    const int n2 = 2 * gains.n_vsc;
    Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(2, n2);
    sel(0, 2 * idx) = 1.0;
    sel(1, 2 * idx + 1) = 1.0;

    Eigen::Matrix2d cap;
    cap << 0.0, -gains.omega * lcl.c_f,
           gains.omega * lcl.c_f, 0.0;

    Eigen::Matrix2d zf;
    zf << lcl.r_f, -gains.omega * lcl.l_f,
          gains.omega * lcl.l_f, lcl.r_f;

    VscStaticModel m;
    m.g_il = cap * sel + gains.io_block(idx);
    m.g_u = zf * m.g_il + sel;
    return m;
}

/// DC-side converter power for a bridge voltage / inductor current pair.
/// Positive means the DC source is discharging into the network.
[[nodiscard]] inline double dc_power(DqVec u_bridge, DqVec i_l) {
    return u_bridge.d * i_l.d + u_bridge.q * i_l.q;
}

/// First-order expansion of the (bilinear) DC power around a nominal stacked
/// voltage: p(v) ~ coeff * v + offset. Exact at the nominal point.
struct PowerLinearization {
    Eigen::RowVectorXd coeff;
    double offset = 0.0;
};

[[nodiscard]] inline PowerLinearization linearize_power(const VscStaticModel& m,
                                                        const Eigen::VectorXd& v_nom) {
    if (v_nom.size() != m.g_il.cols())
        throw validation_error("linearize_power: nominal voltage dimension mismatch");
    const Eigen::Vector2d il = m.g_il * v_nom;
    const Eigen::Vector2d u = m.g_u * v_nom;
    PowerLinearization lin;
    lin.coeff = u.transpose() * m.g_il + il.transpose() * m.g_u;
    lin.offset = -u.dot(il);
    return lin;
}

/// True bilinear DC power at a stacked voltage, for residual checks.
[[nodiscard]] inline double dc_power_at(const VscStaticModel& m, const Eigen::VectorXd& v) {
    const Eigen::Vector2d il = m.g_il * v;
    const Eigen::Vector2d u = m.g_u * v;
    return u.dot(il);
}

// =========================================================================
// Conduction-loss quadratic forms
// =========================================================================

/// Symmetric PSD forms such that v' * lcl_form * v is the total filter
/// conduction loss (inductor plus coupling branch) and v' * line_form * v
/// the total line conduction loss, for the stacked voltage v.
struct LossForms {
    Eigen::MatrixXd lcl;
    Eigen::MatrixXd line;

    [[nodiscard]] Eigen::MatrixXd total() const { return lcl + line; }
};

[[nodiscard]] inline LossForms loss_quadratic_forms(const StaticGains& gains,
                                                    const NetworkTopology& t) {
    if (gains.n_vsc != t.n_vsc() || gains.n_line != t.n_line())
        throw validation_error("loss_quadratic_forms: gains do not match topology");
    const int n2 = 2 * gains.n_vsc;
    LossForms f;
    f.lcl = Eigen::MatrixXd::Zero(n2, n2);
    f.line = Eigen::MatrixXd::Zero(n2, n2);
    for (int i = 0; i < t.n_vsc(); ++i) {
        const auto& lcl = t.vscs[static_cast<size_t>(i)].lcl;
        const auto m = vsc_static_gains(gains, lcl, i);
        const Eigen::MatrixXd gio = gains.io_block(i);
        f.lcl += lcl.r_f * (m.g_il.transpose() * m.g_il) + lcl.r_c * (gio.transpose() * gio);
    }
    for (int i = 0; i < t.n_line(); ++i) {
        const Eigen::MatrixXd gl = gains.line_block(i);
        f.line += t.lines[static_cast<size_t>(i)].r * (gl.transpose() * gl);
    }
    // symmetrize away rounding
    f.lcl = 0.5 * (f.lcl + f.lcl.transpose());
    f.line = 0.5 * (f.line + f.line.transpose());
    return f;
}

} // namespace dopf
