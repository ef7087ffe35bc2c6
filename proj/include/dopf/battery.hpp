#pragma once

#include <cmath>
#include <string>

#include "dopf/common.hpp"

namespace dopf {

// =========================================================================
// Lithium-ion cell and pack model
// =========================================================================

/// Coefficients of the per-cell electrical model. Open-circuit voltage is a
/// cubic-plus-exponential in SoC; the total internal resistance is the sum
/// of a series term (same functional shape), a short transient term and a
/// long transient term:
///
///   v_oc(s) = a0 exp(-a1 s) + a2 + a3 s - a4 s^2 + a5 s^3
///   r_s(s)  = b0 exp(-b1 s) + b2 + b3 s - b4 s^2 + b5 s^3
///   r_ts(s) = c0 exp(-c1 s) + c2
///   r_tl(s) = d0 exp(-d1 s) + d2
struct CellCoeffs {
    double a0, a1, a2, a3, a4, a5;
    double b0, b1, b2, b3, b4, b5;
    double c0, c1, c2;
    double d0, d1, d2;
};

/// Default cell: a published lithium-polymer parameter shape with the OCV
/// level set to 4.2 V at full charge and the resistance terms rescaled into
/// the tens-of-milliohms band typical of the cells used in large packs.
[[nodiscard]] inline CellCoeffs default_cell() {
    CellCoeffs c{};
    c.a0 = -1.031; c.a1 = 35.0;  c.a2 = 3.782;   c.a3 = 0.2156; c.a4 = 0.1178; c.a5 = 0.3201;
    c.b0 = 0.0828; c.b1 = 24.37; c.b2 = 0.03946; c.b3 = 0.0;    c.b4 = 0.0;    c.b5 = 0.0;
    c.c0 = 0.1700; c.c1 = 29.14; c.c2 = 0.02475;
    c.d0 = 3.500;  c.d1 = 155.2; c.d2 = 0.02642;
    return c;
}

[[nodiscard]] inline double open_circuit_voltage(const CellCoeffs& c, double soc) {
    return c.a0 * std::exp(-c.a1 * soc) + c.a2 + c.a3 * soc - c.a4 * soc * soc + c.a5 * soc * soc * soc;
}

[[nodiscard]] inline double total_resistance(const CellCoeffs& c, double soc) {
    const double rs = c.b0 * std::exp(-c.b1 * soc) + c.b2 + c.b3 * soc - c.b4 * soc * soc + c.b5 * soc * soc * soc;
    const double rts = c.c0 * std::exp(-c.c1 * soc) + c.c2;
    const double rtl = c.d0 * std::exp(-c.d1 * soc) + c.d2;
    return rs + rts + rtl;
}

/// Series/parallel pack of identical cells sharing one SoC.
struct BatteryPack {
    CellCoeffs cell = default_cell();
    int n_series = 215;
    int n_parallel = 130;
    double e_max = 3.6e8;      ///< usable energy [Ws]
    double p_ch_max = 100e3;   ///< charge power cap [W]
    double p_dis_max = 100e3;  ///< discharge power cap [W]

    [[nodiscard]] double cell_count() const { return static_cast<double>(n_series) * n_parallel; }
};

/// Largest converter power the pack can source at this SoC; beyond it the
/// cell current equation has no real root.
[[nodiscard]] inline double max_deliverable_power(const BatteryPack& pack, double soc) {
    const double voc = open_circuit_voltage(pack.cell, soc);
    const double rt = total_resistance(pack.cell, soc);
    return voc * voc * pack.cell_count() / (4.0 * rt);
}

/// Per-cell current for a given converter power (positive = discharging).
/// The cell current satisfies i^2 - i voc/rt + p_cell/rt = 0; the physical
/// branch is the root of smaller magnitude. Throws when the demanded power
/// exceeds what the pack can deliver.
[[nodiscard]] inline double solve_cell_current(const BatteryPack& pack, double soc, double p_vsc) {
    const double voc = open_circuit_voltage(pack.cell, soc);
    const double rt = total_resistance(pack.cell, soc);
    const double p_cell = p_vsc / pack.cell_count();
    const double disc = voc * voc - 4.0 * rt * p_cell;
    if (disc < 0.0)
        throw numeric_error("solve_cell_current: demanded " + std::to_string(p_vsc) +
                            " W exceeds the deliverable maximum " +
                            std::to_string(max_deliverable_power(pack, soc)) + " W at SoC " +
                            std::to_string(soc));
    return (voc - std::sqrt(disc)) / (2.0 * rt);
}

/// One-way conversion efficiency at a given cell current. Charging returns
/// eta_ch = voc / (voc - i rt), discharging eta_dis = (voc - i rt) / voc;
/// both are 1 at zero current.
[[nodiscard]] inline double cell_efficiency(const BatteryPack& pack, double soc, double i_cell) {
    if (i_cell == 0.0) return 1.0;
    const double voc = open_circuit_voltage(pack.cell, soc);
    const double rt = total_resistance(pack.cell, soc);
    const double terminal = voc - i_cell * rt;
    if (i_cell > 0.0) return terminal / voc;
    return voc / terminal;
}

/// Exact one-way efficiency at a converter power (positive = discharge).
[[nodiscard]] inline double pack_efficiency(const BatteryPack& pack, double soc, double p_vsc) {
    if (p_vsc == 0.0) return 1.0;
    return cell_efficiency(pack, soc, solve_cell_current(pack, soc, p_vsc));
}

/// SoC recursion over one interval with split charge/discharge powers
/// (both nonnegative) and fixed one-way efficiencies.
[[nodiscard]] inline double soc_step(double soc, double p_ch, double p_dis,
                                     double eta_ch, double eta_dis,
                                     double t_s, double e_max) {
    return soc + eta_ch * t_s * p_ch / e_max - t_s * p_dis / (eta_dis * e_max);
}

} // namespace dopf
