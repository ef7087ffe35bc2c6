#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "dopf/common.hpp"
#include "dopf/dq.hpp"
#include "dopf/topology.hpp"

namespace dopf {

// =========================================================================
// Quasi-stationary network model
// =========================================================================
//
// The VSC inner control loops settle orders of magnitude faster than the
// dispatch interval, so each bus hosting a VSC holds exactly its commanded
// voltage, and every electrical quantity of interest is a static linear map
// of the stacked VSC voltage vector. Passive buses are closed through a
// large virtual resistance to ground, the standard device for giving every
// node a defined voltage; its value is large enough (default 1e4 ohm) that
// it perturbs currents by well under the documented 0.1% tolerance.

inline constexpr double kDefaultVirtualResistance = 1.0e4;

/// Static gains mapping the stacked VSC voltage vector (2 per VSC, d then q)
/// to element currents and bus voltages. Row blocks of two per element.
struct StaticGains {
    double omega = 0.0;
    int n_vsc = 0;
    int n_load = 0;
    int n_line = 0;
    int n_bus = 0;

    Eigen::MatrixXd g_io;    ///< VSC output (export) currents, 2*n_vsc x 2*n_vsc
    Eigen::MatrixXd g_iload; ///< load currents, 2*n_load x 2*n_vsc
    Eigen::MatrixXd g_iline; ///< line currents (from -> to positive), 2*n_line x 2*n_vsc
    Eigen::MatrixXd g_vbus;  ///< bus voltages, 2*n_bus x 2*n_vsc

    [[nodiscard]] Eigen::MatrixXd io_block(int vsc) const { return g_io.middleRows(2 * vsc, 2); }
    [[nodiscard]] Eigen::MatrixXd load_block(int load) const { return g_iload.middleRows(2 * load, 2); }
    [[nodiscard]] Eigen::MatrixXd line_block(int line) const { return g_iline.middleRows(2 * line, 2); }
    [[nodiscard]] Eigen::MatrixXd vbus_block(int bus) const { return g_vbus.middleRows(2 * bus, 2); }
};

namespace detail {

/// Complex nodal admittance data shared by the gain and state-space builds.
struct NodalParts {
    std::vector<std::complex<double>> y_load; ///< per load
    std::vector<std::complex<double>> y_line; ///< per line
    std::vector<int> vsc_of_bus;              ///< -1 for passive buses
};

inline NodalParts nodal_parts(const NetworkTopology& t) {
    NodalParts np;
    np.vsc_of_bus.assign(static_cast<size_t>(t.n_bus()), -1);
    for (int i = 0; i < t.n_vsc(); ++i) np.vsc_of_bus[static_cast<size_t>(t.vscs[static_cast<size_t>(i)].bus)] = i;
    np.y_load.reserve(static_cast<size_t>(t.n_load()));
    for (const auto& ld : t.loads)
        np.y_load.push_back(1.0 / std::complex<double>(ld.r, t.omega * ld.l));
    np.y_line.reserve(static_cast<size_t>(t.n_line()));
    for (const auto& ln : t.lines)
        np.y_line.push_back(1.0 / std::complex<double>(ln.r, t.omega * ln.l));
    return np;
}

} // namespace detail

/// Solves the phasor nodal equations with VSC buses treated as ideal sources
/// and returns the full set of static gains. Throws numeric_error when the
/// passive subnetwork is singular.
[[nodiscard]] inline StaticGains steady_state_gains(const NetworkTopology& t,
                                                    double r_virtual = kDefaultVirtualResistance) {
    validate(t);
    if (r_virtual <= 0.0) throw validation_error("steady_state_gains: virtual resistance must be positive");
    const auto np = detail::nodal_parts(t);
    const int nb = t.n_bus();
    const int nv = t.n_vsc();

    // Bus voltage as a complex linear map of the per-VSC source voltages.
    // Source buses are selectors; passive buses come from eliminating the
    // admittance system Y_pp V_p = -Y_ps V_s.
    std::vector<int> passive;
    for (int b = 0; b < nb; ++b)
        if (np.vsc_of_bus[static_cast<size_t>(b)] < 0) passive.push_back(b);
    const int npass = static_cast<int>(passive.size());
    std::vector<int> pos(static_cast<size_t>(nb), -1);
    for (int k = 0; k < npass; ++k) pos[static_cast<size_t>(passive[static_cast<size_t>(k)])] = k;

    Eigen::MatrixXcd g_v = Eigen::MatrixXcd::Zero(nb, nv);
    for (int b = 0; b < nb; ++b) {
        const int i = np.vsc_of_bus[static_cast<size_t>(b)];
        if (i >= 0) g_v(b, i) = 1.0;
    }

    if (npass > 0) {
        Eigen::MatrixXcd ypp = Eigen::MatrixXcd::Zero(npass, npass);
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(npass, nv);
        for (int k = 0; k < npass; ++k)
            ypp(k, k) += 1.0 / r_virtual;
        for (int i = 0; i < t.n_load(); ++i) {
            const int b = t.loads[static_cast<size_t>(i)].bus;
            if (pos[static_cast<size_t>(b)] >= 0) ypp(pos[static_cast<size_t>(b)], pos[static_cast<size_t>(b)]) += np.y_load[static_cast<size_t>(i)];
        }
        for (int i = 0; i < t.n_line(); ++i) {
            const auto& ln = t.lines[static_cast<size_t>(i)];
            const auto y = np.y_line[static_cast<size_t>(i)];
            const int pa = pos[static_cast<size_t>(ln.from)];
            const int pb = pos[static_cast<size_t>(ln.to)];
            if (pa >= 0) ypp(pa, pa) += y;
            if (pb >= 0) ypp(pb, pb) += y;
            if (pa >= 0 && pb >= 0) {
                ypp(pa, pb) -= y;
                ypp(pb, pa) -= y;
            }
            const int sa = np.vsc_of_bus[static_cast<size_t>(ln.from)];
            const int sb = np.vsc_of_bus[static_cast<size_t>(ln.to)];
            if (pa >= 0 && sb >= 0) rhs(pa, sb) += y;
            if (pb >= 0 && sa >= 0) rhs(pb, sa) += y;
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(ypp);
        if (!lu.isInvertible())
            throw numeric_error("steady_state_gains: passive-bus admittance system is singular");
        const Eigen::MatrixXcd vp = lu.solve(rhs);
        for (int k = 0; k < npass; ++k) g_v.row(passive[static_cast<size_t>(k)]) = vp.row(k);
    }

    // Element currents from bus voltages.
    Eigen::MatrixXcd g_iload_c(t.n_load(), nv);
    for (int i = 0; i < t.n_load(); ++i)
        g_iload_c.row(i) = np.y_load[static_cast<size_t>(i)] * g_v.row(t.loads[static_cast<size_t>(i)].bus);

    Eigen::MatrixXcd g_iline_c(t.n_line(), nv);
    for (int i = 0; i < t.n_line(); ++i) {
        const auto& ln = t.lines[static_cast<size_t>(i)];
        g_iline_c.row(i) = np.y_line[static_cast<size_t>(i)] * (g_v.row(ln.from) - g_v.row(ln.to));
    }

    // VSC export current: everything its bus feeds.
    Eigen::MatrixXcd g_io_c = Eigen::MatrixXcd::Zero(nv, nv);
    for (int i = 0; i < t.n_load(); ++i) {
        const int v = np.vsc_of_bus[static_cast<size_t>(t.loads[static_cast<size_t>(i)].bus)];
        if (v >= 0) g_io_c.row(v) += g_iload_c.row(i);
    }
    for (int i = 0; i < t.n_line(); ++i) {
        const auto& ln = t.lines[static_cast<size_t>(i)];
        const int va = np.vsc_of_bus[static_cast<size_t>(ln.from)];
        const int vb = np.vsc_of_bus[static_cast<size_t>(ln.to)];
        if (va >= 0) g_io_c.row(va) += g_iline_c.row(i);
        if (vb >= 0) g_io_c.row(vb) -= g_iline_c.row(i);
    }

    StaticGains g;
    g.omega = t.omega;
    g.n_vsc = nv;
    g.n_load = t.n_load();
    g.n_line = t.n_line();
    g.n_bus = nb;
    g.g_io = cplx_expand(g_io_c);
    g.g_iload = cplx_expand(g_iload_c);
    g.g_iline = cplx_expand(g_iline_c);
    g.g_vbus = cplx_expand(g_v);
    return g;
}

// =========================================================================
// Rotating-frame state space
// =========================================================================

/// Linear dynamics d/dt x = A x + B u with states ordered as VSC output
/// currents, then load currents, then line currents (d, q per element) and
/// inputs the stacked VSC voltages.
struct StateSpace {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    std::vector<std::string> state_labels;
};

/// Builds the state space. Load and line branches carry their RL dynamics in
/// the rotating frame; passive bus voltages close through the virtual
/// resistance; VSC output currents are first-order tracking states (rate
/// `kappa`, default the network frequency) of their bus export, which pins
/// the steady state to the nodal solution exactly. Throws on any
/// zero-inductance load or line, which would have no state.
[[nodiscard]] inline StateSpace build_dq_state_space(const NetworkTopology& t,
                                                     double r_virtual = kDefaultVirtualResistance,
                                                     double kappa = 0.0) {
    validate(t);
    if (r_virtual <= 0.0) throw validation_error("build_dq_state_space: virtual resistance must be positive");
    if (kappa <= 0.0) kappa = t.omega;
    for (int i = 0; i < t.n_load(); ++i)
        if (!(t.loads[static_cast<size_t>(i)].l > 0.0))
            throw validation_error("build_dq_state_space: load " + std::to_string(i) +
                                   " at bus " + t.bus_name(t.loads[static_cast<size_t>(i)].bus) +
                                   " has zero inductance, its current is not a state");
    for (int i = 0; i < t.n_line(); ++i)
        if (!(t.lines[static_cast<size_t>(i)].l > 0.0))
            throw validation_error("build_dq_state_space: line " + std::to_string(i) +
                                   " (" + t.bus_name(t.lines[static_cast<size_t>(i)].from) + "-" +
                                   t.bus_name(t.lines[static_cast<size_t>(i)].to) +
                                   ") has zero inductance, its current is not a state");

    const auto np = detail::nodal_parts(t);
    const int nv = t.n_vsc();
    const int nld = t.n_load();
    const int nln = t.n_line();
    const int m = nv + nld + nln; // complex state count
    const auto xload = [&](int i) { return nv + i; };
    const auto xline = [&](int i) { return nv + nld + i; };

    // Bus voltage of bus b as a complex-linear functional of states/inputs.
    // Source bus: the input itself. Passive bus: r_virtual times the net
    // state-current injection.
    Eigen::MatrixXcd vbus_x = Eigen::MatrixXcd::Zero(t.n_bus(), m);
    Eigen::MatrixXcd vbus_u = Eigen::MatrixXcd::Zero(t.n_bus(), nv);
    for (int b = 0; b < t.n_bus(); ++b) {
        const int v = np.vsc_of_bus[static_cast<size_t>(b)];
        if (v >= 0) vbus_u(b, v) = 1.0;
    }
    for (int i = 0; i < nld; ++i) {
        const int b = t.loads[static_cast<size_t>(i)].bus;
        if (np.vsc_of_bus[static_cast<size_t>(b)] < 0) vbus_x(b, xload(i)) -= r_virtual;
    }
    for (int i = 0; i < nln; ++i) {
        const auto& ln = t.lines[static_cast<size_t>(i)];
        if (np.vsc_of_bus[static_cast<size_t>(ln.from)] < 0) vbus_x(ln.from, xline(i)) -= r_virtual;
        if (np.vsc_of_bus[static_cast<size_t>(ln.to)] < 0) vbus_x(ln.to, xline(i)) += r_virtual;
    }

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(m, nv);
    const std::complex<double> jw(0.0, t.omega);

    for (int i = 0; i < nld; ++i) {
        const auto& ld = t.loads[static_cast<size_t>(i)];
        const int r = xload(i);
        a.row(r) += vbus_x.row(ld.bus) / ld.l;
        b.row(r) += vbus_u.row(ld.bus) / ld.l;
        a(r, r) += -(ld.r / ld.l) - jw;
    }
    for (int i = 0; i < nln; ++i) {
        const auto& ln = t.lines[static_cast<size_t>(i)];
        const int r = xline(i);
        a.row(r) += (vbus_x.row(ln.from) - vbus_x.row(ln.to)) / ln.l;
        b.row(r) += (vbus_u.row(ln.from) - vbus_u.row(ln.to)) / ln.l;
        a(r, r) += -(ln.r / ln.l) - jw;
    }
    // Export tracking states for the VSC output currents.
    for (int i = 0; i < nv; ++i) {
        const int bus = t.vscs[static_cast<size_t>(i)].bus;
        a(i, i) -= kappa;
        for (int k = 0; k < nld; ++k)
            if (t.loads[static_cast<size_t>(k)].bus == bus) a(i, xload(k)) += kappa;
        for (int k = 0; k < nln; ++k) {
            const auto& ln = t.lines[static_cast<size_t>(k)];
            if (ln.from == bus) a(i, xline(k)) += kappa;
            if (ln.to == bus) a(i, xline(k)) -= kappa;
        }
    }

    StateSpace ss;
    ss.a = cplx_expand(a);
    ss.b = cplx_expand(b);
    ss.state_labels.reserve(static_cast<size_t>(2 * m));
    for (int i = 0; i < nv; ++i)
        for (const char* c : {".d", ".q"})
            ss.state_labels.push_back("i_o(" + t.bus_name(t.vscs[static_cast<size_t>(i)].bus) + ")" + c);
    for (int i = 0; i < nld; ++i)
        for (const char* c : {".d", ".q"})
            ss.state_labels.push_back("i_load(" + t.bus_name(t.loads[static_cast<size_t>(i)].bus) + ")" + c);
    for (int i = 0; i < nln; ++i)
        for (const char* c : {".d", ".q"})
            ss.state_labels.push_back("i_line(" + t.bus_name(t.lines[static_cast<size_t>(i)].from) + "-" +
                                      t.bus_name(t.lines[static_cast<size_t>(i)].to) + ")" + c);
    return ss;
}

/// Stacked steady-state gain implied by the state space, (-A)^-1 B, rows
/// ordered like the states.
[[nodiscard]] inline Eigen::MatrixXd state_space_gains(const StateSpace& ss) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(-ss.a);
    if (!lu.isInvertible()) throw numeric_error("state_space_gains: A is singular");
    return lu.solve(ss.b);
}

} // namespace dopf
