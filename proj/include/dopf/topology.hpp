#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dopf/common.hpp"

namespace dopf {

// =========================================================================
// Network description
// =========================================================================

/// Output-stage filter of one voltage source converter: inverter bridge,
/// series (r_f, l_f) inductor, shunt capacitor c_f, and the coupling branch
/// (r_c, l_c) tying the regulated node to its bus.
struct LclParams {
    double r_f = 0.0; ///< filter inductor resistance [ohm]
    double l_f = 0.0; ///< filter inductance [H]
    double c_f = 0.0; ///< filter capacitance [F]
    double r_c = 0.0; ///< coupling branch resistance [ohm]
    double l_c = 0.0; ///< coupling branch inductance [H]
};

struct LineSpec {
    int from = -1;
    int to = -1;
    double r = 0.0; ///< series resistance [ohm]
    double l = 0.0; ///< series inductance [H]
};

struct LoadSpec {
    int bus = -1;
    double r = 0.0; ///< series resistance [ohm]
    double l = 0.0; ///< series inductance [H], zero for purely resistive loads
};

struct VscSpec {
    int bus = -1;
    LclParams lcl;
};

/// Balanced per-phase equivalent of the islanded network. Buses are referred
/// to by index; `bus_names` is only for reporting.
struct NetworkTopology {
    double omega = 0.0; ///< electrical frequency [rad/s]
    std::vector<std::string> bus_names;
    std::vector<LineSpec> lines;
    std::vector<LoadSpec> loads;
    std::vector<VscSpec> vscs;

    [[nodiscard]] int n_bus() const { return static_cast<int>(bus_names.size()); }
    [[nodiscard]] int n_line() const { return static_cast<int>(lines.size()); }
    [[nodiscard]] int n_load() const { return static_cast<int>(loads.size()); }
    [[nodiscard]] int n_vsc() const { return static_cast<int>(vscs.size()); }

    [[nodiscard]] const std::string& bus_name(int b) const { return bus_names.at(static_cast<size_t>(b)); }

    /// Index of the VSC at bus b, or -1 when the bus is passive.
    [[nodiscard]] int vsc_at(int b) const {
        for (int i = 0; i < n_vsc(); ++i)
            if (vscs[static_cast<size_t>(i)].bus == b) return i;
        return -1;
    }
};

/// Structural validation. Throws validation_error naming the first offending
/// element. Checks index ranges, positivity, VSC bus uniqueness and graph
/// connectivity (every bus reachable through lines when there is more than
/// one bus).
inline void validate(const NetworkTopology& t) {
    if (t.omega <= 0.0) throw validation_error("topology: omega must be positive");
    if (t.n_bus() == 0) throw validation_error("topology: no buses");
    for (int i = 0; i < t.n_line(); ++i) {
        const auto& ln = t.lines[static_cast<size_t>(i)];
        if (ln.from < 0 || ln.from >= t.n_bus() || ln.to < 0 || ln.to >= t.n_bus() || ln.from == ln.to)
            throw validation_error("line " + std::to_string(i) + ": bad endpoints");
        if (!(ln.r > 0.0)) throw validation_error("line " + std::to_string(i) + ": resistance must be positive");
        if (ln.l < 0.0) throw validation_error("line " + std::to_string(i) + ": negative inductance");
    }
    for (int i = 0; i < t.n_load(); ++i) {
        const auto& ld = t.loads[static_cast<size_t>(i)];
        if (ld.bus < 0 || ld.bus >= t.n_bus())
            throw validation_error("load " + std::to_string(i) + ": bad bus index");
        if (!(ld.r > 0.0)) throw validation_error("load " + std::to_string(i) + ": resistance must be positive");
        if (ld.l < 0.0) throw validation_error("load " + std::to_string(i) + ": negative inductance");
    }
    std::vector<int> seen(static_cast<size_t>(t.n_bus()), 0);
    for (int i = 0; i < t.n_vsc(); ++i) {
        const auto& v = t.vscs[static_cast<size_t>(i)];
        if (v.bus < 0 || v.bus >= t.n_bus())
            throw validation_error("vsc " + std::to_string(i) + ": bad bus index");
        if (seen[static_cast<size_t>(v.bus)]++)
            throw validation_error("vsc " + std::to_string(i) + ": bus " + t.bus_name(v.bus) + " already has a VSC");
        const auto& p = v.lcl;
        if (!(p.r_f > 0.0 && p.l_f > 0.0 && p.c_f > 0.0 && p.r_c > 0.0 && p.l_c > 0.0))
            throw validation_error("vsc " + std::to_string(i) + ": filter parameters must all be positive");
    }

    if (t.n_bus() > 1) {
        // union-find over line endpoints
        std::vector<int> root(static_cast<size_t>(t.n_bus()));
        std::iota(root.begin(), root.end(), 0);
        auto find = [&](int x) {
            while (root[static_cast<size_t>(x)] != x) x = root[static_cast<size_t>(x)] = root[static_cast<size_t>(root[static_cast<size_t>(x)])];
            return x;
        };
        for (const auto& ln : t.lines) root[static_cast<size_t>(find(ln.from))] = find(ln.to);
        const int r0 = find(0);
        for (int b = 1; b < t.n_bus(); ++b)
            if (find(b) != r0)
                throw validation_error("topology: bus " + t.bus_name(b) + " is not connected to the rest of the network");
    }
}

} // namespace dopf
