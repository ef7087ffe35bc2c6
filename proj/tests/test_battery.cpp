#include <catch2/catch_amalgamated.hpp>

#include "dopf/battery.hpp"

using namespace dopf;
using Catch::Approx;

TEST_CASE("open-circuit voltage and resistance match pinned values") {
    const BatteryPack pack;
    // regression pins, frozen from the audited first build
    CHECK(open_circuit_voltage(pack.cell, 0.2) == Approx(3.82202864969351).epsilon(1e-12));
    CHECK(open_circuit_voltage(pack.cell, 0.5) == Approx(3.90036247411160).epsilon(1e-12));
    CHECK(open_circuit_voltage(pack.cell, 0.7) == Approx(3.98499229997639).epsilon(1e-12));
    CHECK(open_circuit_voltage(pack.cell, 1.0) == Approx(4.19990000000000).epsilon(1e-12));
    CHECK(total_resistance(pack.cell, 0.2) == Approx(0.0917632913358607).epsilon(1e-12));
    CHECK(total_resistance(pack.cell, 0.7) == Approx(0.0906300034668225).epsilon(1e-12));
}

TEST_CASE("voltage rises and resistance falls with state of charge") {
    const BatteryPack pack;
    double prev_v = open_circuit_voltage(pack.cell, 0.2);
    double prev_r = total_resistance(pack.cell, 0.2);
    for (int k = 1; k <= 32; ++k) {
        const double s = 0.2 + 0.8 * k / 32.0;
        const double v = open_circuit_voltage(pack.cell, s);
        const double r = total_resistance(pack.cell, s);
        CHECK(v > prev_v);
        CHECK(r <= prev_r);
        prev_v = v;
        prev_r = r;
    }
    CHECK(open_circuit_voltage(pack.cell, 1.0) == Approx(4.2).margin(1e-3));
}

TEST_CASE("cell current solves its defining quadratic") {
    const BatteryPack pack;
    for (const double p : {-90e3, -20e3, -1e3, 1e3, 20e3, 90e3}) {
        for (const double s : {0.25, 0.55, 0.9}) {
            const double i = solve_cell_current(pack, s, p);
            const double voc = open_circuit_voltage(pack.cell, s);
            const double rt = total_resistance(pack.cell, s);
            // terminal voltage times cell current equals the per-cell power
            const double p_cell = p / pack.cell_count();
            CHECK(i * (voc - i * rt) == Approx(p_cell).epsilon(1e-10));
            CHECK((p > 0.0) == (i > 0.0));
        }
    }
    CHECK(solve_cell_current(pack, 0.6, 0.0) == 0.0);
}

TEST_CASE("demands beyond the deliverable maximum are rejected") {
    const BatteryPack pack;
    const double cap = max_deliverable_power(pack, 0.3);
    CHECK_NOTHROW(solve_cell_current(pack, 0.3, 0.999 * cap));
    CHECK_THROWS_AS(solve_cell_current(pack, 0.3, 1.001 * cap), numeric_error);
}

TEST_CASE("one-way efficiencies sit below one and fall with power") {
    const BatteryPack pack;
    CHECK(pack_efficiency(pack, 0.7, 0.0) == 1.0);
    double prev_ch = 1.0;
    double prev_dis = 1.0;
    for (const double p : {5e3, 20e3, 50e3, 100e3}) {
        const double ch = pack_efficiency(pack, 0.7, -p);
        const double dis = pack_efficiency(pack, 0.7, p);
        CHECK(ch < prev_ch);
        CHECK(dis < prev_dis);
        CHECK(ch > 0.9);
        CHECK(dis > 0.9);
        prev_ch = ch;
        prev_dis = dis;
    }
}

TEST_CASE("efficiencies at the 5 kW reference point match the pinned values") {
    const BatteryPack pack;
    CHECK(pack_efficiency(pack, 0.70, -5e3) == Approx(0.998981127634598).epsilon(1e-12));
    CHECK(pack_efficiency(pack, 0.70, 5e3) == Approx(0.998978003779136).epsilon(1e-12));
}

TEST_CASE("soc bookkeeping loses energy on a round trip") {
    const BatteryPack pack;
    const double t_s = 60.0;
    const double p = 80e3;
    const double eta_ch = pack_efficiency(pack, 0.6, -p);
    const double eta_dis = pack_efficiency(pack, 0.6, p);
    double soc = 0.6;
    soc = soc_step(soc, p, 0.0, eta_ch, eta_dis, t_s, pack.e_max);
    CHECK(soc > 0.6);
    soc = soc_step(soc, 0.0, p, eta_ch, eta_dis, t_s, pack.e_max);
    CHECK(soc < 0.6);
    // the deficit is one minus the round-trip efficiency product
    const double want = 0.6 - (1.0 - eta_ch * eta_dis) * t_s * p / (eta_dis * pack.e_max);
    CHECK(soc == Approx(want).margin(1e-12));
}

TEST_CASE("idle intervals leave the state of charge untouched") {
    CHECK(soc_step(0.42, 0.0, 0.0, 0.99, 0.99, 60.0, 3.6e8) == 0.42);
}
