#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "dopf/netmodel.hpp"

using namespace dopf;
using Catch::Approx;

namespace {

LclParams table_filter() {
    return {0.15, 3.8e-3, 680e-6, 0.05, 300e-6};
}

NetworkTopology feeder_pair() {
    NetworkTopology t;
    t.omega = 2.0 * kPi * 50.0;
    t.bus_names = {"src", "far"};
    t.lines.push_back({0, 1, 0.3, 1.0e-3});
    t.loads.push_back({1, 2.0, 0.0});
    VscSpec v;
    v.bus = 0;
    v.lcl = table_filter();
    t.vscs.push_back(v);
    return t;
}

/// Uniform random topology: a spanning tree plus a few chords, loads on most
/// buses, converters on a random subset. Every load keeps a positive
/// inductance so the same network also has a full state-space form.
NetworkTopology random_topology(std::mt19937& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> nbus_d(2, 9);
    NetworkTopology t;
    t.omega = 2.0 * kPi * 50.0;
    const int nb = nbus_d(rng);
    for (int b = 0; b < nb; ++b) t.bus_names.push_back("b" + std::to_string(b));
    for (int b = 1; b < nb; ++b) {
        std::uniform_int_distribution<int> parent(0, b - 1);
        t.lines.push_back({parent(rng), b, 0.05 + 0.55 * uni(rng), (0.1 + 1.9 * uni(rng)) * 1e-3});
    }
    const int chords = static_cast<int>(uni(rng) * 3.0);
    for (int c = 0; c < chords && nb > 2; ++c) {
        std::uniform_int_distribution<int> pick(0, nb - 1);
        const int a = pick(rng);
        const int b = pick(rng);
        if (a != b) t.lines.push_back({a, b, 0.05 + 0.55 * uni(rng), (0.1 + 1.9 * uni(rng)) * 1e-3});
    }
    for (int b = 0; b < nb; ++b)
        if (uni(rng) < 0.6) t.loads.push_back({b, 1.0 + 9.0 * uni(rng), (0.5 + 4.5 * uni(rng)) * 1e-3});
    if (t.loads.empty()) t.loads.push_back({nb - 1, 3.0, 2.0e-3});
    const int nv = 1 + static_cast<int>(uni(rng) * std::min(3, nb));
    std::vector<int> order(static_cast<size_t>(nb));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < nv && i < nb; ++i) {
        VscSpec v;
        v.bus = order[static_cast<size_t>(i)];
        v.lcl = table_filter();
        t.vscs.push_back(v);
    }
    return t;
}

Eigen::VectorXd nominal_voltages(int n_vsc) {
    Eigen::VectorXd v(2 * n_vsc);
    for (int i = 0; i < n_vsc; ++i) {
        v(2 * i) = 415.0;
        v(2 * i + 1) = 0.0;
    }
    return v;
}

} // namespace

TEST_CASE("a load on the converter bus sees exactly the commanded voltage") {
    NetworkTopology t = feeder_pair();
    t.loads[0] = {0, 2.5, 1.2e-3}; // move the load onto the source bus
    const StaticGains g = steady_state_gains(t);

    const std::complex<double> v0(398.0, -12.0);
    const std::complex<double> y = 1.0 / std::complex<double>(2.5, t.omega * 1.2e-3);
    Eigen::VectorXd vin(2);
    vin << v0.real(), v0.imag();
    const Eigen::Vector2d il = g.load_block(0) * vin;
    const std::complex<double> want = y * v0;
    CHECK(il(0) == Approx(want.real()).margin(1e-9));
    CHECK(il(1) == Approx(want.imag()).margin(1e-9));
}

TEST_CASE("two-bus feeder matches the phasor solution by hand") {
    const NetworkTopology t = feeder_pair();
    const StaticGains g = steady_state_gains(t);

    const std::complex<double> v0(415.0, 0.0);
    const std::complex<double> y_line = 1.0 / std::complex<double>(0.3, t.omega * 1.0e-3);
    const std::complex<double> y_load = 1.0 / 2.0;
    const std::complex<double> y_rv = 1.0 / kDefaultVirtualResistance;
    const std::complex<double> v1 = y_line * v0 / (y_line + y_load + y_rv);
    const std::complex<double> i_line = (v0 - v1) * y_line;
    const std::complex<double> i_load = v1 * y_load;

    Eigen::VectorXd vin(2);
    vin << 415.0, 0.0;
    const Eigen::Vector2d got_vb = g.vbus_block(1) * vin;
    const Eigen::Vector2d got_line = g.line_block(0) * vin;
    const Eigen::Vector2d got_load = g.load_block(0) * vin;
    const Eigen::Vector2d got_io = g.io_block(0) * vin;
    CHECK(got_vb(0) == Approx(v1.real()).margin(1e-9));
    CHECK(got_vb(1) == Approx(v1.imag()).margin(1e-9));
    CHECK(got_line(0) == Approx(i_line.real()).margin(1e-9));
    CHECK(got_line(1) == Approx(i_line.imag()).margin(1e-9));
    CHECK(got_load(0) == Approx(i_load.real()).margin(1e-9));
    CHECK(got_load(1) == Approx(i_load.imag()).margin(1e-9));
    // the source exports exactly the line current here
    CHECK((got_io - got_line).norm() < 1e-9);

    // the virtual resistor leaks about 0.04 A against a 570 A feed
    const std::complex<double> v1_bare = y_line * v0 / (y_line + y_load);
    CHECK(std::abs(v1 - v1_bare) / std::abs(v1_bare) < 1e-3);
}

TEST_CASE("converter buses are voltage selectors") {
    std::mt19937 rng(11);
    const NetworkTopology t = random_topology(rng);
    const StaticGains g = steady_state_gains(t);
    for (int i = 0; i < t.n_vsc(); ++i) {
        Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 2 * t.n_vsc());
        want(0, 2 * i) = 1.0;
        want(1, 2 * i + 1) = 1.0;
        CHECK((g.vbus_block(t.vscs[static_cast<size_t>(i)].bus) - want).norm() == 0.0);
    }
}

TEST_CASE("a line between two converter buses has the pure rotating-frame block") {
    NetworkTopology t;
    t.omega = 2.0 * kPi * 50.0;
    t.bus_names = {"a", "b"};
    const double l = 1.0e-3;
    t.lines.push_back({0, 1, t.omega * l, l}); // r/l equal to the frequency
    t.loads.push_back({1, 5.0, 1.0e-3});
    for (int b = 0; b < 2; ++b) {
        VscSpec v;
        v.bus = b;
        v.lcl = table_filter();
        t.vscs.push_back(v);
    }
    const StateSpace ss = build_dq_state_space(t);
    // states: two exports, one load, one line; the line block sits last
    const Eigen::Matrix2d got = ss.a.block<2, 2>(6, 6);
    Eigen::Matrix2d want;
    want << -t.omega, t.omega,
            -t.omega, -t.omega;
    CHECK((got - want).norm() < 1e-9 * t.omega);
}

TEST_CASE("nodal gains agree with the state-space steady state across topologies") {
    std::mt19937 rng(20240515);
    for (int trial = 0; trial < 24; ++trial) {
        const NetworkTopology t = random_topology(rng);
        INFO("trial " << trial << ": " << t.n_bus() << " buses, " << t.n_line() << " lines, "
                      << t.n_load() << " loads, " << t.n_vsc() << " converters");
        const StaticGains g = steady_state_gains(t);
        const StateSpace ss = build_dq_state_space(t);
        const Eigen::MatrixXd from_ss = state_space_gains(ss);

        Eigen::MatrixXd nodal(from_ss.rows(), from_ss.cols());
        nodal << g.g_io, g.g_iload, g.g_iline;
        CHECK((nodal - from_ss).norm() <= 1e-9 * nodal.norm());
    }
}

TEST_CASE("integrating the dynamics reaches the nodal steady state") {
    std::mt19937 rng(7777);
    for (int trial = 0; trial < 3; ++trial) {
        const NetworkTopology t = random_topology(rng);
        const StaticGains g = steady_state_gains(t);
        const StateSpace ss = build_dq_state_space(t);
        const Eigen::VectorXd u = nominal_voltages(t.n_vsc());

        // trapezoidal rule with a fixed factorization
        const double dt = 1.0e-4;
        const Eigen::Index m = ss.a.rows();
        const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m) - 0.5 * dt * ss.a;
        const Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(m, m) + 0.5 * dt * ss.a;
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
        const Eigen::VectorXd feed = dt * (ss.b * u);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
        for (int k = 0; k < 15000; ++k) x = lu.solve(rhs * x + feed);

        Eigen::MatrixXd nodal(m, 2 * t.n_vsc());
        nodal << g.g_io, g.g_iload, g.g_iline;
        const Eigen::VectorXd want = nodal * u;
        CHECK((x - want).norm() <= 1e-3 * want.norm());
    }
}

TEST_CASE("state space refuses loads without inductance") {
    const NetworkTopology t = feeder_pair(); // its load has l = 0
    CHECK_THROWS_AS(build_dq_state_space(t), validation_error);
}
