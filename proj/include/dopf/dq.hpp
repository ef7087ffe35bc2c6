#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace dopf {

// =========================================================================
// Synchronous-frame two-component quantities
// =========================================================================
//
// Every electrical quantity lives in a frame rotating at the network
// frequency, as a (d, q) pair. Magnitudes carry the usual three-phase
// scaling: voltage magnitude equals the line-to-line RMS value, current
// magnitude equals sqrt(3) times the phase RMS value, so the dot product
// v_d*i_d + v_q*i_q is directly the three-phase active power in watts.

struct DqVec {
    double d = 0.0;
    double q = 0.0;

    [[nodiscard]] double norm() const { return std::hypot(d, q); }

    [[nodiscard]] Eigen::Vector2d vec() const { return {d, q}; }
    static DqVec from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }

    [[nodiscard]] std::complex<double> cplx() const { return {d, q}; }
    static DqVec from(const std::complex<double>& z) { return {z.real(), z.imag()}; }
};

inline DqVec operator+(DqVec a, DqVec b) { return {a.d + b.d, a.q + b.q}; }
inline DqVec operator-(DqVec a, DqVec b) { return {a.d - b.d, a.q - b.q}; }
inline DqVec operator*(double s, DqVec a) { return {s * a.d, s * a.q}; }

/// Active power of a voltage/current pair (three-phase watts).
[[nodiscard]] inline double active_power(DqVec v, DqVec i) { return v.d * i.d + v.q * i.q; }

/// Reactive power of a voltage/current pair (three-phase vars).
[[nodiscard]] inline double reactive_power(DqVec v, DqVec i) { return v.q * i.d - v.d * i.q; }

/// The 2x2 block representing multiplication by j in the rotating frame:
/// j maps (d, q) to (-q, d).
[[nodiscard]] inline Eigen::Matrix2d rot90() {
    Eigen::Matrix2d j;
    j << 0.0, -1.0,
         1.0,  0.0;
    return j;
}

/// Real 2x2 block equivalent of multiplying by the complex scalar g:
/// [[Re, -Im], [Im, Re]].
[[nodiscard]] inline Eigen::Matrix2d cplx_block(std::complex<double> g) {
    Eigen::Matrix2d m;
    m << g.real(), -g.imag(),
         g.imag(),  g.real();
    return m;
}

/// Expands a complex matrix into its real 2x2-block form, doubling both
/// dimensions. Ordering is d, q per original row/column.
[[nodiscard]] inline Eigen::MatrixXd cplx_expand(const Eigen::MatrixXcd& g) {
    Eigen::MatrixXd m(2 * g.rows(), 2 * g.cols());
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c)
            m.block<2, 2>(2 * r, 2 * c) = cplx_block(g(r, c));
    return m;
}

} // namespace dopf
