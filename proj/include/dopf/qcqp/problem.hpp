#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dopf/common.hpp"

namespace dopf::qcqp {

using SpMat = Eigen::SparseMatrix<double>;

namespace detail {

inline bool sparse_finite(const SpMat& m) {
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            if (!std::isfinite(it.value())) return false;
    return true;
}

inline double sparse_max_abs(const SpMat& m) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

inline double asymmetry(const SpMat& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    SpMat d = SpMat(m.transpose()) - m;
    return sparse_max_abs(d);
}

} // namespace detail

/// One convex quadratic inequality, (1/2) x' P x + q' x <= bound, with P
/// positive semidefinite. A zero P gives a plain linear inequality.
struct QuadConstraint {
    SpMat p;
    Eigen::VectorXd q;
    double bound = 0.0;
};

/// One second-order cone constraint, ||F x + g|| <= d' x + e.
struct SocConstraint {
    SpMat f;
    Eigen::VectorXd g;
    Eigen::VectorXd d;
    double e = 0.0;
};

/// Convex quadratically constrained program
///
///     minimize    (1/2) x' Q x + c' x + r
///     subject to  A x = b
///                 (1/2) x' P_k x + q_k' x <= s_k
///                 ||F_k x + g_k|| <= d_k' x + e_k
///                 lb <= x <= ub
///
/// Q and every P_k must be positive semidefinite and stored symmetrically.
/// Bounds may be infinite; a variable with equal finite bounds is pinned to
/// that value.
struct QcqpProblem {
    Eigen::Index n = 0;
    SpMat q;
    Eigen::VectorXd c;
    double r = 0.0;
    SpMat a;
    Eigen::VectorXd b;
    std::vector<QuadConstraint> quads;
    std::vector<SocConstraint> socs;
    Eigen::VectorXd lb;
    Eigen::VectorXd ub;

    void validate() const {
        auto fail = [](const std::string& what) { throw validation_error("qcqp: " + what); };
        if (n < 1) fail("problem has no variables");
        if (q.rows() != n || q.cols() != n)
            fail("objective matrix is " + std::to_string(q.rows()) + "x" + std::to_string(q.cols()) +
                 ", expected " + std::to_string(n) + "x" + std::to_string(n));
        if (!detail::sparse_finite(q)) fail("objective matrix has non-finite entries");
        if (detail::asymmetry(q) > 1e-9 * (1.0 + detail::sparse_max_abs(q)))
            fail("objective matrix is not symmetric");
        if (c.size() != n) fail("linear cost has wrong length");
        if (!c.allFinite() || !std::isfinite(r)) fail("linear cost has non-finite entries");
        if (a.rows() > 0 && a.cols() != n) fail("equality matrix has wrong column count");
        if (b.size() != a.rows()) fail("equality right-hand side has wrong length");
        if (!detail::sparse_finite(a) || !b.allFinite()) fail("equalities have non-finite entries");
        if (lb.size() != n || ub.size() != n) fail("bounds have wrong length");
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::isnan(lb(i)) || std::isnan(ub(i)))
                fail("bounds of variable " + std::to_string(i) + " are NaN");
            if (lb(i) > ub(i)) fail("variable " + std::to_string(i) + " has lb > ub");
            if (lb(i) == ub(i) && !std::isfinite(lb(i)))
                fail("variable " + std::to_string(i) + " is pinned to an infinite value");
        }
        for (size_t k = 0; k < quads.size(); ++k) {
            const auto& qc = quads[k];
            const std::string name = "quadratic constraint " + std::to_string(k);
            if (qc.p.rows() != n || qc.p.cols() != n) fail(name + " has a wrong-sized matrix");
            if (!detail::sparse_finite(qc.p)) fail(name + " has non-finite matrix entries");
            if (detail::asymmetry(qc.p) > 1e-9 * (1.0 + detail::sparse_max_abs(qc.p)))
                fail(name + " has a non-symmetric matrix");
            if (qc.q.size() != n) fail(name + " has a wrong-sized linear term");
            if (!qc.q.allFinite() || !std::isfinite(qc.bound)) fail(name + " has non-finite terms");
            if (qc.p.nonZeros() == 0 && qc.q.lpNorm<Eigen::Infinity>() == 0.0)
                fail(name + " references no variables");
        }
        for (size_t k = 0; k < socs.size(); ++k) {
            const auto& sc = socs[k];
            const std::string name = "cone constraint " + std::to_string(k);
            if (sc.f.rows() > 0 && sc.f.cols() != n) fail(name + " has a wrong-sized matrix");
            if (!detail::sparse_finite(sc.f)) fail(name + " has non-finite matrix entries");
            if (sc.g.size() != sc.f.rows()) fail(name + " has a wrong-sized offset");
            if (sc.d.size() != n) fail(name + " has a wrong-sized right-hand term");
            if (!sc.g.allFinite() || !sc.d.allFinite() || !std::isfinite(sc.e))
                fail(name + " has non-finite terms");
            if (sc.f.nonZeros() == 0 && sc.d.lpNorm<Eigen::Infinity>() == 0.0)
                fail(name + " references no variables");
        }
    }
};

/// Empty problem with n free variables.
[[nodiscard]] inline QcqpProblem make_problem(Eigen::Index n) {
    QcqpProblem pr;
    pr.n = n;
    pr.q = SpMat(n, n);
    pr.c = Eigen::VectorXd::Zero(n);
    pr.a = SpMat(0, n);
    pr.b = Eigen::VectorXd(0);
    const double inf = std::numeric_limits<double>::infinity();
    pr.lb = Eigen::VectorXd::Constant(n, -inf);
    pr.ub = Eigen::VectorXd::Constant(n, inf);
    return pr;
}

[[nodiscard]] inline double objective_value(const QcqpProblem& pr, const Eigen::VectorXd& x) {
    return 0.5 * x.dot(pr.q * x) + pr.c.dot(x) + pr.r;
}

enum class SolveStatus { optimal, max_iterations, stalled, numerical_error };

[[nodiscard]] inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::stalled: return "stalled";
        default: return "numerical_error";
    }
}

/// Primal-dual solution in the original variable space. Multiplier signs
/// follow the Lagrangian
///
///   L = f(x) + y'(Ax - b) + sum mu_k ((1/2) x'P_k x + q_k'x - s_k)
///            - sum (lambda_k (d_k'x + e_k) + nu_k'(F_k x + g_k))
///            + z_ub'(x - ub) + z_lb'(lb - x)
///
/// so mu, z_lb, z_ub are nonnegative and each soc dual (lambda; nu) lies in
/// its cone, lambda >= ||nu||.
struct QcqpSolution {
    SolveStatus status = SolveStatus::numerical_error;
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
    double solve_seconds = 0.0; ///< wall time; the one field that is not replay-deterministic

    Eigen::VectorXd y;
    Eigen::VectorXd quad_mu;
    /// Cone-space dual of each quadratic constraint that entered through the
    /// epigraph cone (empty for constraints with no curvature, whose quad_mu
    /// is exact). The scalar quad_mu is recovered from this vector and drifts
    /// off the exact multiplier by O(sqrt(gap)); certificates that need full
    /// precision should pair this vector with the cone rows instead.
    std::vector<Eigen::VectorXd> quad_cone_dual;
    std::vector<Eigen::VectorXd> soc_dual; ///< per constraint, (lambda; nu)
    Eigen::VectorXd z_lb;
    Eigen::VectorXd z_ub;

    double gap = 0.0;
    double rel_gap = 0.0;
    double rel_primal_res = 0.0;
    double rel_dual_res = 0.0;
};

} // namespace dopf::qcqp
