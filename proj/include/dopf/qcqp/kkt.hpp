#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>

#include "dopf/qcqp/conic.hpp"
#include "dopf/qcqp/problem.hpp"

namespace dopf::qcqp {

/// Relative optimality residuals of a candidate primal-dual pair, measured
/// in the original variable space (not the solver's scaled cone space).
/// Each entry is normalized by the magnitude of the terms that feed it, so
/// a well-solved problem reports values near machine precision regardless
/// of the physical units involved.
struct KktReport {
    double stationarity = 0.0;
    double primal = 0.0;
    double dual = 0.0;
    double complementarity = 0.0;

    [[nodiscard]] double worst() const {
        return std::max({stationarity, primal, dual, complementarity});
    }
};

[[nodiscard]] inline KktReport verify_kkt(const QcqpProblem& pr, const QcqpSolution& sol) {
    const Eigen::VectorXd& x = sol.x;
    KktReport rep;

    // gradient of the Lagrangian
    Eigen::VectorXd grad = pr.q * x + pr.c;
    double scale = std::max({1.0, (pr.q * x).lpNorm<Eigen::Infinity>(),
                             pr.c.lpNorm<Eigen::Infinity>()});
    if (pr.a.rows() > 0) {
        const Eigen::VectorXd aty = pr.a.transpose() * sol.y;
        grad += aty;
        scale = std::max(scale, aty.lpNorm<Eigen::Infinity>());
    }
    // Quadratic constraints with curvature are certified through their
    // epigraph cone: the stored cone dual reproduces the stationarity
    // contribution exactly, while the scalar multiplier alone would leave an
    // O(sqrt(gap)) residual along the constraint gradient.
    std::vector<Eigen::MatrixXd> lift(pr.quads.size());
    for (size_t k = 0; k < pr.quads.size(); ++k) {
        Eigen::VectorXd t;
        if (k < sol.quad_cone_dual.size() && sol.quad_cone_dual[k].size() > 0) {
            lift[k] = detail::psd_factor_t(pr.quads[k].p, k);
            const Eigen::VectorXd& zeta = sol.quad_cone_dual[k];
            const Eigen::Index dim = zeta.size();
            t = (zeta(0) + zeta(dim - 1)) * pr.quads[k].q -
                lift[k].transpose() * zeta.segment(1, dim - 2);
        } else {
            t = sol.quad_mu(static_cast<Eigen::Index>(k)) * (pr.quads[k].p * x + pr.quads[k].q);
        }
        grad += t;
        scale = std::max(scale, t.lpNorm<Eigen::Infinity>());
    }
    for (size_t k = 0; k < pr.socs.size(); ++k) {
        const auto& scn = pr.socs[k];
        const Eigen::VectorXd& zk = sol.soc_dual[k];
        Eigen::VectorXd t = -zk(0) * scn.d;
        if (scn.f.rows() > 0) t -= scn.f.transpose() * zk.tail(zk.size() - 1);
        grad += t;
        scale = std::max(scale, t.lpNorm<Eigen::Infinity>());
    }
    grad += sol.z_ub - sol.z_lb;
    scale = std::max({scale, sol.z_ub.lpNorm<Eigen::Infinity>(),
                      sol.z_lb.lpNorm<Eigen::Infinity>()});
    rep.stationarity = grad.lpNorm<Eigen::Infinity>() / scale;

    // primal feasibility
    if (pr.a.rows() > 0)
        rep.primal = (pr.a * x - pr.b).lpNorm<Eigen::Infinity>() /
                     std::max(1.0, pr.b.lpNorm<Eigen::Infinity>());
    for (Eigen::Index i = 0; i < pr.n; ++i) {
        if (std::isfinite(pr.lb(i)))
            rep.primal = std::max(rep.primal, (pr.lb(i) - x(i)) / std::max(1.0, std::abs(pr.lb(i))));
        if (std::isfinite(pr.ub(i)))
            rep.primal = std::max(rep.primal, (x(i) - pr.ub(i)) / std::max(1.0, std::abs(pr.ub(i))));
    }
    for (size_t k = 0; k < pr.quads.size(); ++k) {
        const auto& qc = pr.quads[k];
        const double quad_part = 0.5 * x.dot(qc.p * x);
        const double lin_part = qc.q.dot(x);
        const double mag = std::max({1.0, std::abs(quad_part), std::abs(lin_part), std::abs(qc.bound)});
        rep.primal = std::max(rep.primal, (quad_part + lin_part - qc.bound) / mag);
    }
    for (size_t k = 0; k < pr.socs.size(); ++k) {
        const auto& scn = pr.socs[k];
        const double lhs = scn.f.rows() > 0 ? (scn.f * x + scn.g).norm() : 0.0;
        const double rhs = scn.d.dot(x) + scn.e;
        rep.primal = std::max(rep.primal, (lhs - rhs) / std::max({1.0, lhs, std::abs(rhs)}));
    }
    rep.primal = std::max(rep.primal, 0.0);

    // dual feasibility
    for (Eigen::Index k = 0; k < sol.quad_mu.size(); ++k) {
        rep.dual = std::max(rep.dual, -sol.quad_mu(k) / std::max(1.0, std::abs(sol.quad_mu(k))));
        const size_t ks = static_cast<size_t>(k);
        if (ks < sol.quad_cone_dual.size() && sol.quad_cone_dual[ks].size() > 0) {
            const Eigen::VectorXd& zeta = sol.quad_cone_dual[ks];
            const double head = zeta(0);
            const double tail = zeta.tail(zeta.size() - 1).norm();
            rep.dual = std::max(rep.dual, (tail - head) / std::max(1.0, head));
        }
    }
    for (Eigen::Index i = 0; i < pr.n; ++i) {
        rep.dual = std::max(rep.dual, -sol.z_lb(i) / std::max(1.0, std::abs(sol.z_lb(i))));
        rep.dual = std::max(rep.dual, -sol.z_ub(i) / std::max(1.0, std::abs(sol.z_ub(i))));
    }
    for (const auto& zk : sol.soc_dual) {
        const double lam = zk(0);
        const double nu = zk.size() > 1 ? zk.tail(zk.size() - 1).norm() : 0.0;
        rep.dual = std::max(rep.dual, (nu - lam) / std::max(1.0, lam));
    }
    rep.dual = std::max(rep.dual, 0.0);

    // complementary slackness
    for (size_t k = 0; k < pr.quads.size(); ++k) {
        const auto& qc = pr.quads[k];
        double pairing;
        if (k < sol.quad_cone_dual.size() && sol.quad_cone_dual[k].size() > 0) {
            const Eigen::VectorXd& zeta = sol.quad_cone_dual[k];
            const Eigen::Index dim = zeta.size();
            const double lin = qc.q.dot(x);
            pairing = zeta(0) * (qc.bound + 0.5 - lin) + zeta(dim - 1) * (qc.bound - 0.5 - lin) +
                      zeta.segment(1, dim - 2).dot(lift[k] * x);
        } else {
            const double slack = qc.bound - 0.5 * x.dot(qc.p * x) - qc.q.dot(x);
            pairing = sol.quad_mu(static_cast<Eigen::Index>(k)) * slack;
        }
        rep.complementarity = std::max(rep.complementarity,
                                       std::abs(pairing) / std::max(1.0, std::abs(qc.bound)));
    }
    for (Eigen::Index i = 0; i < pr.n; ++i) {
        if (std::isfinite(pr.lb(i)))
            rep.complementarity =
                std::max(rep.complementarity,
                         std::abs(sol.z_lb(i) * (x(i) - pr.lb(i))) / std::max(1.0, std::abs(pr.lb(i))));
        if (std::isfinite(pr.ub(i)))
            rep.complementarity =
                std::max(rep.complementarity,
                         std::abs(sol.z_ub(i) * (pr.ub(i) - x(i))) / std::max(1.0, std::abs(pr.ub(i))));
    }
    for (size_t k = 0; k < pr.socs.size(); ++k) {
        const auto& scn = pr.socs[k];
        const Eigen::VectorXd& zk = sol.soc_dual[k];
        const double rhs = scn.d.dot(x) + scn.e;
        double pairing = zk(0) * rhs;
        if (scn.f.rows() > 0) pairing += zk.tail(zk.size() - 1).dot(scn.f * x + scn.g);
        rep.complementarity =
            std::max(rep.complementarity, std::abs(pairing) / std::max(1.0, std::abs(rhs)));
    }
    return rep;
}

} // namespace dopf::qcqp
