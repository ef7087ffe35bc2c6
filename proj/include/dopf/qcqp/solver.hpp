#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dopf/common.hpp"
#include "dopf/qcqp/conic.hpp"
#include "dopf/qcqp/problem.hpp"

namespace dopf::qcqp {

// =========================================================================
// Primal-dual interior-point solver
// =========================================================================
//
// Mehrotra predictor-corrector with Nesterov-Todd scaling over the product
// of a nonnegative orthant and second-order cones. The quadratic objective
// enters the Newton system directly:
//
//     [ Q   A'  G'    ] [ dx ]   [ bx ]
//     [ A   0   0     ] [ dy ] = [ by ]          ds = W'(lambda \ bs - W dz)
//     [ G   0  -W'W   ] [ dz ]   [ bz - W'(lambda \ bs) ]
//
// factored once per iteration by a sparse LDL' with static signed
// regularization, then polished by iterative refinement against the exact
// unregularized matrix. Everything is deterministic: identical inputs give
// bit-identical iterates.

struct SolverOptions {
    int max_iterations = 200;
    double tol_gap = 1e-9;         ///< relative duality gap at convergence
    double tol_feas = 1e-9;        ///< relative primal and dual residuals
    double tol_acceptable = 1e-8;  ///< a stalled solve at or below this still counts as optimal
    double step_back = 0.99;       ///< fraction of the step to the cone boundary
    double static_reg = 1e-9;
    int refine_rounds = 3;
    bool trace = false; ///< per-iteration metrics on stderr
};

namespace detail {

struct ConeLayout {
    Eigen::Index orth = 0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> soc; ///< (start, dim)
    Eigen::Index rows = 0;

    [[nodiscard]] static ConeLayout from(const ConeDims& d) {
        ConeLayout k;
        k.orth = d.orthant;
        Eigen::Index at = d.orthant;
        for (Eigen::Index dim : d.soc) {
            k.soc.emplace_back(at, dim);
            at += dim;
        }
        k.rows = at;
        return k;
    }

    [[nodiscard]] double degree() const {
        return static_cast<double>(orth + static_cast<Eigen::Index>(soc.size()));
    }
};

[[nodiscard]] inline Eigen::VectorXd cone_identity(const ConeLayout& k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k.rows);
    e.head(k.orth).setOnes();
    for (const auto& [at, dim] : k.soc) e(at) = 1.0;
    return e;
}

/// u(0)^2 - ||u(1:)||^2 without cancellation near the boundary.
[[nodiscard]] inline double jnorm2(const Eigen::Ref<const Eigen::VectorXd>& u) {
    const double nt = u.tail(u.size() - 1).norm();
    return (u(0) - nt) * (u(0) + nt);
}

[[nodiscard]] inline double jdot(const Eigen::Ref<const Eigen::VectorXd>& a,
                                 const Eigen::Ref<const Eigen::VectorXd>& b) {
    return a(0) * b(0) - a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

/// How far u sits outside the cone; negative means strictly inside.
[[nodiscard]] inline double max_outside(const ConeLayout& k, const Eigen::VectorXd& u) {
    double t = -std::numeric_limits<double>::infinity();
    if (k.orth > 0) t = std::max(t, -u.head(k.orth).minCoeff());
    for (const auto& [at, dim] : k.soc)
        t = std::max(t, u.segment(at + 1, dim - 1).norm() - u(at));
    return t;
}

/// Jordan product over the cone layout.
[[nodiscard]] inline Eigen::VectorXd circ(const ConeLayout& k, const Eigen::VectorXd& a,
                                          const Eigen::VectorXd& b) {
    Eigen::VectorXd out(k.rows);
    out.head(k.orth) = a.head(k.orth).cwiseProduct(b.head(k.orth));
    for (const auto& [at, dim] : k.soc) {
        out(at) = a.segment(at, dim).dot(b.segment(at, dim));
        out.segment(at + 1, dim - 1) =
            a(at) * b.segment(at + 1, dim - 1) + b(at) * a.segment(at + 1, dim - 1);
    }
    return out;
}

/// Solves lam o u = r for u; lam must lie strictly inside the cone.
[[nodiscard]] inline Eigen::VectorXd circ_solve(const ConeLayout& k, const Eigen::VectorXd& lam,
                                                const Eigen::VectorXd& r) {
    Eigen::VectorXd out(k.rows);
    out.head(k.orth) = r.head(k.orth).cwiseQuotient(lam.head(k.orth));
    for (const auto& [at, dim] : k.soc) {
        const auto l = lam.segment(at, dim);
        const auto rr = r.segment(at, dim);
        const double det = jnorm2(l);
        const double u0 = (l(0) * rr(0) - l.tail(dim - 1).dot(rr.tail(dim - 1))) / det;
        out(at) = u0;
        out.segment(at + 1, dim - 1) = (rr.tail(dim - 1) - u0 * l.tail(dim - 1)) / l(0);
    }
    return out;
}

/// Nesterov-Todd scaling, W z = W^{-1} s = lambda, per cone block. W is
/// symmetric; for a second-order cone W = beta (2 v v' - J) with v'Jv = 1.
struct NtScaling {
    Eigen::VectorXd w;
    struct SocPart {
        double beta = 1.0;
        Eigen::VectorXd v;
    };
    std::vector<SocPart> soc;
    Eigen::VectorXd lambda;

    [[nodiscard]] Eigen::VectorXd apply(const ConeLayout& k, const Eigen::VectorXd& u,
                                        bool inverse) const {
        Eigen::VectorXd out(u.size());
        if (k.orth > 0)
            out.head(k.orth) = inverse ? u.head(k.orth).cwiseQuotient(w).eval()
                                       : u.head(k.orth).cwiseProduct(w).eval();
        for (size_t i = 0; i < k.soc.size(); ++i) {
            const auto [at, dim] = k.soc[i];
            const auto& p = soc[i];
            const auto useg = u.segment(at, dim);
            if (!inverse) {
                const double vu = p.v.dot(useg);
                out(at) = p.beta * (2.0 * vu * p.v(0) - useg(0));
                out.segment(at + 1, dim - 1) =
                    p.beta * (2.0 * vu * p.v.tail(dim - 1) + useg.tail(dim - 1));
            } else {
                // W^{-1} = (1/beta) J (2vv' - J) J
                const double vju = p.v(0) * useg(0) - p.v.tail(dim - 1).dot(useg.tail(dim - 1));
                out(at) = (2.0 * vju * p.v(0) - useg(0)) / p.beta;
                out.segment(at + 1, dim - 1) =
                    (useg.tail(dim - 1) - 2.0 * vju * p.v.tail(dim - 1)) / p.beta;
            }
        }
        return out;
    }
};

[[nodiscard]] inline NtScaling identity_scaling(const ConeLayout& k) {
    NtScaling sc;
    sc.w = Eigen::VectorXd::Ones(k.orth);
    for (const auto& [at, dim] : k.soc) {
        NtScaling::SocPart p;
        p.beta = 1.0;
        p.v = Eigen::VectorXd::Zero(dim);
        p.v(0) = 1.0;
        sc.soc.push_back(std::move(p));
    }
    sc.lambda = cone_identity(k);
    return sc;
}

/// Builds the scaling for strictly interior s, z; false on breakdown.
inline bool compute_scaling(const ConeLayout& k, const Eigen::VectorXd& s,
                            const Eigen::VectorXd& z, NtScaling& sc) {
    sc.w.resize(k.orth);
    sc.lambda.resize(k.rows);
    sc.soc.assign(k.soc.size(), {});
    for (Eigen::Index i = 0; i < k.orth; ++i) {
        if (!(s(i) > 0.0) || !(z(i) > 0.0)) return false;
        sc.w(i) = std::sqrt(s(i) / z(i));
        sc.lambda(i) = std::sqrt(s(i) * z(i));
    }
    for (size_t i = 0; i < k.soc.size(); ++i) {
        const auto [at, dim] = k.soc[i];
        const auto ss = s.segment(at, dim);
        const auto zs = z.segment(at, dim);
        const double as = jnorm2(ss);
        const double az = jnorm2(zs);
        if (!(as > 0.0) || !(az > 0.0) || !(ss(0) > 0.0) || !(zs(0) > 0.0)) return false;
        const double aa = std::sqrt(as);
        const double bb = std::sqrt(az);
        const double gamma = std::sqrt(0.5 * (1.0 + ss.dot(zs) / (aa * bb)));
        auto& p = sc.soc[i];
        p.beta = std::sqrt(aa / bb);
        // scaling point, then the half-angle vector that reflects e onto it
        Eigen::VectorXd wbar(dim);
        wbar(0) = (ss(0) / aa + zs(0) / bb) / (2.0 * gamma);
        wbar.tail(dim - 1) =
            (ss.tail(dim - 1) / aa - zs.tail(dim - 1) / bb) / (2.0 * gamma);
        p.v = wbar;
        p.v(0) += 1.0;
        p.v /= std::sqrt(2.0 * (1.0 + wbar(0)));
        const double s0 = ss(0) / aa;
        const double z0 = zs(0) / bb;
        const double den = s0 + z0 + 2.0 * gamma;
        const double root = std::sqrt(aa * bb);
        sc.lambda(at) = gamma * root;
        sc.lambda.segment(at + 1, dim - 1) =
            root / den *
            ((gamma + z0) * ss.tail(dim - 1) / aa + (gamma + s0) * zs.tail(dim - 1) / bb);
    }
    return true;
}

/// Largest alpha with lam + alpha u inside the cone, +inf when unbounded.
[[nodiscard]] inline double max_step(const ConeLayout& k, const Eigen::VectorXd& lam,
                                     const Eigen::VectorXd& u) {
    double amin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k.orth; ++i)
        if (u(i) < 0.0) amin = std::min(amin, -lam(i) / u(i));
    for (const auto& [at, dim] : k.soc) {
        const auto ls = lam.segment(at, dim);
        const auto us = u.segment(at, dim);
        const double f0 = jnorm2(ls);
        const double f1 = jdot(ls, us);
        const double f2 = jnorm2(us);
        if (f2 == 0.0) {
            if (f1 < 0.0) amin = std::min(amin, -f0 / (2.0 * f1));
        } else {
            const double disc = f1 * f1 - f0 * f2;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double qq = -(f1 + (f1 >= 0.0 ? sq : -sq));
                const double r1 = qq / f2;
                const double r2 = qq != 0.0 ? f0 / qq : std::numeric_limits<double>::infinity();
                if (r1 > 0.0) amin = std::min(amin, r1);
                if (r2 > 0.0) amin = std::min(amin, r2);
            }
        }
        if (us(0) < 0.0) amin = std::min(amin, -ls(0) / us(0));
    }
    return amin;
}

/// Factors the regularized Newton matrix and solves with refinement
/// against the exact unregularized operator.
class KktSolver {
public:
    KktSolver(const ConicProblem& cp, const SolverOptions& opt)
        : cp_(cp), opt_(opt), n_(cp.c.size()), p_(cp.a.rows()), m_(cp.g.rows()),
          lay_(ConeLayout::from(cp.dims)), at_(cp.a.transpose()), gt_(cp.g.transpose()) {
        base_.reserve(static_cast<size_t>(cp.q.nonZeros() + 2 * cp.a.nonZeros() +
                                          2 * cp.g.nonZeros()));
        for (Eigen::Index c = 0; c < cp.q.outerSize(); ++c)
            for (SpMat::InnerIterator it(cp.q, c); it; ++it)
                base_.emplace_back(it.row(), it.col(), it.value());
        for (Eigen::Index c = 0; c < cp.a.outerSize(); ++c)
            for (SpMat::InnerIterator it(cp.a, c); it; ++it) {
                base_.emplace_back(n_ + it.row(), it.col(), it.value());
                base_.emplace_back(it.col(), n_ + it.row(), it.value());
            }
        for (Eigen::Index c = 0; c < cp.g.outerSize(); ++c)
            for (SpMat::InnerIterator it(cp.g, c); it; ++it) {
                base_.emplace_back(n_ + p_ + it.row(), it.col(), it.value());
                base_.emplace_back(it.col(), n_ + p_ + it.row(), it.value());
            }
    }

    bool factorize(const NtScaling& sc) {
        sc_ = &sc;
        double reg = opt_.static_reg;
        for (int attempt = 0; attempt < 4; ++attempt, reg *= 100.0) {
            auto trip = base_;
            for (Eigen::Index i = 0; i < n_; ++i) trip.emplace_back(i, i, reg);
            for (Eigen::Index i = 0; i < p_; ++i) trip.emplace_back(n_ + i, n_ + i, -reg);
            const Eigen::Index off = n_ + p_;
            for (Eigen::Index i = 0; i < lay_.orth; ++i)
                trip.emplace_back(off + i, off + i, -(sc.w(i) * sc.w(i) + reg));
            for (size_t ci = 0; ci < lay_.soc.size(); ++ci) {
                const auto [at, dim] = lay_.soc[ci];
                const auto& p = sc.soc[ci];
                Eigen::VectorXd jv(dim);
                jv(0) = p.v(0);
                jv.tail(dim - 1) = -p.v.tail(dim - 1);
                const double b2 = p.beta * p.beta;
                const double vv = p.v.squaredNorm();
                Eigen::MatrixXd blk = b2 * (4.0 * vv * (p.v * p.v.transpose()) -
                                            2.0 * (p.v * jv.transpose() + jv * p.v.transpose()) +
                                            Eigen::MatrixXd::Identity(dim, dim));
                for (Eigen::Index r = 0; r < dim; ++r)
                    for (Eigen::Index c = 0; c < dim; ++c)
                        trip.emplace_back(off + at + r, off + at + c,
                                          -(blk(r, c) + (r == c ? reg : 0.0)));
            }
            SpMat kmat(n_ + p_ + m_, n_ + p_ + m_);
            kmat.setFromTriplets(trip.begin(), trip.end());
            if (!analyzed_) {
                ldlt_.analyzePattern(kmat);
                analyzed_ = true;
            }
            ldlt_.factorize(kmat);
            if (ldlt_.info() == Eigen::Success) return true;
        }
        return false;
    }

    void solve(Eigen::VectorXd& rhs) const {
        Eigen::VectorXd u = ldlt_.solve(rhs);
        const double ref = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
        for (int round = 0; round < opt_.refine_rounds; ++round) {
            if (!u.allFinite()) break;
            Eigen::VectorXd res = rhs - exact_mul(u);
            if (!res.allFinite() || res.lpNorm<Eigen::Infinity>() <= 1e-14 * ref) break;
            u += ldlt_.solve(res);
        }
        rhs = u;
    }

private:
    [[nodiscard]] Eigen::VectorXd exact_mul(const Eigen::VectorXd& u) const {
        const Eigen::VectorXd ux = u.head(n_);
        const Eigen::VectorXd uy = u.segment(n_, p_);
        const Eigen::VectorXd uz = u.tail(m_);
        Eigen::VectorXd out(n_ + p_ + m_);
        out.head(n_) = cp_.q * ux + at_ * uy + gt_ * uz;
        out.segment(n_, p_) = cp_.a * ux;
        if (m_ > 0)
            out.tail(m_) = cp_.g * ux - sc_->apply(lay_, sc_->apply(lay_, uz, false), false);
        return out;
    }

    const ConicProblem& cp_;
    SolverOptions opt_;
    Eigen::Index n_, p_, m_;
    ConeLayout lay_;
    SpMat at_, gt_;
    std::vector<Eigen::Triplet<double>> base_;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
    const NtScaling* sc_ = nullptr;
    bool analyzed_ = false;
};

} // namespace detail

/// Solves the cone program; warm_x (scaled space) seeds the primal point.
[[nodiscard]] inline ConicResult solve_conic(const ConicProblem& cp, const SolverOptions& opt = {},
                                             const Eigen::VectorXd* warm_x = nullptr) {
    using namespace detail;
    const Eigen::Index n = cp.c.size();
    const Eigen::Index p = cp.a.rows();
    const Eigen::Index m = cp.g.rows();
    const ConeLayout lay = ConeLayout::from(cp.dims);
    if (lay.rows != m)
        throw validation_error("qcqp: cone dimensions do not match the inequality rows");

    ConicResult res;
    res.x = Eigen::VectorXd::Zero(n);
    res.y = Eigen::VectorXd::Zero(p);
    res.z = Eigen::VectorXd::Zero(m);
    res.s = Eigen::VectorXd::Zero(m);
    KktSolver kkt(cp, opt);
    NtScaling sc = identity_scaling(lay);
    if (!kkt.factorize(sc)) return res;

    if (m == 0) {
        Eigen::VectorXd rhs(n + p);
        rhs << -cp.c, cp.b;
        kkt.solve(rhs);
        if (!rhs.allFinite()) return res;
        res.x = rhs.head(n);
        res.y = rhs.tail(p);
        res.z.resize(0);
        res.s.resize(0);
        const Eigen::VectorXd rx = cp.q * res.x + cp.c + cp.a.transpose() * res.y;
        res.dres = rx.norm() / std::max(1.0, cp.c.norm());
        res.pres = p > 0 ? (cp.a * res.x - cp.b).norm() / std::max(1.0, cp.b.norm()) : 0.0;
        res.status = std::max(res.dres, res.pres) <= opt.tol_acceptable
                         ? SolveStatus::optimal
                         : SolveStatus::numerical_error;
        return res;
    }

    const SpMat at = cp.a.transpose();
    const SpMat gt = cp.g.transpose();
    const Eigen::VectorXd e = cone_identity(lay);
    const double degree = lay.degree();
    const double resx0 = std::max(1.0, cp.c.norm());
    const double resy0 = std::max(1.0, cp.b.norm());
    const double resz0 = std::max(1.0, cp.h.norm());

    Eigen::VectorXd rhs(n + p + m);
    rhs << -cp.c, cp.b, cp.h;
    kkt.solve(rhs);
    if (!rhs.allFinite()) return res;
    Eigen::VectorXd x = rhs.head(n);
    Eigen::VectorXd y = rhs.segment(n, p);
    Eigen::VectorXd z = rhs.tail(m);
    Eigen::VectorXd s = -z;
    auto shift_into_cone = [&](Eigen::VectorXd& u, double pad_frac) {
        const double pad = pad_frac * std::max(1.0, u.lpNorm<Eigen::Infinity>());
        const double t = max_outside(lay, u);
        if (t >= -pad) u += (t + pad) * e;
    };
    if (warm_x != nullptr && warm_x->size() == n) {
        x = *warm_x;
        s = cp.h - cp.g * x;
        shift_into_cone(s, 1e-3);
    } else {
        shift_into_cone(s, 1.0);
    }
    shift_into_cone(z, 1.0);

    struct Snapshot {
        Eigen::VectorXd x, y, z, s;
        double gap = 0, relgap = 0, pres = 0, dres = 0;
        double metric = std::numeric_limits<double>::infinity();
    } best;

    SolveStatus exit = SolveStatus::max_iterations;
    int last_gain = 0;
    int iter = 0;
    bool converged = false;
    for (;; ++iter) {
        const Eigen::VectorXd rx = cp.q * x + cp.c + at * y + gt * z;
        const Eigen::VectorXd ry = cp.a * x - cp.b;
        const Eigen::VectorXd rz = cp.g * x + s - cp.h;
        const double gap = s.dot(z);
        const double pcost = 0.5 * x.dot(cp.q * x) + cp.c.dot(x);
        const double relgap = std::abs(gap) / std::max(1.0, std::abs(pcost));
        const double pres = std::max(ry.norm() / resy0, rz.norm() / resz0);
        const double dres = rx.norm() / resx0;
        const double metric = std::max({relgap, pres, dres});
        if (opt.trace)
            std::fprintf(stderr, "iter %3d  pcost % .6e  gap %.3e  relgap %.3e  pres %.3e  dres %.3e\n",
                         iter, pcost, gap, relgap, pres, dres);
        converged = pres <= opt.tol_feas && dres <= opt.tol_feas && relgap <= opt.tol_gap;
        if (metric < 0.999 * best.metric || converged) {
            best = Snapshot{x, y, z, s, gap, relgap, pres, dres, metric};
            last_gain = iter;
        }
        if (converged) {
            exit = SolveStatus::optimal;
            break;
        }
        if (iter >= opt.max_iterations) {
            exit = SolveStatus::max_iterations;
            break;
        }
        if (iter - last_gain > 8) {
            exit = SolveStatus::stalled;
            break;
        }
        if (!compute_scaling(lay, s, z, sc)) {
            exit = SolveStatus::stalled;
            break;
        }
        if (!kkt.factorize(sc)) {
            exit = SolveStatus::numerical_error;
            break;
        }
        const double mu = gap / degree;

        // predictor
        rhs.resize(n + p + m);
        rhs << -rx, -ry, (-rz + s);
        kkt.solve(rhs);
        const Eigen::VectorXd dza = rhs.tail(m);
        const Eigen::VectorXd dsa = -s - sc.apply(lay, sc.apply(lay, dza, false), false);
        const Eigen::VectorXd us = sc.apply(lay, dsa, true);
        const Eigen::VectorXd uz = sc.apply(lay, dza, false);
        const double alpha_aff =
            std::min(1.0, opt.step_back * std::min(max_step(lay, sc.lambda, us),
                                                   max_step(lay, sc.lambda, uz)));
        const double dsdz = us.dot(uz);
        const double sigma = std::pow(
            std::clamp(1.0 - alpha_aff + alpha_aff * alpha_aff * dsdz / gap, 0.0, 1.0), 3.0);

        // corrector and combined step
        const Eigen::VectorXd bs =
            -circ(lay, sc.lambda, sc.lambda) - circ(lay, us, uz) + (sigma * mu) * e;
        const Eigen::VectorXd w2 = circ_solve(lay, sc.lambda, bs);
        rhs << -rx, -ry, (-rz - sc.apply(lay, w2, false));
        kkt.solve(rhs);
        const Eigen::VectorXd dx = rhs.head(n);
        const Eigen::VectorXd dy = rhs.segment(n, p);
        const Eigen::VectorXd dz = rhs.tail(m);
        const Eigen::VectorXd ds = sc.apply(lay, (w2 - sc.apply(lay, dz, false)).eval(), false);
        const Eigen::VectorXd us2 = sc.apply(lay, ds, true);
        const Eigen::VectorXd uz2 = sc.apply(lay, dz, false);
        const double alpha =
            std::min(1.0, opt.step_back * std::min(max_step(lay, sc.lambda, us2),
                                                   max_step(lay, sc.lambda, uz2)));
        x += alpha * dx;
        y += alpha * dy;
        z += alpha * dz;
        s += alpha * ds;
        if (!x.allFinite() || !y.allFinite() || !z.allFinite() || !s.allFinite()) {
            exit = SolveStatus::numerical_error;
            break;
        }
    }

    res.x = std::move(best.x);
    res.y = std::move(best.y);
    res.z = std::move(best.z);
    res.s = std::move(best.s);
    res.gap = best.gap;
    res.rel_gap = best.relgap;
    res.pres = best.pres;
    res.dres = best.dres;
    res.iterations = iter;
    if (exit == SolveStatus::optimal || best.metric <= opt.tol_acceptable)
        res.status = SolveStatus::optimal;
    else
        res.status = exit;
    return res;
}

/// Solves a QCQP; warm (original space) seeds the primal point and falls
/// back to a cold solve when it does not reach optimality.
[[nodiscard]] inline QcqpSolution solve(const QcqpProblem& pr, const SolverOptions& opt = {},
                                        const Eigen::VectorXd* warm = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConicBuild cb = build_conic(pr);
    ConicResult cr;
    if (warm != nullptr && warm->size() == pr.n && warm->allFinite()) {
        const Eigen::VectorXd wx = warm->cwiseQuotient(cb.map.col_scale);
        cr = solve_conic(cb.cp, opt, &wx);
        if (cr.status != SolveStatus::optimal) {
            ConicResult cold = solve_conic(cb.cp, opt, nullptr);
            if (cold.status == SolveStatus::optimal || cold.worst() < cr.worst()) cr = cold;
        }
    } else {
        cr = solve_conic(cb.cp, opt, nullptr);
    }
    QcqpSolution sol = lift_solution(pr, cb, cr);
    sol.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

} // namespace dopf::qcqp
