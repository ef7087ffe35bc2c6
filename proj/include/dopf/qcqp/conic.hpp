#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dopf/common.hpp"
#include "dopf/qcqp/problem.hpp"

namespace dopf::qcqp {

// =========================================================================
// Conic reformulation
// =========================================================================
//
// The interior-point core solves the equilibrated cone program
//
//     minimize    (1/2) x' Q x + c' x
//     subject to  A x = b,   G x + s = h,   s in K
//
// where K is a nonnegative orthant followed by second-order cones. Bounds
// become orthant rows (equal bounds become equality rows), a quadratic
// inequality (1/2) x'Px + q'x <= s with P = LL' becomes the cone membership
//
//     || [ L'x ; s - q'x - 1/2 ] ||  <=  s - q'x + 1/2
//
// and an explicit cone constraint maps over directly. The map records where
// every original object landed so the multipliers can be folded back.

struct ConeDims {
    Eigen::Index orthant = 0;
    std::vector<Eigen::Index> soc;

    [[nodiscard]] Eigen::Index total() const {
        Eigen::Index t = orthant;
        for (Eigen::Index d : soc) t += d;
        return t;
    }
};

struct ConicProblem {
    SpMat q;
    Eigen::VectorXd c;
    SpMat a;
    Eigen::VectorXd b;
    SpMat g;
    Eigen::VectorXd h;
    ConeDims dims;
};

struct ConicMap {
    Eigen::VectorXd col_scale; ///< x = col_scale .* x_scaled
    double obj_scale = 1.0;
    Eigen::VectorXd a_row_scale;
    Eigen::VectorXd g_row_scale; ///< uniform within each cone

    Eigen::Index n_eq = 0;              ///< original equality rows in a
    std::vector<Eigen::Index> pinned;   ///< variables fixed by equal bounds
    std::vector<Eigen::Index> lb_row;   ///< orthant row per variable, -1 when absent
    std::vector<Eigen::Index> ub_row;

    struct Ref {
        Eigen::Index row = -1;  ///< orthant row when the constraint degenerated to one
        Eigen::Index cone = -1; ///< cone index otherwise
    };
    std::vector<Ref> quad_ref;
    std::vector<Ref> soc_ref;
    std::vector<Eigen::Index> cone_row; ///< start row of each cone inside g
};

struct ConicBuild {
    ConicProblem cp;
    ConicMap map;
};

/// Conic-space result; lift_solution folds it back to the original classes.
struct ConicResult {
    SolveStatus status = SolveStatus::numerical_error;
    Eigen::VectorXd x, y, z, s;
    int iterations = 0;
    double gap = 0.0, rel_gap = 0.0, pres = 0.0, dres = 0.0;

    [[nodiscard]] double worst() const { return std::max({rel_gap, pres, dres}); }
};

namespace detail {

/// Rank-revealing factor of a PSD matrix, returned as L' with P = L L'.
/// Throws when P has a clearly negative eigenvalue.
inline Eigen::MatrixXd psd_factor_t(const SpMat& p, size_t which) {
    Eigen::MatrixXd dense = Eigen::MatrixXd(p);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(dense);
    Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.size() > 0 ? d.maxCoeff() : 0.0;
    if (d.size() > 0 && d.minCoeff() < -1e-8 * std::max(1.0, dmax))
        throw validation_error("qcqp: quadratic constraint " + std::to_string(which) +
                               " is not positive semidefinite");
    Eigen::MatrixXd m = ldlt.transpositionsP().transpose() * Eigen::MatrixXd(ldlt.matrixL());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (d(i) > 1e-12 * std::max(1.0, dmax)) keep.push_back(i);
    Eigen::MatrixXd lt(static_cast<Eigen::Index>(keep.size()), p.rows());
    for (size_t r = 0; r < keep.size(); ++r)
        lt.row(static_cast<Eigen::Index>(r)) = std::sqrt(d(keep[r])) * m.col(keep[r]).transpose();
    return lt;
}

} // namespace detail

[[nodiscard]] inline ConicBuild build_conic(const QcqpProblem& pr) {
    pr.validate();
    const Eigen::Index n = pr.n;
    ConicBuild out;
    ConicMap& map = out.map;
    ConicProblem& cp = out.cp;

    map.n_eq = pr.a.rows();
    map.lb_row.assign(static_cast<size_t>(n), -1);
    map.ub_row.assign(static_cast<size_t>(n), -1);
    map.quad_ref.resize(pr.quads.size());
    map.soc_ref.resize(pr.socs.size());

    std::vector<char> pin(static_cast<size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i)
        if (pr.lb(i) == pr.ub(i)) {
            pin[static_cast<size_t>(i)] = 1;
            map.pinned.push_back(i);
        }

    std::vector<Eigen::MatrixXd> lift(pr.quads.size());
    for (size_t k = 0; k < pr.quads.size(); ++k) lift[k] = detail::psd_factor_t(pr.quads[k].p, k);

    // --- inequality block ---
    std::vector<Eigen::Triplet<double>> gt;
    std::vector<double> hv;
    Eigen::Index row = 0;
    auto push_dense_row = [&](const Eigen::VectorXd& v, double sign, double rhs) {
        for (Eigen::Index j = 0; j < n; ++j)
            if (v(j) != 0.0) gt.emplace_back(row, j, sign * v(j));
        hv.push_back(rhs);
        ++row;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        if (!pin[static_cast<size_t>(i)] && std::isfinite(pr.lb(i))) {
            gt.emplace_back(row, i, -1.0);
            hv.push_back(-pr.lb(i));
            map.lb_row[static_cast<size_t>(i)] = row++;
        }
    for (Eigen::Index i = 0; i < n; ++i)
        if (!pin[static_cast<size_t>(i)] && std::isfinite(pr.ub(i))) {
            gt.emplace_back(row, i, 1.0);
            hv.push_back(pr.ub(i));
            map.ub_row[static_cast<size_t>(i)] = row++;
        }
    for (size_t k = 0; k < pr.quads.size(); ++k)
        if (lift[k].rows() == 0) {
            map.quad_ref[k].row = row;
            push_dense_row(pr.quads[k].q, 1.0, pr.quads[k].bound);
        }
    for (size_t k = 0; k < pr.socs.size(); ++k)
        if (pr.socs[k].f.rows() == 0) {
            map.soc_ref[k].row = row;
            push_dense_row(pr.socs[k].d, -1.0, pr.socs[k].e);
        }
    cp.dims.orthant = row;

    for (size_t k = 0; k < pr.socs.size(); ++k) {
        const auto& sc = pr.socs[k];
        if (sc.f.rows() == 0) continue;
        map.soc_ref[k].cone = static_cast<Eigen::Index>(cp.dims.soc.size());
        map.cone_row.push_back(row);
        push_dense_row(sc.d, -1.0, sc.e);
        const Eigen::Index base = row;
        for (Eigen::Index c = 0; c < sc.f.outerSize(); ++c)
            for (SpMat::InnerIterator it(sc.f, c); it; ++it)
                gt.emplace_back(base + it.row(), it.col(), -it.value());
        for (Eigen::Index r = 0; r < sc.f.rows(); ++r) hv.push_back(sc.g(r));
        row += sc.f.rows();
        cp.dims.soc.push_back(sc.f.rows() + 1);
    }
    for (size_t k = 0; k < pr.quads.size(); ++k) {
        if (lift[k].rows() == 0) continue;
        const auto& qc = pr.quads[k];
        map.quad_ref[k].cone = static_cast<Eigen::Index>(cp.dims.soc.size());
        map.cone_row.push_back(row);
        push_dense_row(qc.q, 1.0, qc.bound + 0.5);
        const Eigen::Index base = row;
        for (Eigen::Index r = 0; r < lift[k].rows(); ++r) {
            for (Eigen::Index j = 0; j < n; ++j)
                if (lift[k](r, j) != 0.0) gt.emplace_back(base + r, j, -lift[k](r, j));
            hv.push_back(0.0);
        }
        row += lift[k].rows();
        push_dense_row(qc.q, 1.0, qc.bound - 0.5);
        cp.dims.soc.push_back(lift[k].rows() + 2);
    }
    const Eigen::Index m = row;

    // --- equality block, original rows then pins ---
    const Eigen::Index pa = map.n_eq + static_cast<Eigen::Index>(map.pinned.size());
    std::vector<Eigen::Triplet<double>> at;
    for (Eigen::Index c = 0; c < pr.a.outerSize(); ++c)
        for (SpMat::InnerIterator it(pr.a, c); it; ++it)
            at.emplace_back(it.row(), it.col(), it.value());
    Eigen::VectorXd b(pa);
    b.head(map.n_eq) = pr.b;
    for (size_t k = 0; k < map.pinned.size(); ++k) {
        at.emplace_back(map.n_eq + static_cast<Eigen::Index>(k), map.pinned[k], 1.0);
        b(map.n_eq + static_cast<Eigen::Index>(k)) = pr.lb(map.pinned[k]);
    }

    cp.q = pr.q;
    cp.c = pr.c;
    cp.a = SpMat(pa, n);
    cp.a.setFromTriplets(at.begin(), at.end());
    cp.b = b;
    cp.g = SpMat(m, n);
    cp.g.setFromTriplets(gt.begin(), gt.end());
    cp.h.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) cp.h(i) = hv[static_cast<size_t>(i)];

    // --- equilibration: column passes, then rows, then the cost ---
    Eigen::VectorXd col = Eigen::VectorXd::Ones(n);
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::VectorXd mx = Eigen::VectorXd::Zero(n);
        auto scan = [&](const SpMat& mat) {
            for (Eigen::Index c = 0; c < mat.outerSize(); ++c)
                for (SpMat::InnerIterator it(mat, c); it; ++it)
                    mx(it.col()) = std::max(mx(it.col()), std::abs(it.value()));
        };
        scan(cp.q);
        scan(cp.a);
        scan(cp.g);
        Eigen::VectorXd f(n);
        for (Eigen::Index j = 0; j < n; ++j) f(j) = mx(j) > 0.0 ? 1.0 / std::sqrt(mx(j)) : 1.0;
        col = col.cwiseProduct(f);
        cp.q = f.asDiagonal() * cp.q * f.asDiagonal();
        cp.a = cp.a * f.asDiagonal();
        cp.g = cp.g * f.asDiagonal();
    }
    map.col_scale = col;

    auto row_maxima = [](const SpMat& mat) {
        Eigen::VectorXd mx = Eigen::VectorXd::Zero(mat.rows());
        for (Eigen::Index c = 0; c < mat.outerSize(); ++c)
            for (SpMat::InnerIterator it(mat, c); it; ++it)
                mx(it.row()) = std::max(mx(it.row()), std::abs(it.value()));
        return mx;
    };
    Eigen::VectorXd ra = Eigen::VectorXd::Ones(pa);
    {
        Eigen::VectorXd mx = row_maxima(cp.a);
        for (Eigen::Index i = 0; i < pa; ++i)
            if (mx(i) > 0.0) ra(i) = 1.0 / mx(i);
    }
    Eigen::VectorXd rg = Eigen::VectorXd::Ones(m);
    {
        Eigen::VectorXd mx = row_maxima(cp.g);
        for (Eigen::Index i = 0; i < cp.dims.orthant; ++i)
            if (mx(i) > 0.0) rg(i) = 1.0 / mx(i);
        for (size_t ci = 0; ci < cp.dims.soc.size(); ++ci) {
            const Eigen::Index start = map.cone_row[ci];
            const Eigen::Index dim = cp.dims.soc[ci];
            const double worst = mx.segment(start, dim).maxCoeff();
            if (worst > 0.0) rg.segment(start, dim).setConstant(1.0 / worst);
        }
    }
    cp.a = ra.asDiagonal() * cp.a;
    cp.b = ra.cwiseProduct(cp.b);
    cp.g = rg.asDiagonal() * cp.g;
    cp.h = rg.cwiseProduct(cp.h);
    map.a_row_scale = ra;
    map.g_row_scale = rg;

    cp.c = col.cwiseProduct(pr.c);
    const double cost_mag = std::max({1.0, detail::sparse_max_abs(cp.q),
                                      cp.c.size() > 0 ? cp.c.lpNorm<Eigen::Infinity>() : 0.0});
    map.obj_scale = 1.0 / cost_mag;
    cp.q = cp.q * map.obj_scale;
    cp.c = cp.c * map.obj_scale;

    cp.q.makeCompressed();
    cp.a.makeCompressed();
    cp.g.makeCompressed();
    return out;
}

/// Folds a conic result back into original variables and per-class duals.
[[nodiscard]] inline QcqpSolution lift_solution(const QcqpProblem& pr, const ConicBuild& cb,
                                                const ConicResult& cr) {
    const ConicMap& map = cb.map;
    const Eigen::Index n = pr.n;
    QcqpSolution sol;
    sol.status = cr.status;
    sol.iterations = cr.iterations;
    sol.gap = cr.gap;
    sol.rel_gap = cr.rel_gap;
    sol.rel_primal_res = cr.pres;
    sol.rel_dual_res = cr.dres;

    sol.x = map.col_scale.cwiseProduct(cr.x);
    sol.objective = objective_value(pr, sol.x);

    Eigen::VectorXd yfull;
    if (cr.y.size() > 0) yfull = map.a_row_scale.cwiseProduct(cr.y) / map.obj_scale;
    sol.y = yfull.size() > 0 ? yfull.head(map.n_eq).eval() : Eigen::VectorXd(map.n_eq);
    if (map.n_eq > 0 && yfull.size() == 0) sol.y.setZero();

    sol.z_lb = Eigen::VectorXd::Zero(n);
    sol.z_ub = Eigen::VectorXd::Zero(n);
    for (size_t k = 0; k < map.pinned.size(); ++k) {
        const double nu = yfull.size() > 0 ? yfull(map.n_eq + static_cast<Eigen::Index>(k)) : 0.0;
        sol.z_ub(map.pinned[k]) = std::max(nu, 0.0);
        sol.z_lb(map.pinned[k]) = std::max(-nu, 0.0);
    }

    Eigen::VectorXd z;
    if (cr.z.size() > 0) z = map.g_row_scale.cwiseProduct(cr.z) / map.obj_scale;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (map.lb_row[static_cast<size_t>(i)] >= 0) sol.z_lb(i) = z(map.lb_row[static_cast<size_t>(i)]);
        if (map.ub_row[static_cast<size_t>(i)] >= 0) sol.z_ub(i) = z(map.ub_row[static_cast<size_t>(i)]);
    }

    sol.quad_mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pr.quads.size()));
    sol.quad_cone_dual.resize(pr.quads.size());
    for (size_t k = 0; k < pr.quads.size(); ++k) {
        const auto& ref = map.quad_ref[k];
        if (ref.row >= 0) {
            sol.quad_mu(static_cast<Eigen::Index>(k)) = z(ref.row);
        } else {
            const Eigen::Index start = map.cone_row[static_cast<size_t>(ref.cone)];
            const Eigen::Index dim = cb.cp.dims.soc[static_cast<size_t>(ref.cone)];
            sol.quad_cone_dual[k] = z.segment(start, dim);
            sol.quad_mu(static_cast<Eigen::Index>(k)) = z(start) + z(start + dim - 1);
        }
    }
    sol.soc_dual.resize(pr.socs.size());
    for (size_t k = 0; k < pr.socs.size(); ++k) {
        const auto& ref = map.soc_ref[k];
        if (ref.row >= 0) {
            sol.soc_dual[k] = Eigen::VectorXd::Constant(1, z(ref.row));
        } else {
            const Eigen::Index start = map.cone_row[static_cast<size_t>(ref.cone)];
            const Eigen::Index dim = cb.cp.dims.soc[static_cast<size_t>(ref.cone)];
            sol.soc_dual[k] = z.segment(start, dim);
        }
    }
    return sol;
}

} // namespace dopf::qcqp
