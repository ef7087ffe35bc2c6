#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <random>
#include <sstream>

#include "dopf/qcqp/io.hpp"
#include "dopf/qcqp/kkt.hpp"
#include "dopf/qcqp/solver.hpp"

using namespace dopf;
using namespace dopf::qcqp;
using Eigen::VectorXd;

namespace {

SpMat sparse_identity(Eigen::Index n, double scale = 1.0) {
    SpMat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m.insert(i, i) = scale;
    m.makeCompressed();
    return m;
}

SpMat dense_to_sparse(const Eigen::MatrixXd& d) {
    return d.sparseView(1.0, 0.0);
}

} // namespace

TEST_CASE("equality-constrained quadratic program solves in closed form") {
    QcqpProblem pr = make_problem(2);
    pr.q = sparse_identity(2);
    pr.a = SpMat(1, 2);
    pr.a.insert(0, 0) = 1.0;
    pr.a.insert(0, 1) = 1.0;
    pr.b = VectorXd::Constant(1, 2.0);

    const QcqpSolution sol = solve(pr);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(0) == Catch::Approx(1.0).margin(1e-9));
    CHECK(sol.x(1) == Catch::Approx(1.0).margin(1e-9));
    CHECK(sol.y(0) == Catch::Approx(-1.0).margin(1e-9));
    CHECK(verify_kkt(pr, sol).worst() < 1e-8);
}

TEST_CASE("active upper bound carries its multiplier") {
    QcqpProblem pr = make_problem(1);
    pr.q = sparse_identity(1);
    pr.c = VectorXd::Constant(1, -2.0);
    pr.lb(0) = 0.0;
    pr.ub(0) = 1.0;

    const QcqpSolution sol = solve(pr);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(0) == Catch::Approx(1.0).margin(1e-8));
    CHECK(sol.z_ub(0) == Catch::Approx(1.0).margin(1e-7));
    CHECK(sol.z_lb(0) < 1e-7);
    CHECK(verify_kkt(pr, sol).worst() < 1e-8);
}

TEST_CASE("second-order cone binds at the expected point") {
    QcqpProblem pr = make_problem(2);
    pr.c = VectorXd::Constant(2, -1.0);
    SocConstraint sc;
    sc.f = sparse_identity(2);
    sc.g = VectorXd::Zero(2);
    sc.d = VectorXd::Zero(2);
    sc.e = std::sqrt(2.0);
    pr.socs.push_back(sc);

    const QcqpSolution sol = solve(pr);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(0) == Catch::Approx(1.0).margin(1e-7));
    CHECK(sol.x(1) == Catch::Approx(1.0).margin(1e-7));
    CHECK(sol.objective == Catch::Approx(-2.0).margin(1e-7));
    const VectorXd& zk = sol.soc_dual[0];
    CHECK(zk(0) == Catch::Approx(std::sqrt(2.0)).margin(1e-6));
    CHECK(verify_kkt(pr, sol).worst() < 1e-8);
}

TEST_CASE("quadratic inequality multiplier matches the analytic value") {
    QcqpProblem pr = make_problem(1);
    pr.c = VectorXd::Constant(1, 1.0);
    QuadConstraint qc;
    qc.p = sparse_identity(1);
    qc.q = VectorXd::Zero(1);
    qc.bound = 0.5;
    pr.quads.push_back(qc);

    const QcqpSolution sol = solve(pr);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(0) == Catch::Approx(-1.0).margin(1e-7));
    CHECK(sol.quad_mu(0) == Catch::Approx(1.0).margin(1e-6));
    CHECK(verify_kkt(pr, sol).worst() < 1e-8);
}

TEST_CASE("rank-zero quadratic acts as a linear inequality") {
    QcqpProblem pr = make_problem(1);
    pr.c = VectorXd::Constant(1, -1.0);
    QuadConstraint qc;
    qc.p = SpMat(1, 1);
    qc.q = VectorXd::Constant(1, 1.0);
    qc.bound = 5.0;
    pr.quads.push_back(qc);

    const QcqpSolution sol = solve(pr);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(0) == Catch::Approx(5.0).margin(1e-7));
    CHECK(sol.quad_mu(0) == Catch::Approx(1.0).margin(1e-6));
    CHECK(verify_kkt(pr, sol).worst() < 1e-8);
}

TEST_CASE("pinned variables become equality rows with split multipliers") {
    QcqpProblem pr = make_problem(2);
    pr.q = sparse_identity(2);
    pr.c << 0.0, -1.0;
    pr.lb(0) = 3.0;
    pr.ub(0) = 3.0;

    const QcqpSolution sol = solve(pr);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(0) == Catch::Approx(3.0).margin(1e-9));
    CHECK(sol.x(1) == Catch::Approx(1.0).margin(1e-9));
    // stationarity at x0 = 3 needs multiplier -3 on the pin, split as z_lb = 3
    CHECK(sol.z_lb(0) == Catch::Approx(3.0).margin(1e-7));
    CHECK(sol.z_ub(0) == Catch::Approx(0.0).margin(1e-7));
    CHECK(verify_kkt(pr, sol).worst() < 1e-8);
}

TEST_CASE("infeasible bound ordering is rejected up front") {
    QcqpProblem pr = make_problem(1);
    pr.lb(0) = 2.0;
    pr.ub(0) = 1.0;
    CHECK_THROWS_AS(solve(pr), validation_error);
}

TEST_CASE("asymmetric objective is rejected") {
    QcqpProblem pr = make_problem(2);
    pr.q = SpMat(2, 2);
    pr.q.insert(0, 1) = 1.0;
    CHECK_THROWS_AS(pr.validate(), validation_error);
}

TEST_CASE("indefinite quadratic constraint is rejected") {
    QcqpProblem pr = make_problem(1);
    pr.c = VectorXd::Constant(1, 1.0);
    QuadConstraint qc;
    qc.p = sparse_identity(1, -1.0);
    qc.q = VectorXd::Zero(1);
    qc.bound = 1.0;
    pr.quads.push_back(qc);
    CHECK_THROWS_AS(solve(pr), validation_error);
}

TEST_CASE("mixed cone problem satisfies first-order conditions") {
    // randomized but reproducible: equalities, bounds, two cones, one quad
    std::mt19937 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::Index n = 20;

    Eigen::MatrixXd mroot(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) mroot(i, j) = gauss(rng);
    Eigen::MatrixXd qd = mroot.transpose() * mroot / n + 0.1 * Eigen::MatrixXd::Identity(n, n);

    VectorXd x0(n);
    for (Eigen::Index i = 0; i < n; ++i) x0(i) = 0.5 * gauss(rng);

    QcqpProblem pr = make_problem(n);
    pr.q = dense_to_sparse(qd);
    for (Eigen::Index i = 0; i < n; ++i) pr.c(i) = gauss(rng);
    pr.r = 1.25;

    Eigen::MatrixXd ad(3, n);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < n; ++j) ad(i, j) = gauss(rng);
    pr.a = dense_to_sparse(ad);
    pr.b = ad * x0;

    pr.lb.setConstant(-4.0);
    pr.ub.setConstant(4.0);

    for (int k = 0; k < 2; ++k) {
        SocConstraint sc;
        Eigen::MatrixXd fd(4, n);
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < n; ++j) fd(i, j) = gauss(rng);
        sc.f = dense_to_sparse(fd);
        sc.g = VectorXd::Zero(4);
        sc.d = VectorXd::Zero(n);
        sc.e = (fd * x0).norm() + 0.5;
        pr.socs.push_back(sc);
    }
    {
        QuadConstraint qc;
        Eigen::MatrixXd proot(2, n);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < n; ++j) proot(i, j) = gauss(rng);
        Eigen::MatrixXd pd = proot.transpose() * proot;
        qc.p = dense_to_sparse(pd);
        qc.q = VectorXd::Zero(n);
        qc.bound = 0.5 * x0.dot(pd * x0) + 0.25;
        pr.quads.push_back(qc);
    }

    const QcqpSolution sol = solve(pr);
    REQUIRE(sol.status == SolveStatus::optimal);
    const KktReport rep = verify_kkt(pr, sol);
    INFO("stationarity " << rep.stationarity << " primal " << rep.primal << " dual " << rep.dual
                         << " comp " << rep.complementarity);
    CHECK(rep.worst() < 1e-8);
    // x0 is feasible by construction, so the optimum cannot cost more
    CHECK(sol.objective <= objective_value(pr, x0) + 1e-9 * std::abs(objective_value(pr, x0)));
}

TEST_CASE("replays are bit-identical") {
    QcqpProblem pr = make_problem(3);
    pr.q = sparse_identity(3, 2.0);
    pr.c << -1.0, 0.5, 0.25;
    pr.lb.setConstant(-1.0);
    pr.ub.setConstant(1.0);
    SocConstraint sc;
    sc.f = sparse_identity(3);
    sc.g = VectorXd::Zero(3);
    sc.d = VectorXd::Zero(3);
    sc.e = 1.2;
    pr.socs.push_back(sc);

    const QcqpSolution a = solve(pr);
    const QcqpSolution b = solve(pr);
    REQUIRE(a.status == SolveStatus::optimal);
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), sizeof(double) * a.x.size()) == 0);
    CHECK(std::memcmp(a.y.data(), b.y.data(), sizeof(double) * a.y.size()) == 0);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("warm starts at the optimum converge at least as fast") {
    QcqpProblem pr = make_problem(4);
    pr.q = sparse_identity(4);
    pr.c << -1.0, -2.0, 0.5, 1.0;
    pr.lb.setConstant(0.0);
    pr.ub.setConstant(3.0);
    SocConstraint sc;
    sc.f = sparse_identity(4);
    sc.g = VectorXd::Zero(4);
    sc.d = VectorXd::Zero(4);
    sc.e = 2.0;
    pr.socs.push_back(sc);

    const QcqpSolution cold = solve(pr);
    REQUIRE(cold.status == SolveStatus::optimal);
    const QcqpSolution warm = solve(pr, {}, &cold.x);
    REQUIRE(warm.status == SolveStatus::optimal);
    CHECK(warm.iterations <= cold.iterations);
    // two independent solves agree only to ~sqrt(gap tolerance)
    CHECK((warm.x - cold.x).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("problem files round-trip exactly") {
    QcqpProblem pr = make_problem(3);
    pr.q = sparse_identity(3, 0.125);
    pr.c << 1.0 / 3.0, -2.0e5, 3.7e-13;
    pr.r = -0.625;
    pr.a = SpMat(1, 3);
    pr.a.insert(0, 2) = 1.0;
    pr.b = VectorXd::Constant(1, 0.1);
    pr.lb << -1.0, -std::numeric_limits<double>::infinity(), 0.1;
    pr.ub << 1.0, std::numeric_limits<double>::infinity(), 0.1;
    QuadConstraint qc;
    qc.p = sparse_identity(3);
    qc.q = VectorXd::Zero(3);
    qc.bound = 7.0;
    pr.quads.push_back(qc);
    SocConstraint sc;
    sc.f = sparse_identity(3);
    sc.g = VectorXd::Constant(3, 0.25);
    sc.d = VectorXd::Zero(3);
    sc.e = 9.5;
    pr.socs.push_back(sc);

    std::stringstream buf;
    dump_problem(buf, pr);
    const QcqpProblem back = load_problem(buf);

    std::stringstream buf2;
    dump_problem(buf2, back);
    CHECK(buf.str() == buf2.str());

    const QcqpSolution s1 = solve(pr);
    const QcqpSolution s2 = solve(back);
    REQUIRE(s1.status == SolveStatus::optimal);
    CHECK(std::memcmp(s1.x.data(), s2.x.data(), sizeof(double) * s1.x.size()) == 0);
}

TEST_CASE("fuzzed boxed programs never beat brute force") {
    // small random convex programs checked against a dense grid scan
    std::mt19937 rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 2);
        QcqpProblem pr = make_problem(n);
        Eigen::MatrixXd mroot(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) mroot(i, j) = gauss(rng);
        pr.q = dense_to_sparse(Eigen::MatrixXd(mroot.transpose() * mroot));
        for (Eigen::Index i = 0; i < n; ++i) pr.c(i) = gauss(rng);
        pr.lb.setConstant(-1.5);
        pr.ub.setConstant(1.5);
        if (uni(rng) < 0.5) {
            SocConstraint sc;
            sc.f = sparse_identity(n);
            sc.g = VectorXd::Zero(n);
            sc.d = VectorXd::Zero(n);
            sc.e = 1.0 + uni(rng);
            pr.socs.push_back(sc);
        }

        const QcqpSolution sol = solve(pr);
        REQUIRE(sol.status == SolveStatus::optimal);
        REQUIRE(verify_kkt(pr, sol).worst() < 1e-8);

        const int steps = 31;
        double best = std::numeric_limits<double>::infinity();
        VectorXd pt(n);
        const double span = 3.0 / (steps - 1);
        std::vector<int> idx(static_cast<size_t>(n), 0);
        while (true) {
            for (Eigen::Index i = 0; i < n; ++i)
                pt(i) = -1.5 + span * idx[static_cast<size_t>(i)];
            bool ok = true;
            for (const auto& scn : pr.socs)
                if ((scn.f * pt + scn.g).norm() > scn.d.dot(pt) + scn.e) ok = false;
            if (ok) best = std::min(best, objective_value(pr, pt));
            Eigen::Index carry = 0;
            while (carry < n && ++idx[static_cast<size_t>(carry)] == steps) {
                idx[static_cast<size_t>(carry)] = 0;
                ++carry;
            }
            if (carry == n) break;
        }
        CHECK(sol.objective <= best + 1e-9 * std::max(1.0, std::abs(best)));
    }
}
