#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "dopf/qcqp/problem.hpp"

namespace dopf::qcqp {

// Plain-text problem exchange format, round-trip exact: every value is
// printed with 17 significant digits, infinities as inf and -inf.

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_sparse(std::ostream& os, const SpMat& m) {
    os << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it)
            os << it.row() << " " << it.col() << " " << fmt_double(it.value()) << "\n";
}

inline void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
    os << v.size();
    for (Eigen::Index i = 0; i < v.size(); ++i) os << " " << fmt_double(v(i));
    os << "\n";
}

class TokenReader {
public:
    explicit TokenReader(std::istream& is) : is_(is) {}

    std::string word() {
        std::string t;
        if (!(is_ >> t)) throw validation_error("qcqp load: unexpected end of input");
        return t;
    }

    void expect(const std::string& kw) {
        const std::string t = word();
        if (t != kw)
            throw validation_error("qcqp load: expected '" + kw + "', found '" + t + "'");
    }

    long integer() {
        const std::string t = word();
        try {
            return std::stol(t);
        } catch (const std::exception&) {
            throw validation_error("qcqp load: expected an integer, found '" + t + "'");
        }
    }

    double number() {
        const std::string t = word();
        try {
            return std::stod(t);
        } catch (const std::exception&) {
            throw validation_error("qcqp load: expected a number, found '" + t + "'");
        }
    }

    SpMat sparse() {
        const long rows = integer();
        const long cols = integer();
        const long nnz = integer();
        if (rows < 0 || cols < 0 || nnz < 0) throw validation_error("qcqp load: negative size");
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(nnz));
        for (long k = 0; k < nnz; ++k) {
            const long i = integer();
            const long j = integer();
            const double v = number();
            if (i < 0 || i >= rows || j < 0 || j >= cols)
                throw validation_error("qcqp load: matrix entry out of range");
            trip.emplace_back(i, j, v);
        }
        SpMat m(rows, cols);
        m.setFromTriplets(trip.begin(), trip.end());
        return m;
    }

    Eigen::VectorXd vector() {
        const long len = integer();
        if (len < 0) throw validation_error("qcqp load: negative vector length");
        Eigen::VectorXd v(len);
        for (long i = 0; i < len; ++i) v(i) = number();
        return v;
    }

private:
    std::istream& is_;
};

} // namespace detail

inline void dump_problem(std::ostream& os, const QcqpProblem& pr) {
    os << "qcqp 1\n";
    os << "n " << pr.n << "\n";
    os << "r " << detail::fmt_double(pr.r) << "\n";
    os << "objective ";
    detail::write_sparse(os, pr.q);
    os << "cost ";
    detail::write_vector(os, pr.c);
    os << "equalities ";
    detail::write_sparse(os, pr.a);
    os << "rhs ";
    detail::write_vector(os, pr.b);
    os << "lower ";
    detail::write_vector(os, pr.lb);
    os << "upper ";
    detail::write_vector(os, pr.ub);
    os << "quads " << pr.quads.size() << "\n";
    for (const auto& qc : pr.quads) {
        os << "matrix ";
        detail::write_sparse(os, qc.p);
        os << "linear ";
        detail::write_vector(os, qc.q);
        os << "bound " << detail::fmt_double(qc.bound) << "\n";
    }
    os << "socs " << pr.socs.size() << "\n";
    for (const auto& sc : pr.socs) {
        os << "matrix ";
        detail::write_sparse(os, sc.f);
        os << "offset ";
        detail::write_vector(os, sc.g);
        os << "direction ";
        detail::write_vector(os, sc.d);
        os << "constant " << detail::fmt_double(sc.e) << "\n";
    }
    os << "end\n";
}

[[nodiscard]] inline QcqpProblem load_problem(std::istream& is) {
    detail::TokenReader rd(is);
    rd.expect("qcqp");
    if (rd.integer() != 1) throw validation_error("qcqp load: unsupported format version");
    QcqpProblem pr;
    rd.expect("n");
    pr.n = rd.integer();
    rd.expect("r");
    pr.r = rd.number();
    rd.expect("objective");
    pr.q = rd.sparse();
    rd.expect("cost");
    pr.c = rd.vector();
    rd.expect("equalities");
    pr.a = rd.sparse();
    rd.expect("rhs");
    pr.b = rd.vector();
    rd.expect("lower");
    pr.lb = rd.vector();
    rd.expect("upper");
    pr.ub = rd.vector();
    rd.expect("quads");
    const long nq = rd.integer();
    for (long k = 0; k < nq; ++k) {
        QuadConstraint qc;
        rd.expect("matrix");
        qc.p = rd.sparse();
        rd.expect("linear");
        qc.q = rd.vector();
        rd.expect("bound");
        qc.bound = rd.number();
        pr.quads.push_back(std::move(qc));
    }
    rd.expect("socs");
    const long ns = rd.integer();
    for (long k = 0; k < ns; ++k) {
        SocConstraint sc;
        rd.expect("matrix");
        sc.f = rd.sparse();
        rd.expect("offset");
        sc.g = rd.vector();
        rd.expect("direction");
        sc.d = rd.vector();
        rd.expect("constant");
        sc.e = rd.number();
        pr.socs.push_back(std::move(sc));
    }
    rd.expect("end");
    pr.validate();
    return pr;
}

inline void dump_problem(const std::string& path, const QcqpProblem& pr) {
    std::ofstream os(path);
    if (!os) throw validation_error("qcqp dump: cannot open " + path);
    dump_problem(os, pr);
}

[[nodiscard]] inline QcqpProblem load_problem(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw validation_error("qcqp load: cannot open " + path);
    return load_problem(is);
}

} // namespace dopf::qcqp
