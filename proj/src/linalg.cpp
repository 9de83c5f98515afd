#include "mog3p/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mog3p/error.hpp"

namespace mog3p::linalg {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = 0; q < a.cols(); ++q)
            if (p != q) s += a(p, q) * a(p, q);
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& input, double tol, int max_sweeps) {
    if (input.rows() != input.cols()) throw DimensionError("jacobi_eigen: matrix not square");
    const std::size_t n = input.rows();
    Matrix a = input;
    Matrix v = Matrix::identity(n);
    SymmetricEigen out;

    const double scale = frobenius_norm(a);
    if (scale > 0.0) {
        for (; out.sweeps < max_sweeps; ++out.sweeps) {
            if (off_diagonal_norm(a) <= tol * scale) break;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double apq = a(p, q);
                    if (apq == 0.0) continue;
                    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;

                    for (std::size_t k = 0; k < n; ++k) {
                        const double akp = a(k, p);
                        const double akq = a(k, q);
                        a(k, p) = c * akp - s * akq;
                        a(k, q) = s * akp + c * akq;
                    }
                    auto rp = a.row(p);
                    auto rq = a.row(q);
                    for (std::size_t k = 0; k < n; ++k) {
                        const double apk = rp[k];
                        const double aqk = rq[k];
                        rp[k] = c * apk - s * aqk;
                        rq[k] = s * apk + c * aqk;
                    }
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;

                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
    }
    return out;
}

Matrix cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("cholesky: matrix not square");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw DataError("cholesky: matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Matrix forward_substitute(const Matrix& lower, const Matrix& b) {
    const std::size_t n = lower.rows();
    if (b.rows() != n) throw DimensionError("forward_substitute: shape mismatch");
    Matrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * x(k, c);
            x(i, c) = s / lower(i, i);
        }
    }
    return x;
}

Matrix backward_substitute_transposed(const Matrix& lower, const Matrix& b) {
    const std::size_t n = lower.rows();
    if (b.rows() != n) throw DimensionError("backward_substitute_transposed: shape mismatch");
    Matrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            double s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * x(k, c);
            x(ii, c) = s / lower(ii, ii);
        }
    }
    return x;
}

}  // namespace mog3p::linalg
