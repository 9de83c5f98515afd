#include "mog3p/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mog3p/error.hpp"
#include "mog3p/linalg.hpp"

namespace mog3p::baselines {

namespace {

constexpr double kJacobiTol = 1e-10;
constexpr int kJacobiSweeps = 100;

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) mean[c] += x(r, c);
    for (auto& m : mean) m /= static_cast<double>(x.rows());
    return mean;
}

void fix_sign(std::span<double> v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0.0)
        for (double& e : v) e = -e;
}

void normalize(std::span<double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    s = std::sqrt(s);
    if (s > 0.0)
        for (double& e : v) e /= s;
}

}  // namespace

LinearProjection pca_fit(const Matrix& x) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2 || d < 2) throw DataError("pca_fit: need n >= 2 and d >= 2");
    LinearProjection p;
    p.mean = column_means(x);
    Matrix cov(d, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j)
                cov(i, j) += (x(r, i) - p.mean[i]) * (x(r, j) - p.mean[j]);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) /= static_cast<double>(n - 1);
            cov(j, i) = cov(i, j);
        }
    const auto eig = linalg::jacobi_eigen(cov, kJacobiTol, kJacobiSweeps);
    p.components = Matrix(2, d);
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t j = 0; j < d; ++j) p.components(k, j) = eig.vectors(j, k);
        fix_sign(p.components.row(k));
        p.eigenvalues.push_back(eig.values[k]);
    }
    p.informative = 2;
    return p;
}

Matrix double_centered_gram(const Matrix& x) {
    const std::size_t n = x.rows();
    Matrix d2(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < x.cols(); ++c) {
                const double dv = x(i, c) - x(j, c);
                s += dv * dv;
            }
            d2(i, j) = d2(j, i) = s;
        }
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row_mean[i] += d2(i, j);
        grand += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = -0.5 * (d2(i, j) - row_mean[i] - row_mean[j] + grand);
    return b;
}

EmbeddingResult mds_fit(const Matrix& x) {
    const std::size_t n = x.rows();
    if (n < 3) throw DataError("mds_fit: need at least 3 points");
    const auto eig = linalg::jacobi_eigen(double_centered_gram(x), kJacobiTol, kJacobiSweeps);
    EmbeddingResult out;
    out.coords = Matrix(n, 2);
    for (std::size_t k = 0; k < 2; ++k) {
        const double lambda = eig.values[k];
        out.eigenvalues.push_back(lambda);
        std::vector<double> v = eig.vectors.column(k);
        fix_sign(v);
        const double s = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
        for (std::size_t i = 0; i < n; ++i) out.coords(i, k) = v[i] * s;
    }
    return out;
}

LinearProjection mda_fit(const Matrix& x, std::span<const int> y) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (y.size() != n) throw DimensionError("mda_fit: label count mismatch");
    const std::set<int> classes(y.begin(), y.end());
    if (classes.size() < 2) throw DataError("mda_fit: need at least 2 classes");
    if (d < 1) throw DataError("mda_fit: no features");

    LinearProjection p;
    p.mean = column_means(x);
    const int max_label = *classes.rbegin();
    Matrix centroid(static_cast<std::size_t>(max_label) + 1, d);
    std::vector<std::size_t> counts(static_cast<std::size_t>(max_label) + 1, 0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(y[r]);
        ++counts[c];
        for (std::size_t j = 0; j < d; ++j) centroid(c, j) += x(r, j);
    }
    for (std::size_t c = 0; c < counts.size(); ++c)
        for (std::size_t j = 0; j < d; ++j)
            if (counts[c]) centroid(c, j) /= static_cast<double>(counts[c]);

    Matrix within(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(y[r]);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                within(i, j) += (x(r, i) - centroid(c, i)) * (x(r, j) - centroid(c, j));
    }
    Matrix between(d, d);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (!counts[c]) continue;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                between(i, j) += static_cast<double>(counts[c]) * (centroid(c, i) - p.mean[i]) *
                                 (centroid(c, j) - p.mean[j]);
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += within(i, i);
    double ridge = 1e-6 * trace / static_cast<double>(d);
    if (!(ridge > 0.0)) ridge = 1e-12;
    for (std::size_t i = 0; i < d; ++i) within(i, i) += ridge;

    // W = L L^T; C = L^-1 B L^-T is symmetric with the same eigenvalues, and
    // v = L^-T u maps its eigenvectors back.
    const Matrix l = linalg::cholesky(within);
    const Matrix left = linalg::forward_substitute(l, between);                 // L^-1 B
    const Matrix c = linalg::forward_substitute(l, left.transpose());           // L^-1 (L^-1 B)^T
    Matrix sym = c;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) sym(i, j) = 0.5 * (c(i, j) + c(j, i));
    const auto eig = linalg::jacobi_eigen(sym, kJacobiTol, kJacobiSweeps);
    const Matrix v = linalg::backward_substitute_transposed(l, eig.vectors);

    const std::size_t keep = std::min<std::size_t>(2, d);
    p.components = Matrix(2, d);
    p.eigenvalues.assign(2, 0.0);
    for (std::size_t k = 0; k < keep; ++k) {
        for (std::size_t j = 0; j < d; ++j) p.components(k, j) = v(j, k);
        normalize(p.components.row(k));
        fix_sign(p.components.row(k));
        p.eigenvalues[k] = eig.values[k];
    }
    p.informative = std::min<std::size_t>({2, classes.size() - 1, d});
    return p;
}

Matrix apply(const LinearProjection& proj, const Matrix& x) {
    const std::size_t d = proj.mean.size();
    if (x.cols() != d || proj.components.cols() != d)
        throw DimensionError("apply: projection expects " + std::to_string(d) + " columns, got " +
                             std::to_string(x.cols()));
    Matrix out(x.rows(), proj.components.rows());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t k = 0; k < proj.components.rows(); ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += (x(r, j) - proj.mean[j]) * proj.components(k, j);
            out(r, k) = s;
        }
    return out;
}

Method method_from_string(const std::string& s) {
    if (s == "pca") return Method::Pca;
    if (s == "mds") return Method::Mds;
    if (s == "mda") return Method::Mda;
    throw ConfigError("unknown baseline method '" + s + "' (expected pca|mds|mda)");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::Pca: return "pca";
        case Method::Mds: return "mds";
        case Method::Mda: return "mda";
    }
    return "?";
}

}  // namespace mog3p::baselines
