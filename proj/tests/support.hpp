#pragma once

// Test-only generators and brute-force reference implementations. Nothing
// here calls into the code paths it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mog3p/dataset.hpp"
#include "mog3p/mining.hpp"
#include "mog3p/moea.hpp"
#include "mog3p/objectives.hpp"
#include "mog3p/rng.hpp"

namespace testing {

using mog3p::Dataset;
using mog3p::Matrix;
using mog3p::Rng;

// Isotropic Gaussian blobs; centers are rows of `centers`.
inline Dataset blobs(const std::vector<std::vector<double>>& centers, std::size_t per_class,
                     double sigma, Rng& rng) {
    const std::size_t d = centers.front().size();
    Dataset ds;
    ds.x = Matrix(centers.size() * per_class, d);
    for (std::size_t c = 0; c < centers.size(); ++c) {
        ds.class_names.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t r = c * per_class + i;
            for (std::size_t j = 0; j < d; ++j) ds.x(r, j) = centers[c][j] + rng.normal(0.0, sigma);
            ds.y.push_back(static_cast<int>(c));
        }
    }
    for (std::size_t j = 0; j < d; ++j) ds.feature_names.push_back("x" + std::to_string(j));
    return ds;
}

// class = [x0 * x1 > 0]: four blobs at (+-1.5, +-1.5). Two pairs of correlated
// noise features (n0~n1 at rho 0.95, n2~n3 at rho 0.85) carry the leading
// principal components once columns are standardized.
inline Dataset xor_dataset(Rng& rng, std::size_t per_blob = 50) {
    Dataset ds;
    ds.class_names = {"neg", "pos"};
    ds.feature_names = {"x0", "x1", "n0", "n1", "n2", "n3"};
    ds.x = Matrix(4 * per_blob, 6);
    const double sx[4] = {1.5, -1.5, 1.5, -1.5};
    const double sy[4] = {1.5, -1.5, -1.5, 1.5};
    auto pair = [&](std::size_t r, std::size_t col, double rho) {
        const double a = rng.normal(), b = rng.normal();
        ds.x(r, col) = a;
        ds.x(r, col + 1) = rho * a + std::sqrt(1.0 - rho * rho) * b;
    };
    std::size_t r = 0;
    for (int blob = 0; blob < 4; ++blob)
        for (std::size_t i = 0; i < per_blob; ++i, ++r) {
            ds.x(r, 0) = sx[blob] + rng.normal(0.0, 0.5);
            ds.x(r, 1) = sy[blob] + rng.normal(0.0, 0.5);
            pair(r, 2, 0.95);
            pair(r, 4, 0.85);
            ds.y.push_back(ds.x(r, 0) * ds.x(r, 1) > 0.0 ? 1 : 0);
        }
    return ds;
}

// Fitness vectors drawn from small grids so ties and duplicates are common.
inline mog3p::obj::FitnessVector random_fitness(Rng& rng) {
    mog3p::obj::FitnessVector f;
    f.c_error = static_cast<double>(rng.index(6)) / 10.0;
    f.v_index = rng.bernoulli(0.05) ? 1e12 : static_cast<double>(rng.index(8)) * 0.25;
    f.s_size = 2 + rng.index(10);
    return f;
}

// --- SPEA2 reference: direct transcription of the definitions ------------

struct RefStats {
    std::size_t strength, raw;
    double sigma, density, fitness;
};

inline bool ref_dominates(const mog3p::obj::FitnessVector& a, const mog3p::obj::FitnessVector& b) {
    const double x[3] = {a.c_error, a.v_index, double(a.s_size)};
    const double y[3] = {b.c_error, b.v_index, double(b.s_size)};
    bool no_worse = true, better = false;
    for (int m = 0; m < 3; ++m) {
        no_worse = no_worse && x[m] <= y[m];
        better = better || x[m] < y[m];
    }
    return no_worse && better;
}

inline std::vector<std::array<double, 3>> ref_normalize(const std::vector<mog3p::obj::FitnessVector>& f) {
    std::vector<std::array<double, 3>> p;
    for (const auto& v : f) p.push_back({v.c_error, v.v_index, double(v.s_size)});
    for (int m = 0; m < 3; ++m) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& q : p) {
            lo = std::min(lo, q[m]);
            hi = std::max(hi, q[m]);
        }
        for (auto& q : p) q[m] = hi > lo ? (q[m] - lo) / (hi - lo) : 0.0;
    }
    return p;
}

inline double ref_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                     (a[2] - b[2]) * (a[2] - b[2]));
}

inline std::vector<RefStats> ref_spea2(const std::vector<mog3p::obj::FitnessVector>& f) {
    const std::size_t n = f.size();
    std::vector<RefStats> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i].strength = 0;
        for (std::size_t j = 0; j < n; ++j) s[i].strength += ref_dominates(f[i], f[j]) ? 1 : 0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        s[i].raw = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (ref_dominates(f[j], f[i])) s[i].raw += s[j].strength;
    }
    const auto p = ref_normalize(f);
    std::size_t k = 0;
    while ((k + 1) * (k + 1) <= n) ++k;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d.push_back(ref_dist(p[i], p[j]));
        std::sort(d.begin(), d.end());
        s[i].sigma = d.empty() ? 0.0 : d[std::min(k, d.size()) - 1];
        s[i].density = 1.0 / (s[i].sigma + 2.0);
        s[i].fitness = double(s[i].raw) + s[i].density;
    }
    return s;
}

inline std::vector<std::size_t> ref_select(const std::vector<mog3p::obj::FitnessVector>& f,
                                           const std::vector<RefStats>& s, std::size_t cap) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (s[i].raw == 0) keep.push_back(i);
    if (keep.size() <= cap) {
        std::vector<std::size_t> dominated;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (s[i].raw != 0) dominated.push_back(i);
        // insertion sort keeps equal fitness in index order
        for (std::size_t a = 1; a < dominated.size(); ++a)
            for (std::size_t b = a; b > 0 && s[dominated[b]].fitness < s[dominated[b - 1]].fitness; --b)
                std::swap(dominated[b], dominated[b - 1]);
        for (std::size_t i = 0; keep.size() < cap && i < dominated.size(); ++i) keep.push_back(dominated[i]);
        return keep;
    }
    const auto p = ref_normalize(f);
    while (keep.size() > cap) {
        std::size_t victim = 0;
        std::vector<double> worst;
        for (std::size_t a = 0; a < keep.size(); ++a) {
            std::vector<double> prof;
            for (std::size_t b = 0; b < keep.size(); ++b)
                if (a != b) prof.push_back(ref_dist(p[keep[a]], p[keep[b]]));
            std::sort(prof.begin(), prof.end());
            bool smaller = a == 0;
            if (!smaller) {
                for (std::size_t t = 0; t < prof.size(); ++t) {
                    if (prof[t] < worst[t]) { smaller = true; break; }
                    if (prof[t] > worst[t]) break;
                }
            }
            if (smaller) {
                victim = a;
                worst = prof;
            }
        }
        keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return keep;
}

// --- 2D frontier reference ---------------------------------------------------

inline std::vector<mog3p::mining::ModelRecord> ref_frontier(const std::vector<mog3p::mining::ModelRecord>& recs,
                                                            double tau) {
    double best = 1e300;
    for (const auto& r : recs) best = std::min(best, r.test_error());
    std::vector<mog3p::mining::ModelRecord> pool;
    for (const auto& r : recs)
        if (r.test_error() <= best + tau) pool.push_back(r);
    std::vector<mog3p::mining::ModelRecord> out;
    for (const auto& a : pool) {
        bool dominated = false;
        for (const auto& b : pool) {
            const bool le = b.train_error() <= a.train_error() && b.objectives.s_size <= a.objectives.s_size;
            const bool lt = b.train_error() < a.train_error() || b.objectives.s_size < a.objectives.s_size;
            dominated = dominated || (le && lt);
        }
        if (!dominated) out.push_back(a);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.objectives.s_size != b.objectives.s_size) return a.objectives.s_size < b.objectives.s_size;
        return a.train_error() < b.train_error();
    });
    return out;
}

inline mog3p::mining::ModelRecord random_record(Rng& rng) {
    mog3p::mining::ModelRecord r;
    r.objectives.c_error = static_cast<double>(rng.index(20)) / 100.0;
    r.objectives.s_size = 2 + rng.index(15);
    r.objectives.v_index = rng.uniform();
    r.per_classifier = {{"A", 1.0, 1.0 - static_cast<double>(rng.index(4)) / 200.0},
                        {"B", 1.0, 1.0 - static_cast<double>(rng.index(4)) / 200.0}};
    r.expressions = {"x0", "x1"};
    r.features_used = {0, 1};
    return r;
}

}  // namespace testing
