#include <doctest.h>

#include <cmath>
#include <vector>

#include "mog3p/error.hpp"
#include "mog3p/objectives.hpp"
#include "support.hpp"

using namespace mog3p;
using namespace mog3p::obj;

namespace {

// Scatter sums straight from the definitions, in long double.
struct RefSS {
    long double w = 0, b = 0, t = 0;
};
RefSS ref_scatter(const Matrix& p, const std::vector<int>& y) {
    const std::size_t n = p.rows(), d = p.cols();
    int k = 0;
    for (int c : y) k = std::max(k, c + 1);
    std::vector<std::vector<long double>> mu(static_cast<std::size_t>(k), std::vector<long double>(d, 0));
    std::vector<long double> cnt(static_cast<std::size_t>(k), 0), all(d, 0);
    for (std::size_t i = 0; i < n; ++i) {
        cnt[static_cast<std::size_t>(y[i])] += 1;
        for (std::size_t j = 0; j < d; ++j) {
            mu[static_cast<std::size_t>(y[i])][j] += p(i, j);
            all[j] += p(i, j);
        }
    }
    for (std::size_t c = 0; c < mu.size(); ++c)
        for (auto& m : mu[c]) m = cnt[c] > 0 ? m / cnt[c] : 0;
    for (auto& m : all) m /= static_cast<long double>(n);
    RefSS s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const long double a = p(i, j) - mu[static_cast<std::size_t>(y[i])][j];
            const long double t = p(i, j) - all[j];
            s.w += a * a;
            s.t += t * t;
        }
    for (std::size_t c = 0; c < mu.size(); ++c)
        for (std::size_t j = 0; j < d; ++j) s.b += cnt[c] * (mu[c][j] - all[j]) * (mu[c][j] - all[j]);
    return s;
}

std::vector<int> random_labels(Rng& rng, std::size_t n, int k) {
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i < static_cast<std::size_t>(k) ? i : rng.index(static_cast<std::size_t>(k)));
    return y;
}

// Leave-one-out nearest-centroid error: an oracle for "the classes are trivially separable".
double nearest_centroid_error(const Dataset& ds) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        std::vector<std::vector<double>> mu(ds.n_classes(), std::vector<double>(ds.d(), 0.0));
        std::vector<double> cnt(ds.n_classes(), 0.0);
        for (std::size_t r = 0; r < ds.n(); ++r) {
            if (r == i) continue;
            cnt[static_cast<std::size_t>(ds.y[r])] += 1;
            for (std::size_t j = 0; j < ds.d(); ++j) mu[static_cast<std::size_t>(ds.y[r])][j] += ds.x(r, j);
        }
        int best = 0;
        double best_d = 1e300;
        for (std::size_t c = 0; c < mu.size(); ++c) {
            double dist = 0;
            for (std::size_t j = 0; j < ds.d(); ++j) {
                const double m = mu[c][j] / cnt[c];
                dist += (ds.x(i, j) - m) * (ds.x(i, j) - m);
            }
            if (dist < best_d) {
                best_d = dist;
                best = static_cast<int>(c);
            }
        }
        wrong += best != ds.y[i];
    }
    return static_cast<double>(wrong) / static_cast<double>(ds.n());
}

}  // namespace

TEST_CASE("separation_index: worked examples") {
    const Matrix collapsed{{0, 0}, {0, 0}, {1, 1}, {1, 1}};
    const std::vector<int> y{0, 0, 1, 1};
    auto s = separation_index(collapsed, y);
    CHECK(s.within_ss == 0.0);
    CHECK(s.index == 0.0);

    const Matrix same{{2, 3}, {2, 3}, {2, 3}, {2, 3}};
    s = separation_index(same, y);
    CHECK(s.between_ss == 0.0);
    CHECK(s.index == kSeparationSentinel);

    const Matrix line{{0, 0}, {2, 0}, {10, 0}, {12, 0}};
    s = separation_index(line, y);
    CHECK(s.within_ss == doctest::Approx(4.0));
    CHECK(s.between_ss == doctest::Approx(100.0));
    CHECK(s.index == doctest::Approx(0.04));
}

TEST_CASE("separation_index: matches the sum-of-squares oracle and W + B = T") {
    Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 4 + rng.index(40);
        const int k = 2 + static_cast<int>(rng.index(3));
        Matrix p(n, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < 2; ++j) p(i, j) = rng.normal(0.0, 3.0);
        const auto y = random_labels(rng, n, k);
        const auto ref = ref_scatter(p, y);
        const auto s = separation_index(p, y);
        CHECK(s.within_ss == doctest::Approx(static_cast<double>(ref.w)).epsilon(1e-10));
        CHECK(s.between_ss == doctest::Approx(static_cast<double>(ref.b)).epsilon(1e-10));
        CHECK(s.within_ss + s.between_ss == doctest::Approx(static_cast<double>(ref.t)).epsilon(1e-10));
    }
}

TEST_CASE("separation_index: rigid and scale invariance") {
    Rng rng(8);
    std::size_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 6 + rng.index(30);
        Matrix p(n, 2), q(n, 2);
        const double th = rng.uniform(0.0, 6.283185307179586);
        const double sc = std::exp(rng.uniform(-3.0, 3.0));
        const double tx = rng.normal(0.0, 50.0), ty = rng.normal(0.0, 50.0);
        for (std::size_t i = 0; i < n; ++i) {
            p(i, 0) = rng.normal();
            p(i, 1) = rng.normal();
            q(i, 0) = sc * (std::cos(th) * p(i, 0) - std::sin(th) * p(i, 1)) + tx;
            q(i, 1) = sc * (std::sin(th) * p(i, 0) + std::cos(th) * p(i, 1)) + ty;
        }
        const auto y = random_labels(rng, n, 2);
        const double a = separation_index(p, y).index, b = separation_index(q, y).index;
        bad += std::fabs(a - b) > 1e-8 * std::max(1.0, std::fabs(a));
    }
    CHECK(bad == 0);
}

TEST_CASE("separation_index: stays finite on huge coordinates") {
    const Matrix p{{1e150, 0}, {-1e150, 0}, {1e150, 1e150}, {-1e150, 1e150}};
    const std::vector<int> y{0, 0, 1, 1};
    const auto s = separation_index(p, y);
    CHECK(std::isfinite(s.index));
    CHECK(s.index == doctest::Approx(4.0));
}

TEST_CASE("aggregation arithmetic") {
    const std::vector<double> acc{0.9, 0.95, 1.0};
    CHECK(aggregate_error(acc, Aggregation::Min) == doctest::Approx(0.10));
    CHECK(aggregate_error(acc, Aggregation::Max) == doctest::Approx(0.0));
    CHECK(aggregate_error(acc, Aggregation::Mean) == doctest::Approx(0.05));
    const std::vector<double> one{0.8};
    CHECK(aggregate_error(one, Aggregation::Min) == aggregate_error(one, Aggregation::Mean));
    CHECK(aggregate_error(one, Aggregation::Max) == aggregate_error(one, Aggregation::Mean));
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> a(1 + rng.index(5));
        for (auto& x : a) x = rng.uniform();
        const double mn = aggregate_error(a, Aggregation::Min), me = aggregate_error(a, Aggregation::Mean),
                     mx = aggregate_error(a, Aggregation::Max);
        CHECK(mn >= me - 1e-15);
        CHECK(me >= mx - 1e-15);
    }
    CHECK(aggregation_from_string("mean") == Aggregation::Mean);
    CHECK(to_string(Aggregation::Max) == "max");
    CHECK_THROWS_AS(aggregation_from_string("median"), ConfigError);
}

TEST_CASE("classifiability on 20-sigma blobs, checked against nearest centroid") {
    Rng rng(4);
    const auto ds = testing::blobs({{0, 0}, {20, 0}}, 60, 1.0, rng);
    REQUIRE(nearest_centroid_error(ds) == 0.0);
    for (const auto& spec : clf::default_bank()) {
        const std::vector<clf::ClassifierSpec> bank{spec};
        Rng r(10);
        CHECK(classifiability(ds.x, ds.y, bank, 3, Aggregation::Min, r) <= 0.02);
    }
}

TEST_CASE("evaluate_model: identity model on separable blobs") {
    Rng rng(6);
    const auto ds = testing::blobs({{0, 0}, {20, 20}}, 50, 1.0, rng);
    REQUIRE(nearest_centroid_error(ds) == 0.0);
    gp::ProjectionModel id{{gp::ExpressionTree::variable(0), gp::ExpressionTree::variable(1)}};
    const ObjectiveConfig cfg;
    const auto f = evaluate_model(id, ds, cfg, 99);
    CHECK(f.c_error <= 0.02);
    CHECK(f.v_index < 0.05);
    CHECK(f.s_size == 2);
    const auto ref = ref_scatter(ds.x, ds.y);
    CHECK(f.v_index == doctest::Approx(static_cast<double>(ref.w / ref.b)).epsilon(1e-9));
    CHECK(evaluate_model(id, ds, cfg, 99) == f);

    ModelEvaluator ev(ds, cfg, 99);
    CHECK(ev.evaluate(id) == ev.evaluate(id));
    CHECK(ev.evaluate(id) == f);
}

TEST_CASE("ObjectiveConfig validation") {
    ObjectiveConfig c;
    CHECK_NOTHROW(c.validate());
    c.inner_folds = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ObjectiveConfig{};
    c.bank.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
