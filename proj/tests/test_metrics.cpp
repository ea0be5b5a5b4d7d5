// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ample/error.hpp"
#include "ample/metrics.hpp"
#include "ample/rng.hpp"
#include "oracles.hpp"

using namespace ample;

namespace {

template <class F>
void expect_code(Errc code, F&& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << to_string(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

std::vector<double> normal_draws(std::uint64_t seed, std::size_t n, double mean, double sd) {
    Rng rng(seed);
    std::normal_distribution<double> d(mean, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = d(rng);
    return out;
}

std::vector<double> draws(Family fam, std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> out(n);
    switch (fam) {
        case Family::Normal: {
            std::normal_distribution<double> d(100.0, 9.0);
            for (auto& v : out) v = d(rng);
            break;
        }
        case Family::Lognormal: {
            std::lognormal_distribution<double> d(4.5, 0.3);
            for (auto& v : out) v = d(rng);
            break;
        }
        case Family::Gamma: {
            std::gamma_distribution<double> d(3.0, 5.0);
            for (auto& v : out) v = d(rng);
            break;
        }
        case Family::Weibull: {
            std::weibull_distribution<double> d(4.0, 100.0);
            for (auto& v : out) v = d(rng);
            break;
        }
        case Family::Rayleigh:
            for (auto& v : out) v = 30.0 * std::sqrt(-2.0 * std::log1p(-rng.uniform()));
            break;
        case Family::Ricean: {
            std::normal_distribution<double> d(0.0, 1.0);
            for (auto& v : out) {
                const double a = 20.0 + 10.0 * d(rng);
                const double b = 10.0 * d(rng);
                v = std::hypot(a, b);
            }
            break;
        }
        case Family::Chisquare: {
            std::chi_squared_distribution<double> d(7.0);
            for (auto& v : out) v = d(rng);
            break;
        }
    }
    return out;
}

}  // namespace

// --- point metrics ------------------------------------------------------------

TEST(PointMetrics, HandValues) {
    const std::vector<double> ref{100.0, 100.0};
    const std::vector<double> pred{103.0, 96.0};
    EXPECT_NEAR(rmse(pred, ref), std::sqrt(12.5), 1e-12);
    EXPECT_NEAR(mae(pred, ref), 3.5, 1e-12);
    EXPECT_EQ(rmse(ref, ref), 0.0);
    EXPECT_EQ(mae(ref, ref), 0.0);
}

TEST(PointMetrics, Errors) {
    const std::vector<double> a{1.0, 2.0}, b{1.0}, none;
    expect_code(Errc::LengthMismatch, [&] { (void)rmse(a, b); });
    expect_code(Errc::LengthMismatch, [&] { (void)mae(a, b); });
    expect_code(Errc::LengthMismatch, [&] { (void)thr(a, b, 100); });
    expect_code(Errc::Empty, [&] { (void)rmse(none, none); });
    expect_code(Errc::Empty, [&] { (void)ahre(none, none, ThrRange::los()); });
}

TEST(PointMetrics, RandomProperties) {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 300;
        std::vector<double> p(n), r(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = 70 + 60 * rng.uniform();
            r[i] = 70 + 60 * rng.uniform();
        }
        EXPECT_GE(rmse(p, r) + 1e-12, mae(p, r));
        EXPECT_EQ(rmse(p, r), rmse(r, p));
        EXPECT_EQ(mae(p, r), mae(r, p));
        const double c = 17.25;
        auto pc = p, rc = r;
        for (auto& v : pc) v += c;
        for (auto& v : rc) v += c;
        EXPECT_NEAR(mae(pc, rc), mae(p, r), 1e-9);
        const double h = ahre(p, r, ThrRange::nlos());
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, 100.0);
        EXPECT_DOUBLE_EQ(h, ahre(r, p, ThrRange::nlos()));
        const double a = thr(p, r, 100.0);
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 100.0);
    }
}

// --- threshold metrics --------------------------------------------------------

TEST(Threshold, Examples) {
    const std::vector<double> ref{85, 95, 105, 115};
    EXPECT_EQ(thr(ref, ref, 100.0), 100.0);
    const std::vector<double> below{90, 90}, above{110, 110};
    EXPECT_EQ(thr(below, above, 100.0), 0.0);
    const std::vector<double> p{95, 105}, r{105, 95};
    EXPECT_EQ(thr(p, r, 100.0), 0.0);
    EXPECT_EQ(ahre(p, r, ThrRange{100, 100, 1}), 100.0);
    EXPECT_EQ(ahre(ref, ref, ThrRange::los()), 0.0);
}

TEST(Threshold, EqualityCountsOnlyWhenBothSidesEqual) {
    const std::vector<double> p{100, 100, 100}, r{100, 101, 99};
    EXPECT_NEAR(thr(p, r, 100.0), 100.0 / 3.0, 1e-12);
}

TEST(Threshold, AlwaysWrongSideGivesFullError) {
    const std::vector<double> p{70, 70, 70}, r{130, 130, 130};
    EXPECT_EQ(ahre(p, r, ThrRange::los()), 100.0);
    EXPECT_EQ(ahre(p, r, ThrRange::nlos()), 100.0);
}

TEST(Threshold, GridAndValidation) {
    EXPECT_EQ(ThrRange::los().thresholds().size(), 21u);
    EXPECT_EQ(ThrRange::nlos().thresholds().front(), 100.0);
    EXPECT_EQ(ThrRange::nlos().thresholds().back(), 120.0);
    EXPECT_EQ((ThrRange{80, 100, 0.5}).thresholds().size(), 41u);
    EXPECT_THROW((ThrRange{100, 80, 1}).validate(), Error);
    EXPECT_THROW((ThrRange{80, 100, 0}).validate(), Error);
}

TEST(Threshold, AhreIsMeanOfPerThresholdErrors) {
    Rng rng(9);
    std::vector<double> p(500), r(500);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i] = 80 + 40 * rng.uniform();
        p[i] = r[i] + 8 * (rng.uniform() - 0.5);
    }
    double acc = 0.0;
    int n = 0;
    for (int lt = 100; lt <= 120; ++lt, ++n) {
        int agree = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const int sp = (p[i] > lt) - (p[i] < lt);
            const int sr = (r[i] > lt) - (r[i] < lt);
            agree += sp == sr;
        }
        acc += 100.0 - 100.0 * agree / static_cast<double>(p.size());
    }
    EXPECT_NEAR(ahre(p, r, ThrRange::nlos()), acc / n, 1e-9);
}

// --- distribution fitting -------------------------------------------------------

TEST(Distributions, TooFewAndConstant) {
    std::vector<double> few(kMinDistributionPoints - 1, 100.0);
    for (std::size_t i = 0; i < few.size(); ++i) few[i] += static_cast<double>(i);
    expect_code(Errc::TooFewPoints, [&] { (void)fit_best_distribution(few); });
    const std::vector<double> flat(1000, 97.0);
    expect_code(Errc::AllFamiliesFailed, [&] { (void)fit_best_distribution(flat); });
}

TEST(Distributions, ClosedFormMles) {
    const auto x = normal_draws(77, 20000, 100.0, 9.0);
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double ss = 0.0, sl = 0.0, sll = 0.0, s2 = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
        sl += std::log(v);
        s2 += v * v;
    }
    const double sd = std::sqrt(ss / static_cast<double>(x.size()));
    const double mu = sl / static_cast<double>(x.size());
    for (double v : x) sll += (std::log(v) - mu) * (std::log(v) - mu);
    const auto n = fit_distribution(Family::Normal, x);
    ASSERT_TRUE(n);
    EXPECT_NEAR(n->params[0], m, 1e-9);
    EXPECT_NEAR(n->params[1], sd, 1e-9);
    const auto ln = fit_distribution(Family::Lognormal, x);
    ASSERT_TRUE(ln);
    EXPECT_NEAR(ln->params[0], mu, 1e-9);
    EXPECT_NEAR(ln->params[1], std::sqrt(sll / static_cast<double>(x.size())), 1e-9);
    const auto ray = fit_distribution(Family::Rayleigh, x);
    ASSERT_TRUE(ray);
    EXPECT_NEAR(ray->params[0], std::sqrt(s2 / (2.0 * static_cast<double>(x.size()))), 1e-9);
    // AIC bookkeeping.
    for (const auto& f : {*n, *ln, *ray}) EXPECT_NEAR(f.aic, 2.0 * parameter_count(f.family) - 2.0 * f.loglik, 1e-6);
}

TEST(Distributions, LoglikIsSumOfLogPdf) {
    const auto x = draws(Family::Gamma, 5, 3000);
    for (Family fam : kAllFamilies) {
        const auto f = fit_distribution(fam, x);
        ASSERT_TRUE(f) << to_string(fam);
        long double s = 0.0L;
        for (double v : x) s += f->log_pdf(v);
        EXPECT_NEAR(f->loglik, static_cast<double>(s), 1e-6 * std::fabs(static_cast<double>(s))) << to_string(fam);
    }
}

TEST(Distributions, FittedPdfIntegratesToOne) {
    const auto x = draws(Family::Ricean, 6, 5000);
    for (Family fam : kAllFamilies) {
        const auto f = fit_distribution(fam, x);
        ASSERT_TRUE(f);
        const double lo = std::max(positive_support(fam) ? 0.0 : -1e9, f->mean() - 12 * f->stddev());
        const double hi = f->mean() + 12 * f->stddev();
        const int nodes = 200001;
        const double h = (hi - lo) / (nodes - 1);
        double s = 0.0;
        for (int i = 0; i < nodes; ++i) s += f->pdf(lo + i * h) * ((i == 0 || i == nodes - 1) ? 0.5 : 1.0);
        EXPECT_NEAR(s * h, 1.0, 2e-3) << to_string(fam);
    }
}

TEST(Distributions, NonPositiveDataKeepsOnlyNormal) {
    auto x = normal_draws(3, 2000, 0.0, 1.0);
    const auto sel = select_distribution(x);
    EXPECT_EQ(sel.best.family, Family::Normal);
    EXPECT_EQ(sel.candidates.size(), 1u);
    EXPECT_FALSE(sel.notices.empty());
}

TEST(Distributions, SelectionIsDeterministicAndMinimalAic) {
    const auto x = draws(Family::Weibull, 12, 20000);
    const auto a = select_distribution(x);
    const auto b = select_distribution(x);
    EXPECT_EQ(a.best.family, b.best.family);
    EXPECT_EQ(a.best.params, b.best.params);
    for (const auto& c : a.candidates) EXPECT_GE(c.aic, a.best.aic);
}

TEST(Distributions, NestingRelation) {
    EXPECT_TRUE(nests(Family::Weibull, Family::Rayleigh));
    EXPECT_TRUE(nests(Family::Ricean, Family::Rayleigh));
    EXPECT_TRUE(nests(Family::Gamma, Family::Chisquare));
    EXPECT_TRUE(nests(Family::Ricean, Family::Normal));
    EXPECT_FALSE(nests(Family::Rayleigh, Family::Weibull));
    for (Family f : kAllFamilies) EXPECT_TRUE(nests(f, f));
}

// Normal(100, 9^2) is matched to within sampling noise by a Ricean with
// nu/sigma ~ 11, so either may carry the lower AIC. The moments are checked.
TEST(Distributions, NormalDrawsSelectNormalOrItsNestingLimit) {
    int exact = 0;
    for (int t = 0; t < 10; ++t) {
        const auto x = normal_draws(500 + t, 100000, 100.0, 9.0);
        const auto best = fit_best_distribution(x);
        EXPECT_TRUE(nests(best.family, Family::Normal)) << to_string(best.family);
        EXPECT_NEAR(best.mean(), 100.0, 0.1);
        EXPECT_NEAR(best.stddev(), 9.0, 0.1);
        exact += best.family == Family::Normal;
    }
    RecordProperty("normal_selected_of_10", exact);
}

// With two one-parameter supersets, rayleigh loses when either likelihood
// ratio statistic exceeds 2. Weibull: P(chi2_1 > 2) = 0.157. Ricean (boundary):
// half that. Bonferroni gives P(rayleigh) >= 0.764; the bound allows 3 binomial
// standard deviations over 100 trials.
TEST(Distributions, RayleighDrawsSelectRayleighOrASuperset) {
    int wins = 0;
    for (int t = 0; t < 100; ++t) {
        const auto x = draws(Family::Rayleigh, 1000 + t, 100000);
        const auto f = fit_best_distribution(x).family;
        EXPECT_TRUE(nests(f, Family::Rayleigh)) << to_string(f);
        wins += f == Family::Rayleigh;
    }
    EXPECT_GE(wins, 64);
    RecordProperty("rayleigh_selected_of_100", wins);
}

// --- pmde ---------------------------------------------------------------------

TEST(Pmde, SameListIsExactlyZero) {
    const auto x = draws(Family::Lognormal, 4, 5000);
    EXPECT_EQ(pmde(x, x), 0.0);
}

TEST(Pmde, SameDistributionIsSmall) {
    const auto a = normal_draws(1, 100000, 100.0, 9.0);
    const auto b = normal_draws(2, 100000, 100.0, 9.0);
    const double v = pmde(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 0.02);
}

TEST(Pmde, DisjointNormalsApproachTwo) {
    const auto a = normal_draws(1, 5000, -500.0, 1.0);
    const auto b = normal_draws(2, 5000, 500.0, 1.0);
    EXPECT_GT(pmde(a, b), 1.999);
    EXPECT_LE(pmde(a, b), 2.0);
}

TEST(Pmde, UnitShiftMatchesAnalyticOverlap) {
    const auto a = normal_draws(11, 100000, 0.0, 1.0);
    const auto b = normal_draws(12, 100000, 1.0, 1.0);
    EXPECT_NEAR(pmde(a, b), oracle::equal_variance_normal_l1(1.0), 0.01);
}

TEST(Pmde, DetailCarriesBothFits) {
    const auto a = normal_draws(11, 1000, 0.0, 1.0);
    const auto b = normal_draws(12, 1000, 3.0, 2.0);
    const auto d = pmde_detail(a, b);
    EXPECT_EQ(d.pred_fit.family, Family::Normal);
    EXPECT_NEAR(d.ref_fit.mean(), 3.0, 0.2);
    EXPECT_EQ(d.value, pmde(a, b));
}

// --- timing -------------------------------------------------------------------

TEST(Timing, NoOpModelIsCheap) {
    const double t = mean_sim_time([](std::span<double>) {}, 100000, 100);
    EXPECT_GE(t, 0.0);
    EXPECT_LT(t, 100.0);
}

TEST(Timing, StableAcrossRoundCounts) {
    std::vector<double> x(20000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 10.0 + static_cast<double>(i);
    auto model = [&](std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 32.4 + 21.0 * std::log10(x[i]);
    };
    const double t100 = mean_sim_time(model, x.size(), 100);
    const double t1000 = mean_sim_time(model, x.size(), 1000);
    EXPECT_LT(std::max(t100, t1000) / std::min(t100, t1000), 3.0);
}

TEST(Timing, Validation) {
    expect_code(Errc::Empty, [] { (void)mean_sim_time([](std::span<double>) {}, 0, 10); });
    EXPECT_THROW((void)mean_sim_time([](std::span<double>) {}, 10, 0), Error);
}

// --- reports ------------------------------------------------------------------

TEST(Report, AbsErrorCdfIsSortedAndEndsAtOne) {
    const std::vector<double> p{1, 5, 2, 8}, r{0, 0, 0, 0};
    const auto cdf = abs_error_cdf(p, r);
    ASSERT_EQ(cdf.size(), 4u);
    EXPECT_TRUE(std::is_sorted(cdf.begin(), cdf.end()));
    EXPECT_EQ(cdf.front(), (std::pair{1.0, 0.25}));
    EXPECT_EQ(cdf.back().second, 1.0);
}

TEST(Report, EvaluateAggregatesMetrics) {
    const auto r = normal_draws(1, 2000, 105.0, 9.0);
    auto p = r;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += (i % 2 ? 2.0 : -2.0);
    const auto rep = evaluate_predictions(p, r, ThrRange::nlos());
    EXPECT_EQ(rep.points, 2000u);
    EXPECT_NEAR(rep.rmse, 2.0, 1e-12);
    EXPECT_NEAR(rep.mae, 2.0, 1e-12);
    EXPECT_EQ(rep.ahre, ahre(p, r, ThrRange::nlos()));
    EXPECT_EQ(rep.pmde, pmde(p, r));
}
