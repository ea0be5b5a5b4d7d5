// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "ample/error.hpp"
#include "ample/metrics.hpp"

namespace ample {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kLog2Pi = std::log(2.0 * kPi);

// Exponentially scaled modified Bessel functions e^-z I_v(z), z >= 0.
// Above the switch point the asymptotic series is exact to double precision.
constexpr double kBesselSwitch = 500.0;

double i0e(double z) {
    if (z < kBesselSwitch) return boost::math::cyl_bessel_i(0, z) * std::exp(-z);
    const double t = 1.0 / (8.0 * z);
    return (1.0 + t * (1.0 + t * (4.5 + t * 37.5))) / std::sqrt(2.0 * kPi * z);
}

double i1e(double z) {
    if (z < kBesselSwitch) return boost::math::cyl_bessel_i(1, z) * std::exp(-z);
    const double t = 1.0 / (8.0 * z);
    return (1.0 - t * (3.0 + t * (7.5 + t * 52.5))) / std::sqrt(2.0 * kPi * z);
}

double log_i0(double z) { return z + std::log(i0e(z)); }

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double var = 0.0;  // population variance
    double min = 0.0;
    double mean_log = 0.0;
    double var_log = 0.0;
    bool positive = false;
};

Moments moments(std::span<const double> x, std::vector<double>& logs) {
    Moments m;
    m.n = static_cast<double>(x.size());
    m.min = *std::min_element(x.begin(), x.end());
    double s = 0.0;
    for (double v : x) s += v;
    m.mean = s / m.n;
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.var = ss / m.n;
    m.positive = m.min > 0.0;
    logs.clear();
    if (m.positive) {
        logs.resize(x.size());
        double sl = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            logs[i] = std::log(x[i]);
            sl += logs[i];
        }
        m.mean_log = sl / m.n;
        double sv = 0.0;
        for (double l : logs) sv += (l - m.mean_log) * (l - m.mean_log);
        m.var_log = sv / m.n;
    }
    return m;
}

bool finite_all(std::initializer_list<double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double sum_log_pdf(const DistFit& fit, std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += fit.log_pdf(v);
    return s;
}

// ln k - digamma(k) = s, solved by Newton from Minka's starting point.
double gamma_shape(double s) {
    double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int it = 0; it < 100; ++it) {
        const double f = std::log(k) - boost::math::digamma(k) - s;
        const double df = 1.0 / k - boost::math::trigamma(k);
        double next = k - f / df;
        if (!(next > 0.0)) next = k / 2.0;
        if (std::fabs(next - k) <= 1e-14 * k) return next;
        k = next;
    }
    return k;
}

// digamma(a) = t.
double inverse_digamma(double t) {
    double a = t >= -2.22 ? std::exp(t) + 0.5 : -1.0 / (t - boost::math::digamma(1.0));
    for (int it = 0; it < 100; ++it) {
        double next = a - (boost::math::digamma(a) - t) / boost::math::trigamma(a);
        if (!(next > 0.0)) next = a / 2.0;
        if (std::fabs(next - a) <= 1e-14 * a) return next;
        a = next;
    }
    return a;
}

std::optional<DistFit> fit_weibull(std::span<const double> x, const Moments& m, const std::vector<double>& logs) {
    if (!(m.var_log > 0.0)) return std::nullopt;
    // Work with y = x / mean so y^c stays representable for large shapes.
    const double log_scale = std::log(m.mean);
    std::vector<double> ly(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) ly[i] = logs[i] - log_scale;
    const double mean_ly = m.mean_log - log_scale;

    auto moments_at = [&](double c, double& s0, double& s1, double& s2) {
        s0 = s1 = s2 = 0.0;
        for (double l : ly) {
            const double w = std::exp(c * l);
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
    };
    double c = kPi / std::sqrt(6.0 * m.var_log);
    for (int it = 0; it < 100; ++it) {
        double s0, s1, s2;
        moments_at(c, s0, s1, s2);
        const double r1 = s1 / s0;
        const double g = 1.0 / c + mean_ly - r1;
        const double dg = -1.0 / (c * c) - (s2 / s0 - r1 * r1);
        double next = c - g / dg;
        if (!(next > 0.0)) next = c / 2.0;
        const bool done = std::fabs(next - c) <= 1e-13 * c;
        c = next;
        if (done) break;
    }
    double s0 = 0.0;
    for (double l : ly) s0 += std::exp(c * l);
    const double scale = m.mean * std::pow(s0 / m.n, 1.0 / c);
    if (!finite_all({c, scale}) || !(scale > 0.0)) return std::nullopt;
    DistFit f{Family::Weibull, {c, scale}, 0.0, 0.0};
    f.loglik = sum_log_pdf(f, x);
    return f;
}

// Rician MLE over (nu, s = sigma^2): fourth-moment start, then damped Newton
// with nu held non-negative. Stops once a step gains less than kLoglikTol,
// far below any AIC difference that matters; near nu = 0 the likelihood is
// quartic in nu and Newton only converges linearly.
constexpr double kLoglikTol = 1e-7;
struct RiceState {
    double loglik, g_nu, g_s, h_nn, h_ns, h_ss;
};

RiceState rice_eval(std::span<const double> x, double sum_log_x, double nu, double s) {
    RiceState st{};
    const double n = static_cast<double>(x.size());
    double sum_x2 = 0.0, sum_li0 = 0.0, sum_ax = 0.0, sum_dx2 = 0.0;
    for (double v : x) {
        const double z = v * nu / s;
        double a, da, li0;
        if (z < 0.05) {
            // Power series; truncation error below 1e-16.
            const double q = z * z;
            const double i0 = 1.0 + q * (0.25 + q * (1.0 / 64.0 + q / 2304.0));
            const double i1_over_z = 0.5 + q * (1.0 / 16.0 + q * (1.0 / 384.0 + q / 18432.0));
            a = z * i1_over_z / i0;
            da = z > 0.0 ? 1.0 - a / z - a * a : 0.5;
            li0 = std::log1p(q * (0.25 + q * (1.0 / 64.0 + q / 2304.0)));
        } else {
            const double e0 = i0e(z);
            a = i1e(z) / e0;
            da = 1.0 - a / z - a * a;
            li0 = z + std::log(e0);
        }
        sum_x2 += v * v;
        sum_li0 += li0;
        sum_ax += a * v;
        sum_dx2 += da * v * v;
    }
    st.loglik = sum_log_x - n * std::log(s) - (sum_x2 + n * nu * nu) / (2.0 * s) + sum_li0;
    st.g_nu = (-n * nu + sum_ax) / s;
    st.g_s = -n / s + (sum_x2 + n * nu * nu) / (2.0 * s * s) - nu * sum_ax / (s * s);
    st.h_nn = -n / s + sum_dx2 / (s * s);
    st.h_ns = n * nu / (s * s) - sum_ax / (s * s) - nu * sum_dx2 / (s * s * s);
    st.h_ss = n / (s * s) - (sum_x2 + n * nu * nu) / (s * s * s) + 2.0 * nu * sum_ax / (s * s * s) +
              nu * nu * sum_dx2 / (s * s * s * s);
    return st;
}

std::optional<DistFit> fit_ricean(std::span<const double> x, const std::vector<double>& logs) {
    const double n = static_cast<double>(x.size());
    double m2 = 0.0, m4 = 0.0, sum_log = 0.0;
    for (double v : x) {
        m2 += v * v;
        m4 += v * v * v * v;
    }
    for (double l : logs) sum_log += l;
    m2 /= n;
    m4 /= n;
    const double nu4 = 2.0 * m2 * m2 - m4;
    double nu = nu4 > 0.0 ? std::pow(nu4, 0.25) : 0.0;
    double s = std::max((m2 - nu * nu) / 2.0, 1e-6 * m2);
    if (nu <= 0.0) nu = 0.1 * std::sqrt(m2);

    RiceState st = rice_eval(x, sum_log, nu, s);
    for (int it = 0; it < 200; ++it) {
        const double det = st.h_nn * st.h_ss - st.h_ns * st.h_ns;
        double d_nu, d_s;
        if (st.h_nn < 0.0 && det > 0.0) {
            d_nu = -(st.h_ss * st.g_nu - st.h_ns * st.g_s) / det;
            d_s = -(-st.h_ns * st.g_nu + st.h_nn * st.g_s) / det;
        } else {
            // Not locally concave: scaled gradient ascent.
            d_nu = st.g_nu * s / n;
            d_s = st.g_s * s * s / n;
        }
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            const double nu_new = std::max(0.0, nu + t * d_nu);
            const double s_new = s + t * d_s;
            if (s_new > 0.0) {
                const RiceState trial = rice_eval(x, sum_log, nu_new, s_new);
                if (std::isfinite(trial.loglik) && trial.loglik >= st.loglik) {
                    const bool tiny = trial.loglik - st.loglik <= kLoglikTol;
                    nu = nu_new;
                    s = s_new;
                    st = trial;
                    moved = !tiny;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!moved) break;
    }
    const double sigma = std::sqrt(s);
    if (!finite_all({nu, sigma, st.loglik}) || !(sigma > 0.0)) return std::nullopt;
    return DistFit{Family::Ricean, {nu, sigma}, st.loglik, 0.0};
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::Normal: return "normal";
        case Family::Lognormal: return "lognormal";
        case Family::Gamma: return "gamma";
        case Family::Weibull: return "weibull";
        case Family::Rayleigh: return "rayleigh";
        case Family::Ricean: return "ricean";
        case Family::Chisquare: return "chisquare";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (Family f : kAllFamilies) {
        if (to_string(f) == name) return f;
    }
    throw Error(Errc::InvalidArgument, "unknown distribution family '" + std::string(name) + "'");
}

int parameter_count(Family f) noexcept { return (f == Family::Rayleigh || f == Family::Chisquare) ? 1 : 2; }

bool positive_support(Family f) noexcept { return f != Family::Normal; }

bool nests(Family outer, Family inner) noexcept {
    if (outer == inner) return true;
    switch (inner) {
        case Family::Rayleigh: return outer == Family::Weibull || outer == Family::Ricean;
        case Family::Chisquare: return outer == Family::Gamma;
        // Limits: ricean as nu/sigma grows, gamma as shape grows, lognormal as sigma shrinks.
        case Family::Normal:
            return outer == Family::Ricean || outer == Family::Gamma || outer == Family::Lognormal;
        default: return false;
    }
}

double DistFit::log_pdf(double x) const {
    const double a = params[0];
    const double b = params[1];
    const double ninf = -std::numeric_limits<double>::infinity();
    if (positive_support(family) && !(x > 0.0)) return ninf;
    switch (family) {
        case Family::Normal: {
            const double z = (x - a) / b;
            return -0.5 * kLog2Pi - std::log(b) - 0.5 * z * z;
        }
        case Family::Lognormal: {
            const double lx = std::log(x);
            const double z = (lx - a) / b;
            return -lx - 0.5 * kLog2Pi - std::log(b) - 0.5 * z * z;
        }
        case Family::Gamma: return (a - 1.0) * std::log(x) - x / b - a * std::log(b) - std::lgamma(a);
        case Family::Weibull: {
            const double lr = std::log(x / b);
            return std::log(a / b) + (a - 1.0) * lr - std::exp(a * lr);
        }
        case Family::Rayleigh: return std::log(x) - 2.0 * std::log(a) - x * x / (2.0 * a * a);
        case Family::Ricean: {
            const double s = b * b;
            return std::log(x) - std::log(s) - (x * x + a * a) / (2.0 * s) + log_i0(x * a / s);
        }
        case Family::Chisquare: {
            const double h = a / 2.0;
            return (h - 1.0) * std::log(x) - x / 2.0 - h * std::numbers::ln2 - std::lgamma(h);
        }
    }
    return kNaN;
}

double DistFit::pdf(double x) const { return std::exp(log_pdf(x)); }

double DistFit::mean() const {
    const double a = params[0];
    const double b = params[1];
    switch (family) {
        case Family::Normal: return a;
        case Family::Lognormal: return std::exp(a + b * b / 2.0);
        case Family::Gamma: return a * b;
        case Family::Weibull: return b * std::tgamma(1.0 + 1.0 / a);
        case Family::Rayleigh: return a * std::sqrt(kPi / 2.0);
        case Family::Ricean: {
            // sigma sqrt(pi/2) L_{1/2}(-q) with q = nu^2 / (2 sigma^2), in scaled Bessel form.
            const double q = a * a / (2.0 * b * b);
            return b * std::sqrt(kPi / 2.0) * ((1.0 + q) * i0e(q / 2.0) + q * i1e(q / 2.0));
        }
        case Family::Chisquare: return a;
    }
    return kNaN;
}

double DistFit::stddev() const {
    const double a = params[0];
    const double b = params[1];
    switch (family) {
        case Family::Normal: return b;
        case Family::Lognormal: return std::sqrt(std::expm1(b * b)) * std::exp(a + b * b / 2.0);
        case Family::Gamma: return std::sqrt(a) * b;
        case Family::Weibull: {
            const double g1 = std::tgamma(1.0 + 1.0 / a);
            return b * std::sqrt(std::max(0.0, std::tgamma(1.0 + 2.0 / a) - g1 * g1));
        }
        case Family::Rayleigh: return a * std::sqrt((4.0 - kPi) / 2.0);
        case Family::Ricean: {
            const double m = mean();
            return std::sqrt(std::max(0.0, 2.0 * b * b + a * a - m * m));
        }
        case Family::Chisquare: return std::sqrt(2.0 * a);
    }
    return kNaN;
}

namespace {

std::optional<DistFit> fit_with(Family family, std::span<const double> x, const Moments& m,
                                const std::vector<double>& logs) {
    if (positive_support(family) && !m.positive) return std::nullopt;
    std::optional<DistFit> fit;
    switch (family) {
        case Family::Normal: {
            if (!(m.var > 0.0)) return std::nullopt;
            const double sd = std::sqrt(m.var);
            fit = DistFit{family, {m.mean, sd}, -0.5 * m.n * (kLog2Pi + 2.0 * std::log(sd) + 1.0), 0.0};
            break;
        }
        case Family::Lognormal: {
            if (!(m.var_log > 0.0)) return std::nullopt;
            const double sd = std::sqrt(m.var_log);
            fit = DistFit{family, {m.mean_log, sd},
                          -m.n * m.mean_log - 0.5 * m.n * (kLog2Pi + 2.0 * std::log(sd) + 1.0), 0.0};
            break;
        }
        case Family::Gamma: {
            const double s = std::log(m.mean) - m.mean_log;
            if (!(s > 0.0)) return std::nullopt;
            const double k = gamma_shape(s);
            const double theta = m.mean / k;
            fit = DistFit{family, {k, theta}, 0.0, 0.0};
            fit->loglik = m.n * ((k - 1.0) * m.mean_log - k - k * std::log(theta) - std::lgamma(k));
            break;
        }
        case Family::Weibull: fit = fit_weibull(x, m, logs); break;
        case Family::Rayleigh: {
            const double s2 = (m.var + m.mean * m.mean) / 2.0;
            if (!(s2 > 0.0)) return std::nullopt;
            const double sigma = std::sqrt(s2);
            fit = DistFit{family, {sigma, 0.0}, m.n * (m.mean_log - std::log(s2) - 1.0), 0.0};
            break;
        }
        case Family::Ricean: fit = fit_ricean(x, logs); break;
        case Family::Chisquare: {
            const double dof = 2.0 * inverse_digamma(m.mean_log - std::numbers::ln2);
            const double h = dof / 2.0;
            fit = DistFit{family, {dof, 0.0}, 0.0, 0.0};
            fit->loglik = m.n * ((h - 1.0) * m.mean_log - m.mean / 2.0 - h * std::numbers::ln2 - std::lgamma(h));
            break;
        }
    }
    if (!fit || !finite_all({fit->params[0], fit->params[1], fit->loglik})) return std::nullopt;
    fit->aic = 2.0 * parameter_count(family) - 2.0 * fit->loglik;
    return fit;
}

void require_points(std::span<const double> data) {
    if (data.size() < kMinDistributionPoints) {
        throw Error(Errc::TooFewPoints, "distribution fitting needs at least " + std::to_string(kMinDistributionPoints) +
                                            " points, got " + std::to_string(data.size()));
    }
    for (double v : data) {
        if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "distribution data must be finite");
    }
}

}  // namespace

std::optional<DistFit> fit_distribution(Family family, std::span<const double> data) {
    require_points(data);
    std::vector<double> logs;
    const Moments m = moments(data, logs);
    if (!(m.var > 0.0)) return std::nullopt;
    return fit_with(family, data, m, logs);
}

DistSelection select_distribution(std::span<const double> data) {
    require_points(data);
    std::vector<double> logs;
    const Moments m = moments(data, logs);
    if (!(m.var > 0.0)) throw Error(Errc::AllFamiliesFailed, "data have zero variance");

    DistSelection sel;
    if (!m.positive) sel.notices.push_back("non-positive values present: positive-support families skipped");
    for (Family f : kAllFamilies) {
        if (positive_support(f) && !m.positive) continue;
        if (auto fit = fit_with(f, data, m, logs)) {
            sel.candidates.push_back(*fit);
        } else {
            sel.notices.push_back(std::string(to_string(f)) + " fit failed");
        }
    }
    if (sel.candidates.empty()) throw Error(Errc::AllFamiliesFailed, "no candidate family could be fitted");
    // Candidates are in family order, so a strict comparison keeps the
    // earlier family on exact ties after the parameter-count rule.
    sel.best = sel.candidates.front();
    for (const auto& c : sel.candidates) {
        if (c.aic < sel.best.aic ||
            (c.aic == sel.best.aic && parameter_count(c.family) < parameter_count(sel.best.family))) {
            sel.best = c;
        }
    }
    return sel;
}

DistFit fit_best_distribution(std::span<const double> data) { return select_distribution(data).best; }

PmdeResult pmde_detail(std::span<const double> pred, std::span<const double> ref) {
    auto sp = select_distribution(pred);
    auto sr = select_distribution(ref);
    PmdeResult out;
    out.pred_fit = sp.best;
    out.ref_fit = sr.best;
    for (auto& n : sp.notices) out.notices.push_back("prediction: " + n);
    for (auto& n : sr.notices) out.notices.push_back("reference: " + n);

    const double mp = out.pred_fit.mean(), mr = out.ref_fit.mean();
    const double s_max = std::max(out.pred_fit.stddev(), out.ref_fit.stddev());
    const double lo = std::min(mp, mr) - 8.0 * s_max;
    const double hi = std::max(mp, mr) + 8.0 * s_max;
    if (!finite_all({lo, hi}) || !(hi > lo)) throw Error(Errc::AllFamiliesFailed, "degenerate PMDE integration range");

    const double h = (hi - lo) / static_cast<double>(kPmdeNodes - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < kPmdeNodes; ++i) {
        const double x = lo + h * static_cast<double>(i);
        const double d = std::fabs(out.pred_fit.pdf(x) - out.ref_fit.pdf(x));
        sum += (i == 0 || i + 1 == kPmdeNodes) ? 0.5 * d : d;
    }
    out.value = std::clamp(sum * h, 0.0, 2.0);
    return out;
}

double pmde(std::span<const double> pred, std::span<const double> ref) { return pmde_detail(pred, ref).value; }

}  // namespace ample
