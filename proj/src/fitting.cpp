#include "cumuldyn/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/minima.hpp>

#include "cumuldyn/analytic.hpp"
#include "cumuldyn/growth.hpp"
#include "cumuldyn/numeric.hpp"

namespace cumuldyn {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();
constexpr double inf_value = std::numeric_limits<double>::infinity();

double two_sided_t_p(double estimate, double se, double dof) {
    if (se == 0.0) return estimate == 0.0 ? 1.0 : 0.0;
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(estimate / se)));
}

/// Minimize f on [lo, hi] with Brent's method.
double brent_min(const std::function<double(double)>& f, double lo, double hi) {
    const auto [arg, value] = boost::math::tools::brent_find_minima(f, lo, hi, 40);
    (void)value;
    return arg;
}

/// Least-squares objectives over a wide range can have several local minima,
/// so bracket the global one on a grid before refining with Brent.
double grid_brent_min(const std::function<double(double)>& f, double lo, double hi, std::size_t steps = 200) {
    const double h = (hi - lo) / static_cast<double>(steps);
    std::size_t best = 0;
    double best_value = inf_value;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double v = f(lo + h * static_cast<double>(i));
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double a = lo + h * static_cast<double>(best == 0 ? 0 : best - 1);
    const double b = lo + h * static_cast<double>(std::min(best + 1, steps));
    return brent_min(f, a, b);
}

double sse(std::span<const double> empirical, const std::vector<double>& model) {
    double acc = 0.0;
    const std::size_t len = std::max(empirical.size(), model.size());
    for (std::size_t v = 0; v < len; ++v) {
        const double e = v < empirical.size() ? empirical[v] : 0.0;
        const double m = v < model.size() ? model[v] : 0.0;
        acc += (e - m) * (e - m);
    }
    return acc;
}

std::vector<double> geometric_pmf(double p, std::size_t len) {
    std::vector<double> out(len);
    for (std::size_t v = 0; v < len; ++v) out[v] = std::pow(1.0 - p, static_cast<double>(v)) * p;
    return out;
}

std::vector<double> poisson_pmf(double eta, std::size_t len) {
    std::vector<double> out(len);
    for (std::size_t v = 0; v < len; ++v) {
        const double vd = static_cast<double>(v);
        out[v] = std::exp(vd * std::log(eta) - eta - std::lgamma(vd + 1.0));
    }
    return out;
}

std::vector<double> binomial_pmf(std::size_t trials, double p, std::size_t len) {
    std::vector<double> out(std::min(len, trials + 1), 0.0);
    for (std::size_t v = 0; v < out.size(); ++v) {
        if (p <= 0.0) {
            out[v] = v == 0 ? 1.0 : 0.0;
        } else if (p >= 1.0) {
            out[v] = v == trials ? 1.0 : 0.0;
        } else {
            const double vd = static_cast<double>(v);
            out[v] = std::exp(numeric::log_binomial(static_cast<double>(trials), v) + vd * std::log(p) +
                              (static_cast<double>(trials) - vd) * std::log1p(-p));
        }
    }
    return out;
}

/// Normal probability of the unit bin centred on each value.
std::vector<double> normal_pmf(double mu, double sigma, std::size_t len) {
    const boost::math::normal dist(mu, sigma);
    std::vector<double> out(len);
    for (std::size_t v = 0; v < len; ++v) {
        const double vd = static_cast<double>(v);
        out[v] = boost::math::cdf(dist, vd + 0.5) - boost::math::cdf(dist, vd - 0.5);
    }
    return out;
}

struct FittedModel {
    std::vector<double> params;
    std::vector<double> pmf;
    std::size_t fitted = 0;
};

double mean_of(std::span<const double> pmf) {
    double m = 0.0;
    for (std::size_t v = 0; v < pmf.size(); ++v) m += static_cast<double>(v) * pmf[v];
    return m;
}

/// Least-squares fit of a family to an empirical pmf on the probability plot.
FittedModel fit_family(std::span<const double> empirical, DistributionFamily family, std::size_t binomial_trials) {
    const std::size_t len = empirical.size();
    const double top = static_cast<double>(len);
    FittedModel out;
    switch (family) {
        case DistributionFamily::geometric: {
            const double p = grid_brent_min([&](double x) { return sse(empirical, geometric_pmf(x, len)); }, 1e-9, 1.0);
            out.params = {p};
            out.pmf = geometric_pmf(p, len);
            out.fitted = 1;
            break;
        }
        case DistributionFamily::poisson: {
            const double eta =
                grid_brent_min([&](double x) { return sse(empirical, poisson_pmf(x, len)); }, 1e-9, 2.0 * top + 10.0);
            out.params = {eta};
            out.pmf = poisson_pmf(eta, len);
            out.fitted = 1;
            break;
        }
        case DistributionFamily::binomial: {
            const std::size_t trials = std::max<std::size_t>(binomial_trials, 1);
            // Search over the mean so small p stays resolvable for many trials.
            const double n_trials = static_cast<double>(trials);
            const double mean = grid_brent_min(
                [&](double m) { return sse(empirical, binomial_pmf(trials, m / n_trials, len)); }, 0.0,
                std::min(n_trials, top));
            const double p = mean / n_trials;
            out.params = {static_cast<double>(trials), p};
            out.pmf = binomial_pmf(trials, p, len);
            out.fitted = 1;
            break;
        }
        case DistributionFamily::normal: {
            const auto best_sigma = [&](double mu) {
                return brent_min([&](double s) { return sse(empirical, normal_pmf(mu, s, len)); }, 0.05, top + 5.0);
            };
            const double centre = mean_of(empirical);
            const double mu = grid_brent_min(
                [&](double m) { return sse(empirical, normal_pmf(m, best_sigma(m), len)); },
                std::min(-1.0, centre - 1.0), std::max(top + 1.0, centre + 1.0), 40);
            const double sigma = best_sigma(mu);
            out.params = {mu, sigma};
            out.pmf = normal_pmf(mu, sigma, len);
            out.fitted = 2;
            break;
        }
        case DistributionFamily::binomial_type:
            throw std::invalid_argument("binomial-type law is not a least-squares family");
    }
    return out;
}

std::vector<PlotPoint> make_plot(std::span<const double> empirical, std::span<const double> model) {
    const std::size_t len = std::max(empirical.size(), model.size());
    std::vector<PlotPoint> points(len);
    for (std::size_t v = 0; v < len; ++v) {
        points[v].value = v;
        points[v].empirical = v < empirical.size() ? empirical[v] : 0.0;
        points[v].model = v < model.size() ? model[v] : 0.0;
    }
    return points;
}

DistributionFit assemble(DistributionFamily family, std::vector<double> params, std::span<const double> empirical,
                         std::span<const double> observed, const std::vector<double>& model, std::size_t fitted) {
    DistributionFit fit;
    fit.family = family;
    fit.params = std::move(params);
    fit.plot_points = make_plot(empirical, model);
    fit.plot_correlation = plot_correlation(fit.plot_points);

    double var_e = 0.0;
    double var_m = 0.0;
    const double n = static_cast<double>(fit.plot_points.size());
    double mean_e = 0.0;
    double mean_m = 0.0;
    for (const auto& p : fit.plot_points) {
        mean_e += p.empirical / n;
        mean_m += p.model / n;
    }
    for (const auto& p : fit.plot_points) {
        var_e += (p.empirical - mean_e) * (p.empirical - mean_e);
        var_m += (p.model - mean_m) * (p.model - mean_m);
    }
    if (fit.plot_points.size() < 2 || var_e == 0.0 || var_m == 0.0) {
        fit.warnings.push_back("degenerate probability plot; correlation set by x = y agreement");
    }

    const bool finite = std::all_of(observed.begin(), observed.end(), [](double v) { return std::isfinite(v); });
    if (finite) {
        fit.chi_square = chi_square_test(observed, model, fitted);
    } else {
        fit.chi_square = {inf_value, 0, 0.0};
        fit.warnings.push_back("observed counts exceed double range; chi-square not computed");
    }
    return fit;
}

}  // namespace

const char* to_string(SeriesQuantity which) {
    switch (which) {
        case SeriesQuantity::id: return "id";
        case SeriesQuantity::ipl: return "ipl";
        case SeriesQuantity::mipl: return "mipl";
    }
    return "unknown";
}

const char* to_string(Cumulativeness c) { return c == Cumulativeness::high ? "high" : "low"; }

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols_fit: x and y differ in length");
    if (x.size() < 3) throw std::invalid_argument("ols_fit: at least three observations required");
    const std::size_t n = x.size();
    const double nd = static_cast<double>(n);

    // Shift by the first point; a constant y then centres to exact zeros.
    const double x0 = x[0];
    const double y0 = y[0];
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i] - x0;
        sy += y[i] - y0;
    }
    const double mx = sx / nd;
    const double my = sy / nd;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = (x[i] - x0) - mx;
        const double dy = (y[i] - y0) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("ols_fit: degenerate design, x is constant");

    LinearFit fit;
    fit.n_obs = n;
    fit.slope = sxy / sxx;
    const double x_mean = x0 + mx;
    fit.intercept = (y0 + my) - fit.slope * x_mean;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.predict(x[i]);
        sse += r * r;
    }
    const double dof = nd - 2.0;
    const double ssr = std::max(0.0, syy - sse);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 0.0;
    fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * (nd - 1.0) / dof;
    fit.residual_se = std::sqrt(sse / dof);
    fit.slope_se = fit.residual_se / std::sqrt(sxx);
    fit.intercept_se = fit.residual_se * std::sqrt(1.0 / nd + x_mean * x_mean / sxx);
    fit.slope_p_value = two_sided_t_p(fit.slope, fit.slope_se, dof);
    fit.intercept_p_value = two_sided_t_p(fit.intercept, fit.intercept_se, dof);

    if (sse > 0.0) {
        fit.f_statistic = ssr / (sse / dof);
        const boost::math::fisher_f f_dist(1.0, dof);
        fit.f_p_value = boost::math::cdf(boost::math::complement(f_dist, fit.f_statistic));
    } else {
        fit.f_statistic = ssr > 0.0 ? inf_value : 0.0;
        fit.f_p_value = ssr > 0.0 ? 0.0 : 1.0;
    }
    return fit;
}

LinearFit fit_series(const CumulativenessSeries& series, SeriesQuantity which, const SeriesWindow& window) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& cp : series.checkpoints) {
        if (window.min_n && cp.n < *window.min_n) continue;
        if (window.max_n && cp.n > *window.max_n) continue;
        xs.push_back(static_cast<double>(cp.n));
        switch (which) {
            case SeriesQuantity::id: ys.push_back(cp.id); break;
            case SeriesQuantity::ipl: ys.push_back(cp.ipl); break;
            case SeriesQuantity::mipl: ys.push_back(static_cast<double>(cp.mipl)); break;
        }
    }
    return ols_fit(xs, ys);
}

double plot_correlation(std::span<const PlotPoint> points) {
    const std::size_t n = points.size();
    const bool on_line = std::all_of(points.begin(), points.end(),
                                     [](const PlotPoint& p) { return std::abs(p.empirical - p.model) <= 1e-12; });
    if (n < 2) return on_line ? 1.0 : 0.0;
    double me = 0.0;
    double mm = 0.0;
    for (const auto& p : points) {
        me += p.empirical;
        mm += p.model;
    }
    me /= static_cast<double>(n);
    mm /= static_cast<double>(n);
    double see = 0.0;
    double smm = 0.0;
    double sem = 0.0;
    for (const auto& p : points) {
        see += (p.empirical - me) * (p.empirical - me);
        smm += (p.model - mm) * (p.model - mm);
        sem += (p.empirical - me) * (p.model - mm);
    }
    if (see == 0.0 || smm == 0.0) return on_line ? 1.0 : 0.0;
    return std::clamp(sem / std::sqrt(see * smm), -1.0, 1.0);
}

ChiSquare chi_square_test(std::span<const double> observed, std::span<const double> model_pmf,
                          std::size_t fitted_params) {
    const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    const std::size_t len = std::max(observed.size(), model_pmf.size());
    struct Bin {
        double obs = 0.0;
        double exp = 0.0;
    };
    std::vector<Bin> bins;
    Bin open;
    double cum_model = 0.0;
    for (std::size_t v = 0; v < len; ++v) {
        const double m = v < model_pmf.size() ? model_pmf[v] : 0.0;
        open.obs += v < observed.size() ? observed[v] : 0.0;
        open.exp += total * m;
        cum_model += m;
        const double tail_expected = total * std::max(0.0, 1.0 - cum_model);
        if (open.exp >= 5.0 && tail_expected >= 5.0) {
            bins.push_back(open);
            open = Bin{};
        }
    }
    open.exp += total * std::max(0.0, 1.0 - cum_model);
    if (open.exp < 5.0 && !bins.empty()) {
        bins.back().obs += open.obs;
        bins.back().exp += open.exp;
    } else {
        bins.push_back(open);
    }

    ChiSquare out;
    for (const auto& b : bins) {
        if (b.exp > 0.0) {
            out.statistic += (b.obs - b.exp) * (b.obs - b.exp) / b.exp;
        } else if (b.obs > 0.0) {
            out.statistic = inf_value;
        }
    }
    const std::size_t used = 1 + fitted_params;
    out.dof = bins.size() > used ? bins.size() - used : 0;
    if (out.dof == 0) {
        out.p_value = nan_value;
    } else if (std::isinf(out.statistic)) {
        out.p_value = 0.0;
    } else {
        const boost::math::chi_squared dist(static_cast<double>(out.dof));
        out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    }
    return out;
}

DistributionFit geometric_gof(const BacklinkDistribution& hist, const ModelParams& params, std::size_t n) {
    if (hist.counts.empty() || hist.n == 0) throw std::invalid_argument("geometric_gof: empty histogram");
    const double p = rho(n, params);
    std::vector<double> observed(hist.counts.begin(), hist.counts.end());
    std::vector<double> empirical(observed.size());
    for (std::size_t v = 0; v < observed.size(); ++v) empirical[v] = observed[v] / static_cast<double>(hist.n);
    return assemble(DistributionFamily::geometric, {p}, empirical, observed, geometric_pmf(p, observed.size()), 0);
}

DistributionFit backlink_gof(const BacklinkDistribution& hist, DistributionFamily family) {
    if (hist.counts.empty() || hist.n == 0) throw std::invalid_argument("backlink_gof: empty histogram");
    std::vector<double> observed(hist.counts.begin(), hist.counts.end());
    std::vector<double> empirical(observed.size());
    for (std::size_t v = 0; v < observed.size(); ++v) empirical[v] = observed[v] / static_cast<double>(hist.n);
    const std::size_t trials = hist.n > 1 ? hist.n - 1 : 1;
    FittedModel model = fit_family(empirical, family, trials);
    return assemble(family, model.params, empirical, observed, model.pmf, model.fitted);
}

DistributionFit pathlength_gof(const PathLengthDistribution& dist, std::optional<std::size_t> n_prime,
                               DistributionFamily family) {
    if (!dist.has_paths()) throw std::invalid_argument("pathlength_gof: distribution has no paths");
    const std::vector<double>& empirical = dist.normalized;
    std::vector<double> observed(empirical.size());
    for (std::size_t k = 0; k < empirical.size(); ++k) {
        observed[k] = dist.is_exact() ? dist.counts[k].convert_to<double>() : std::exp(dist.log_counts[k]);
    }

    if (family == DistributionFamily::binomial_type) {
        const std::size_t np = n_prime.value_or(dist.mipl);
        const Pmf model = np == 0 ? Pmf{1.0} : binomial_path_dist(np);
        DistributionFit fit =
            assemble(family, {static_cast<double>(np)}, empirical, observed, model, n_prime ? 0 : 1);
        if (dist.mipl == 0) fit.warnings.push_back("single-length distribution (k = 0 only)");
        return fit;
    }
    FittedModel model = fit_family(empirical, family, std::max<std::size_t>(dist.mipl, 1));
    return assemble(family, model.params, empirical, observed, model.pmf, model.fitted);
}

double PowerLawFit::predict(double x) const { return prefactor * std::pow(x, exponent); }

PowerLawFit power_law_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("power_law_fit: x and y differ in length");
    std::vector<double> lx(x.size());
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("power_law_fit: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    PowerLawFit fit;
    fit.log_log = ols_fit(lx, ly);
    fit.exponent = fit.log_log.slope;
    fit.prefactor = std::exp(fit.log_log.intercept);
    return fit;
}

RelativeCumulativeness classify_relative_cumulativeness(std::span<const TechnologyPoint> points) {
    if (points.size() < 3) throw std::invalid_argument("classification needs at least three technologies");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = points[a];
        const auto& pb = points[b];
        if (pa.n != pb.n) return pa.n < pb.n;
        if (pa.id != pb.id) return pa.id < pb.id;
        return pa.name < pb.name;
    });
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i : order) {
        xs.push_back(points[i].n);
        ys.push_back(points[i].id);
    }
    RelativeCumulativeness out;
    out.fit = power_law_fit(xs, ys);
    for (const auto& p : points) {
        const double fitted = out.fit.predict(p.n);
        out.labels.push_back(p.id >= fitted * (1.0 - 1e-9) ? Cumulativeness::high : Cumulativeness::low);
    }
    return out;
}

double invention_rate(const KnowledgeGraph& g) {
    if (g.empty()) throw std::invalid_argument("invention_rate: empty graph");
    if (!g.has_years()) throw std::invalid_argument("invention_rate: every node needs a year");
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const auto& v : g.nodes()) {
        lo = std::min(lo, *v.year);
        hi = std::max(hi, *v.year);
    }
    return static_cast<double>(g.node_count()) / static_cast<double>(hi - lo + 1);
}

}  // namespace cumuldyn
