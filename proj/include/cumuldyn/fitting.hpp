#pragma once

// Regression and goodness-of-fit tools: OLS fits of cumulativeness series,
// probability-plot comparisons of backlink and path-length distributions,
// power-law fits across technologies.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cumuldyn/core_types.hpp"

namespace cumuldyn {

/// Ordinary least squares of y on x with the textbook standard errors,
/// residual standard error on n - 2 degrees of freedom, and F statistic.
///
/// Throws std::invalid_argument for mismatched lengths, fewer than three
/// observations or a constant x (degenerate design). When y is constant the
/// fit reports slope 0 and R^2 0.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

enum class SeriesQuantity { id, ipl, mipl };

const char* to_string(SeriesQuantity which);

/// Inclusive range of n used by fit_series; unset bounds are open.
struct SeriesWindow {
    std::optional<std::size_t> min_n;
    std::optional<std::size_t> max_n;
};

/// OLS of one series component against n over every checkpoint in the window.
LinearFit fit_series(const CumulativenessSeries& series, SeriesQuantity which, const SeriesWindow& window = {});

/// Probability-plot correlation of the points; degenerate cases are 1 when
/// every point lies on x = y and 0 otherwise.
double plot_correlation(std::span<const PlotPoint> points);

/// Pearson chi-square of observed counts against a model pmf. Bins are
/// accumulated from value 0 upward and closed once their expected count
/// reaches 5; the remainder, including all model mass beyond the observed
/// range, forms the tail bin and is merged backward when still below 5.
ChiSquare chi_square_test(std::span<const double> observed, std::span<const double> model_pmf,
                          std::size_t fitted_params);

/// Backlink histogram against Geometric(rho(n)) with rho from `params`.
DistributionFit geometric_gof(const BacklinkDistribution& hist, const ModelParams& params, std::size_t n);

/// Backlink histogram against a family whose parameters are fitted by least
/// squares on the probability plot (geometric, binomial, normal, poisson).
DistributionFit backlink_gof(const BacklinkDistribution& hist, DistributionFamily family);

/// Path-length distribution against the binomial-type law with n' (default
/// dist.mipl), or against a least-squares fitted poisson, normal or binomial.
DistributionFit pathlength_gof(const PathLengthDistribution& dist, std::optional<std::size_t> n_prime = std::nullopt,
                               DistributionFamily family = DistributionFamily::binomial_type);

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    LinearFit log_log;

    double predict(double x) const;
};

/// y = prefactor * x^exponent via OLS on (ln x, ln y).
PowerLawFit power_law_fit(std::span<const double> x, std::span<const double> y);

struct TechnologyPoint {
    std::string name;
    double n = 0.0;
    double id = 0.0;
};

enum class Cumulativeness { high, low };

const char* to_string(Cumulativeness c);

struct RelativeCumulativeness {
    PowerLawFit fit;
    std::vector<Cumulativeness> labels;  ///< parallel to the input points
};

/// Fits id = a n^b across technologies and labels each one high when its id is
/// at or above the fitted value (relative tolerance 1e-9, so points on the
/// line are high). The fit is computed on a canonical ordering, so labels do
/// not depend on input order.
RelativeCumulativeness classify_relative_cumulativeness(std::span<const TechnologyPoint> points);

/// Nodes per calendar year: node count / (max year - min year + 1).
double invention_rate(const KnowledgeGraph& g);

}  // namespace cumuldyn
