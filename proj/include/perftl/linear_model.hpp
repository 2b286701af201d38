#pragma once

#include <span>
#include <vector>

#include "perftl/dataset.hpp"
#include "perftl/model.hpp"
#include "perftl/terms.hpp"

namespace perftl {

/// Stepwise-selected polynomial regression model over encoded features.
class LinearTermModel final : public PerformanceModel {
public:
    LinearTermModel(std::vector<Term> terms, std::vector<double> coefficients, double r_squared);

    double predict_encoded(std::span<const double> features) const override;
    std::string kind() const override { return "linear_terms"; }

    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    double r_squared() const { return r_squared_; }

private:
    std::vector<Term> terms_;
    std::vector<double> coefficients_;
    double r_squared_;
};

struct OlsFit {
    std::vector<double> coefficients;
    double r_squared = 0.0;   // 1 - SSE/SST; 1.0 when SST == 0
    double sse = 0.0;
    double sst = 0.0;
    std::size_t rows = 0;
    std::vector<double> coef_variance_unit;  // diag((X^T X)^+), per coefficient
};

/// Least squares over explicit design rows (one column per term value).
/// Minimum-norm solution when the design is rank-deficient.
OlsFit fit_ols(const std::vector<std::vector<double>>& design_rows,
               const std::vector<double>& targets);

struct StepwiseParams {
    double fs_epsilon = 1e-3;  // minimum R^2 gain to accept a forward step
    double be_alpha = 0.05;    // keep a term only if its t-test p-value <= alpha
};

/// Forward selection / backward elimination over the degree-2 candidate set.
/// The intercept is always included and exempt from elimination and pruning.
LinearTermModel stepwise_fit(const std::vector<std::vector<double>>& encoded_rows,
                             const std::vector<double>& targets,
                             std::span<const Term> candidates, const StepwiseParams& params);

/// Convenience: per-configuration replicate means of `dataset` as the rows.
LinearTermModel stepwise_fit(const MeasurementDataset& dataset, Metric metric,
                             const StepwiseParams& params);

/// Drops non-intercept terms with |coefficient| < 1e-12 (strictly less).
LinearTermModel prune_small_coefficients(const LinearTermModel& model);

inline constexpr double kCoefficientPruneThreshold = 1e-12;

/// Options and interaction pairs appearing in surviving non-intercept terms.
InfluenceSet influential_terms(const LinearTermModel& model);

}  // namespace perftl
