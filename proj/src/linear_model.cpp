#include "perftl/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

namespace perftl {

namespace {

// Coefficients with smaller magnitude are treated as exactly zero when the
// residual is zero and no t-statistic exists.
constexpr double kZeroCoefficient = 1e-10;

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("empty design");
    const std::size_t cols = rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("ragged design rows");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

OlsFit fit_ols_eigen(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    if (design.rows() != y.size()) throw std::invalid_argument("design/target size mismatch");
    if (design.rows() == 0) throw std::invalid_argument("empty input");

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    const Eigen::VectorXd coef = cod.solve(y);
    const Eigen::VectorXd residual = y - design * coef;

    OlsFit fit;
    fit.rows = static_cast<std::size_t>(design.rows());
    fit.coefficients.assign(coef.data(), coef.data() + coef.size());
    fit.sse = residual.squaredNorm();
    const double mean = y.mean();
    fit.sst = (y.array() - mean).matrix().squaredNorm();
    fit.r_squared = fit.sst == 0.0 ? 1.0 : 1.0 - fit.sse / fit.sst;
    fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);

    // diag((X^T X)^+) via the pseudo-inverse; feeds coefficient t-tests.
    const Eigen::MatrixXd pinv = cod.pseudoInverse();
    fit.coef_variance_unit.resize(static_cast<std::size_t>(coef.size()));
    for (Eigen::Index j = 0; j < coef.size(); ++j) {
        fit.coef_variance_unit[static_cast<std::size_t>(j)] = pinv.row(j).squaredNorm();
    }
    return fit;
}

// Design matrix with one column per term, evaluated on encoded rows.
Eigen::MatrixXd term_design(const std::vector<std::vector<double>>& encoded_rows,
                            std::span<const Term> terms) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(encoded_rows.size()),
                      static_cast<Eigen::Index>(terms.size()));
    for (std::size_t r = 0; r < encoded_rows.size(); ++r) {
        for (std::size_t c = 0; c < terms.size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                terms[c].value(encoded_rows[r]);
        }
    }
    return m;
}

// Two-sided p-value of coefficient j, or 1.0 when untestable. With a zero
// residual the t-statistic degenerates: nonzero coefficients are certainly
// significant, zero ones certainly not.
double coefficient_p_value(const OlsFit& fit, std::size_t j) {
    const double df = static_cast<double>(fit.rows) - static_cast<double>(fit.coefficients.size());
    if (df < 1.0) return 0.0;  // saturated model, nothing testable; keep terms
    const double sigma2 = fit.sse / df;
    const double var = sigma2 * fit.coef_variance_unit[j];
    const double coef = fit.coefficients[j];
    if (var <= 0.0 || !std::isfinite(var)) {
        return std::abs(coef) < kZeroCoefficient ? 1.0 : 0.0;
    }
    const double t = std::abs(coef) / std::sqrt(var);
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

}  // namespace

LinearTermModel::LinearTermModel(std::vector<Term> terms, std::vector<double> coefficients,
                                 double r_squared)
    : terms_(std::move(terms)), coefficients_(std::move(coefficients)), r_squared_(r_squared) {
    if (terms_.size() != coefficients_.size()) {
        throw std::invalid_argument("terms and coefficients must have equal length");
    }
}

double LinearTermModel::predict_encoded(std::span<const double> features) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        sum += coefficients_[k] * terms_[k].value(features);
    }
    return sum;
}

OlsFit fit_ols(const std::vector<std::vector<double>>& design_rows,
               const std::vector<double>& targets) {
    if (design_rows.empty() || targets.empty()) throw std::invalid_argument("empty input");
    const Eigen::Map<const Eigen::VectorXd> y(targets.data(),
                                              static_cast<Eigen::Index>(targets.size()));
    return fit_ols_eigen(to_matrix(design_rows), y);
}

LinearTermModel stepwise_fit(const std::vector<std::vector<double>>& encoded_rows,
                             const std::vector<double>& targets,
                             std::span<const Term> candidates, const StepwiseParams& params) {
    if (encoded_rows.size() < 2) {
        throw std::invalid_argument("degenerate dataset: stepwise regression needs at least 2 "
                                    "distinct configurations");
    }
    if (encoded_rows.size() != targets.size()) {
        throw std::invalid_argument("rows/targets size mismatch");
    }
    if (!(params.fs_epsilon > 0.0)) throw std::invalid_argument("fs_epsilon must be positive");
    if (!(params.be_alpha > 0.0 && params.be_alpha < 1.0)) {
        throw std::invalid_argument("be_alpha must be in (0, 1)");
    }

    const Eigen::Map<const Eigen::VectorXd> y(targets.data(),
                                              static_cast<Eigen::Index>(targets.size()));
    const Eigen::MatrixXd full_design = term_design(encoded_rows, candidates);

    auto fit_subset = [&](const std::vector<std::size_t>& cols) {
        Eigen::MatrixXd design(full_design.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            design.col(static_cast<Eigen::Index>(c)) =
                full_design.col(static_cast<Eigen::Index>(cols[c]));
        }
        return fit_ols_eigen(design, y);
    };

    // Included candidate indices; intercept pinned at the front when present.
    std::vector<std::size_t> included;
    std::vector<bool> in_model(candidates.size(), false);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (candidates[k].is_intercept()) {
            included.push_back(k);
            in_model[k] = true;
            break;
        }
    }
    if (included.empty()) {
        throw std::invalid_argument("candidate terms must include the intercept");
    }

    OlsFit current = fit_subset(included);
    std::set<std::vector<std::size_t>> visited;
    visited.insert(included);

    while (true) {
        // Forward selection: largest R^2 gain, ties to the earliest candidate.
        std::size_t best = candidates.size();
        double best_gain = 0.0;
        OlsFit best_fit;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            if (in_model[k]) continue;
            auto trial_cols = included;
            trial_cols.push_back(k);
            OlsFit trial = fit_subset(trial_cols);
            const double gain = trial.r_squared - current.r_squared;
            if (gain > best_gain + 0.0) {
                best = k;
                best_gain = gain;
                best_fit = std::move(trial);
            }
        }
        if (best == candidates.size() || best_gain < params.fs_epsilon) break;

        included.push_back(best);
        in_model[best] = true;
        current = std::move(best_fit);

        // Backward elimination: drop the least significant term, refit, repeat.
        while (true) {
            std::size_t worst_pos = included.size();
            double worst_p = params.be_alpha;
            for (std::size_t pos = 0; pos < included.size(); ++pos) {
                if (candidates[included[pos]].is_intercept()) continue;
                const double p = coefficient_p_value(current, pos);
                if (p > worst_p) {
                    worst_p = p;
                    worst_pos = pos;
                }
            }
            if (worst_pos == included.size()) break;
            in_model[included[worst_pos]] = false;
            included.erase(included.begin() + static_cast<std::ptrdiff_t>(worst_pos));
            current = fit_subset(included);
        }

        // FS re-adding what BE just removed would cycle forever; stop at the
        // first repeated state.
        auto sorted = included;
        std::sort(sorted.begin(), sorted.end());
        if (!visited.insert(sorted).second) break;
    }

    std::vector<Term> terms;
    terms.reserve(included.size());
    for (const std::size_t k : included) terms.push_back(candidates[k]);
    LinearTermModel model(std::move(terms), current.coefficients, current.r_squared);
    return prune_small_coefficients(model);
}

LinearTermModel stepwise_fit(const MeasurementDataset& dataset, Metric metric,
                             const StepwiseParams& params) {
    const auto table = dataset.training_table(metric);
    const auto candidates = candidate_terms(dataset.space().dimension());
    return stepwise_fit(table.rows, table.targets, candidates, params);
}

LinearTermModel prune_small_coefficients(const LinearTermModel& model) {
    std::vector<Term> terms;
    std::vector<double> coefficients;
    for (std::size_t k = 0; k < model.terms().size(); ++k) {
        const double coef = model.coefficients()[k];
        if (!model.terms()[k].is_intercept() && std::abs(coef) < kCoefficientPruneThreshold) {
            continue;
        }
        terms.push_back(model.terms()[k]);
        coefficients.push_back(coef);
    }
    return LinearTermModel(std::move(terms), std::move(coefficients), model.r_squared());
}

InfluenceSet influential_terms(const LinearTermModel& model) {
    InfluenceSet set;
    for (const Term& term : model.terms()) {
        switch (term.kind) {
        case Term::Kind::intercept:
            break;
        case Term::Kind::main:
        case Term::Kind::quadratic:
            set.options.insert(term.i);
            break;
        case Term::Kind::interaction:
            set.options.insert(term.i);
            set.options.insert(term.j);
            set.pairs.insert({term.i, term.j});
            break;
        }
    }
    return set;
}

}  // namespace perftl
