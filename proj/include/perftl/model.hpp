#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "perftl/config_space.hpp"

namespace perftl {

/// Uniform prediction interface: encoded configuration -> metric value.
/// Fitted models are immutable and safe to share across threads.
class PerformanceModel {
public:
    virtual ~PerformanceModel() = default;

    virtual double predict_encoded(std::span<const double> features) const = 0;
    virtual std::string kind() const = 0;

    double predict(const Configuration& config, const ConfigurationSpace& space) const;
};

using ModelPtr = std::shared_ptr<const PerformanceModel>;

/// Affine translation of a base model's prediction: beta0 + beta1 * base(x).
class ShiftedModel final : public PerformanceModel {
public:
    ShiftedModel(ModelPtr base, double beta0, double beta1);

    double predict_encoded(std::span<const double> features) const override;
    std::string kind() const override { return "shifted"; }

    const ModelPtr& base() const { return base_; }
    double beta0() const { return beta0_; }
    double beta1() const { return beta1_; }

private:
    ModelPtr base_;
    double beta0_;
    double beta1_;
};

/// Feeds the base model's prediction (a single feature) through a mapper
/// model, e.g. a random forest learned on paired source/target samples.
class PredictionMappedModel final : public PerformanceModel {
public:
    PredictionMappedModel(ModelPtr base, ModelPtr mapper);

    double predict_encoded(std::span<const double> features) const override;
    std::string kind() const override { return "prediction_mapped"; }

    const ModelPtr& base() const { return base_; }
    const ModelPtr& mapper() const { return mapper_; }

private:
    ModelPtr base_;
    ModelPtr mapper_;
};

/// Versioned self-describing serialization; save -> load -> predict is
/// bit-exact for every model kind.
void save_model(const PerformanceModel& model, const std::string& path);
ModelPtr load_model(const std::string& path);

}  // namespace perftl
