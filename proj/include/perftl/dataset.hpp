#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "perftl/config_space.hpp"
#include "perftl/rng.hpp"

namespace perftl {

enum class Metric { inference_time, energy };

std::string metric_name(Metric m);
Metric parse_metric(const std::string& name);

/// A fixed deployment context: hardware platform, deployed model, workload.
struct EnvironmentId {
    std::string hardware;
    std::string model;
    std::string workload;

    bool operator==(const EnvironmentId&) const = default;
    std::string to_string() const { return hardware + "/" + model + "/" + workload; }
};

struct MeasurementRecord {
    Configuration config;
    Metric metric = Metric::inference_time;
    double value = 0.0;  // ms or mJ, finite and > 0
    std::uint32_t replicate = 0;
};

/// Measurements of one environment over one configuration space.
/// Immutable after construction; construction validates every record.
class MeasurementDataset {
public:
    MeasurementDataset(EnvironmentId env, std::shared_ptr<const ConfigurationSpace> space,
                       std::vector<MeasurementRecord> records);

    const EnvironmentId& env() const { return env_; }
    const ConfigurationSpace& space() const { return *space_; }
    std::shared_ptr<const ConfigurationSpace> space_ptr() const { return space_; }
    const std::vector<MeasurementRecord>& records() const { return records_; }

    /// Sorted ranks of configurations with at least one record for the metric.
    std::vector<std::uint64_t> distinct_ranks(Metric metric) const;
    std::size_t distinct_config_count() const;

    bool has(const Configuration& config, Metric metric) const;
    /// Mean over replicates; throws "unmeasured configuration" if absent.
    double mean_value(const Configuration& config, Metric metric) const;
    double mean_value(std::uint64_t rank, Metric metric) const;

    /// Per-config replicate means in ascending rank order, encoded features
    /// plus targets — the canonical learner input for this dataset.
    struct TrainingTable {
        std::vector<std::uint64_t> ranks;
        std::vector<std::vector<double>> rows;  // encoded configurations
        std::vector<double> targets;            // replicate means
    };
    TrainingTable training_table(Metric metric) const;

private:
    struct Aggregate {
        double sum = 0.0;
        std::uint64_t count = 0;
    };

    EnvironmentId env_;
    std::shared_ptr<const ConfigurationSpace> space_;
    std::vector<MeasurementRecord> records_;
    // metric index -> config rank -> replicate aggregate
    std::unordered_map<std::uint64_t, Aggregate> aggregates_[2];
};

/// CSV ingestion. Schema: one column per option (declaration order), then
/// metric,value,replicate,env_hardware,env_model,env_workload.
MeasurementDataset load_csv(const std::string& path,
                            std::shared_ptr<const ConfigurationSpace> space);
void save_csv(const MeasurementDataset& dataset, const std::string& path);

/// n distinct configurations, uniform without replacement, reproducible.
std::vector<Configuration> random_sample(const ConfigurationSpace& space, std::uint64_t n,
                                         std::uint64_t seed);

struct SplitResult {
    MeasurementDataset train;
    MeasurementDataset test;
};

/// Disjoint-by-configuration split; test gets `test_count` distinct configs.
SplitResult split(const MeasurementDataset& dataset, std::size_t test_count, std::uint64_t seed);

/// Budget-metered lookup into a target environment's measurements. Every
/// distinct configuration queried counts once against the evaluation tally,
/// mirroring the cost model where a measured configuration is reusable.
/// Thread-safe.
class TargetOracle {
public:
    explicit TargetOracle(const MeasurementDataset& dataset,
                          std::optional<std::uint64_t> budget_limit = std::nullopt);

    /// Replicate mean for (config, metric). Counts the configuration if not
    /// seen before; throws if unmeasured or if counting would exceed budget.
    double value(const Configuration& config, Metric metric);

    /// Membership probe; never counts.
    bool available(const Configuration& config, Metric metric) const;

    /// Sorted ranks measurable for the metric. Sampling universes come from
    /// here so held-out configurations are never reachable.
    const std::vector<std::uint64_t>& domain(Metric metric) const;

    std::uint64_t tally() const;
    std::vector<std::uint64_t> queried_ranks() const;  // sorted snapshot
    std::optional<std::uint64_t> budget_limit() const { return budget_limit_; }

    const MeasurementDataset& dataset() const { return dataset_; }

private:
    const MeasurementDataset& dataset_;
    std::optional<std::uint64_t> budget_limit_;
    std::vector<std::uint64_t> domains_[2];
    mutable std::mutex mutex_;
    std::unordered_set<std::uint64_t> queried_;
};

}  // namespace perftl
