#include "perftl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "perftl/text.hpp"

namespace perftl {

namespace {

std::size_t metric_slot(Metric m) { return m == Metric::inference_time ? 0 : 1; }

// (rank, metric, replicate) key for the uniqueness invariant.
struct TripleKey {
    std::uint64_t rank;
    std::uint8_t metric;
    std::uint32_t replicate;

    bool operator<(const TripleKey& o) const {
        return std::tie(rank, metric, replicate) < std::tie(o.rank, o.metric, o.replicate);
    }
};

}  // namespace

std::string metric_name(Metric m) {
    return m == Metric::inference_time ? "inference_time" : "energy";
}

Metric parse_metric(const std::string& name) {
    if (name == "inference_time") return Metric::inference_time;
    if (name == "energy") return Metric::energy;
    throw std::runtime_error("unknown metric: '" + name + "' (expected inference_time or energy)");
}

MeasurementDataset::MeasurementDataset(EnvironmentId env,
                                       std::shared_ptr<const ConfigurationSpace> space,
                                       std::vector<MeasurementRecord> records)
    : env_(std::move(env)), space_(std::move(space)), records_(std::move(records)) {
    if (!space_) throw std::invalid_argument("dataset requires a configuration space");
    if (env_.hardware.empty() || env_.model.empty() || env_.workload.empty()) {
        throw std::invalid_argument("environment labels must be non-empty");
    }
    std::set<TripleKey> seen;
    for (const auto& rec : records_) {
        space_->require_valid(rec.config);
        if (!std::isfinite(rec.value) || rec.value <= 0.0) {
            throw std::invalid_argument("non-positive metric value " + format_double(rec.value));
        }
        const std::uint64_t rank = space_->rank_of(rec.config);
        if (!seen.insert({rank, static_cast<std::uint8_t>(metric_slot(rec.metric)), rec.replicate})
                 .second) {
            throw std::invalid_argument("duplicate (configuration, metric, replicate) record");
        }
        auto& agg = aggregates_[metric_slot(rec.metric)][rank];
        agg.sum += rec.value;
        agg.count += 1;
    }
}

std::vector<std::uint64_t> MeasurementDataset::distinct_ranks(Metric metric) const {
    const auto& map = aggregates_[metric_slot(metric)];
    std::vector<std::uint64_t> ranks;
    ranks.reserve(map.size());
    for (const auto& [rank, agg] : map) ranks.push_back(rank);
    std::sort(ranks.begin(), ranks.end());
    return ranks;
}

std::size_t MeasurementDataset::distinct_config_count() const {
    std::set<std::uint64_t> ranks;
    for (const auto& rec : records_) ranks.insert(space_->rank_of(rec.config));
    return ranks.size();
}

bool MeasurementDataset::has(const Configuration& config, Metric metric) const {
    if (!space_->valid(config)) return false;
    const auto& map = aggregates_[metric_slot(metric)];
    return map.find(space_->rank_of(config)) != map.end();
}

double MeasurementDataset::mean_value(const Configuration& config, Metric metric) const {
    return mean_value(space_->rank_of(config), metric);
}

double MeasurementDataset::mean_value(std::uint64_t rank, Metric metric) const {
    const auto& map = aggregates_[metric_slot(metric)];
    const auto it = map.find(rank);
    if (it == map.end()) {
        throw std::runtime_error("unmeasured configuration (rank " + std::to_string(rank) + ")");
    }
    return it->second.sum / static_cast<double>(it->second.count);
}

MeasurementDataset::TrainingTable MeasurementDataset::training_table(Metric metric) const {
    TrainingTable table;
    table.ranks = distinct_ranks(metric);
    table.rows.reserve(table.ranks.size());
    table.targets.reserve(table.ranks.size());
    for (const std::uint64_t rank : table.ranks) {
        table.rows.push_back(space_->encode(space_->configuration_at(rank)));
        table.targets.push_back(mean_value(rank, metric));
    }
    return table;
}

MeasurementDataset load_csv(const std::string& path,
                            std::shared_ptr<const ConfigurationSpace> space) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
    const auto header = split_csv_line(line);

    const std::size_t dim = space->dimension();
    const std::vector<std::string> fixed = {"metric",       "value",     "replicate",
                                            "env_hardware", "env_model", "env_workload"};
    if (header.size() != dim + fixed.size()) {
        throw std::runtime_error(path + ": header has " + std::to_string(header.size()) +
                                 " columns, expected " + std::to_string(dim + fixed.size()));
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (header[i] != space->option(i).name) {
            throw std::runtime_error(path + ": unknown option column '" + header[i] +
                                     "' (expected '" + space->option(i).name + "')");
        }
    }
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (header[dim + i] != fixed[i]) {
            throw std::runtime_error(path + ": column " + std::to_string(dim + i + 1) +
                                     " must be '" + fixed[i] + "', got '" + header[dim + i] + "'");
        }
    }

    std::vector<MeasurementRecord> records;
    std::optional<EnvironmentId> env;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        MeasurementRecord rec;
        rec.config.level_indices.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double raw = parse_double(fields[i]);
            const auto& levels = space->option(i).levels;
            const auto it = std::find(levels.begin(), levels.end(), raw);
            if (it == levels.end()) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": off-domain value " + fields[i] + " for option '" +
                                         space->option(i).name + "'");
            }
            rec.config.level_indices[i] = static_cast<std::size_t>(it - levels.begin());
        }
        rec.metric = parse_metric(fields[dim]);
        rec.value = parse_double(fields[dim + 1]);
        if (!std::isfinite(rec.value) || rec.value <= 0.0) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": non-positive metric value " + fields[dim + 1]);
        }
        const double rep = parse_double(fields[dim + 2]);
        if (rep < 0 || rep != std::floor(rep)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": replicate must be a non-negative integer");
        }
        rec.replicate = static_cast<std::uint32_t>(rep);
        EnvironmentId row_env{fields[dim + 3], fields[dim + 4], fields[dim + 5]};
        if (!env) {
            env = row_env;
        } else if (!(*env == row_env)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": mixed environments in one dataset file");
        }
        records.push_back(std::move(rec));
    }
    if (!env) throw std::runtime_error(path + ": dataset has no records");
    return MeasurementDataset(*env, std::move(space), std::move(records));
}

void save_csv(const MeasurementDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    const auto& space = dataset.space();
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        out << space.option(i).name << ',';
    }
    out << "metric,value,replicate,env_hardware,env_model,env_workload\n";
    const auto& env = dataset.env();
    for (const auto& rec : dataset.records()) {
        for (std::size_t i = 0; i < space.dimension(); ++i) {
            out << format_double(space.option(i).levels[rec.config.level_indices[i]]) << ',';
        }
        out << metric_name(rec.metric) << ',' << format_double(rec.value) << ',' << rec.replicate
            << ',' << env.hardware << ',' << env.model << ',' << env.workload << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Configuration> random_sample(const ConfigurationSpace& space, std::uint64_t n,
                                         std::uint64_t seed) {
    if (n < 1 || n > space.cardinality()) {
        throw std::invalid_argument("sample size must be in [1, cardinality]");
    }
    Rng rng(seed);
    std::vector<Configuration> configs;
    configs.reserve(n);
    for (const std::uint64_t rank : sample_without_replacement(space.cardinality(), n, rng)) {
        configs.push_back(space.configuration_at(rank));
    }
    return configs;
}

SplitResult split(const MeasurementDataset& dataset, std::size_t test_count, std::uint64_t seed) {
    std::set<std::uint64_t> all_ranks;
    for (const auto& rec : dataset.records()) {
        all_ranks.insert(dataset.space().rank_of(rec.config));
    }
    if (test_count < 1 || test_count >= all_ranks.size()) {
        throw std::invalid_argument("test_count must be in [1, distinct configurations)");
    }
    const std::vector<std::uint64_t> ordered(all_ranks.begin(), all_ranks.end());
    Rng rng(seed);
    std::unordered_set<std::uint64_t> test_ranks;
    for (const std::uint64_t pos :
         sample_without_replacement(ordered.size(), test_count, rng)) {
        test_ranks.insert(ordered[pos]);
    }
    std::vector<MeasurementRecord> train_records;
    std::vector<MeasurementRecord> test_records;
    for (const auto& rec : dataset.records()) {
        const std::uint64_t rank = dataset.space().rank_of(rec.config);
        (test_ranks.count(rank) ? test_records : train_records).push_back(rec);
    }
    return SplitResult{
        MeasurementDataset(dataset.env(), dataset.space_ptr(), std::move(train_records)),
        MeasurementDataset(dataset.env(), dataset.space_ptr(), std::move(test_records))};
}

TargetOracle::TargetOracle(const MeasurementDataset& dataset,
                           std::optional<std::uint64_t> budget_limit)
    : dataset_(dataset), budget_limit_(budget_limit) {
    domains_[0] = dataset.distinct_ranks(Metric::inference_time);
    domains_[1] = dataset.distinct_ranks(Metric::energy);
}

double TargetOracle::value(const Configuration& config, Metric metric) {
    const double result = dataset_.mean_value(config, metric);  // throws if unmeasured
    const std::uint64_t rank = dataset_.space().rank_of(config);
    std::lock_guard<std::mutex> lock(mutex_);
    if (queried_.find(rank) == queried_.end()) {
        if (budget_limit_ && queried_.size() >= *budget_limit_) {
            throw std::runtime_error("evaluation budget exceeded (limit " +
                                     std::to_string(*budget_limit_) + ")");
        }
        queried_.insert(rank);
    }
    return result;
}

bool TargetOracle::available(const Configuration& config, Metric metric) const {
    return dataset_.has(config, metric);
}

const std::vector<std::uint64_t>& TargetOracle::domain(Metric metric) const {
    return domains_[metric_slot(metric)];
}

std::uint64_t TargetOracle::tally() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return queried_.size();
}

std::vector<std::uint64_t> TargetOracle::queried_ranks() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<std::uint64_t> out(queried_.begin(), queried_.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace perftl
