#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace perftl {

/// One tunable option: a named, ordered set of discrete numeric levels.
struct OptionSpec {
    std::string name;
    std::string unit;
    std::vector<double> levels;  // strictly increasing, non-empty

    std::size_t level_count() const { return levels.size(); }
    // Lower median; the pin point used when an option is held fixed.
    std::size_t median_index() const { return (levels.size() - 1) / 2; }
};

/// A point in a configuration space: one level index per option.
struct Configuration {
    std::vector<std::size_t> level_indices;

    bool operator==(const Configuration&) const = default;
};

/// The discrete option grid. Immutable after construction; construction
/// validates all invariants (non-empty, unique names, increasing levels).
class ConfigurationSpace {
public:
    explicit ConfigurationSpace(std::vector<OptionSpec> options);

    const std::vector<OptionSpec>& options() const { return options_; }
    const OptionSpec& option(std::size_t i) const { return options_.at(i); }
    std::size_t dimension() const { return options_.size(); }
    std::uint64_t cardinality() const { return cardinality_; }

    bool valid(const Configuration& config) const;
    void require_valid(const Configuration& config) const;

    /// Lexicographic rank of a configuration (option 0 most significant).
    std::uint64_t rank_of(const Configuration& config) const;
    Configuration configuration_at(std::uint64_t rank) const;

    /// Min-max encoding to [0,1]^d; single-level options map to 0.
    std::vector<double> encode(const Configuration& config) const;
    void encode_into(const Configuration& config, std::span<double> out) const;

    /// Index of the named option, or throws.
    std::size_t option_index(const std::string& name) const;

private:
    std::vector<OptionSpec> options_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t cardinality_ = 0;
};

/// All configurations in lexicographic level-index order.
std::vector<Configuration> enumerate(const ConfigurationSpace& space);

/// Sample count for a budget fraction: ceil(fraction * cardinality), >= 1.
std::uint64_t budget(const ConfigurationSpace& space, double fraction);

/// Space definition file: {"options":[{"name","unit","levels":[...]}, ...]}.
/// Declaration order is normative; it fixes feature-vector component order.
std::shared_ptr<const ConfigurationSpace> load_space(const std::string& path);
void save_space(const ConfigurationSpace& space, const std::string& path);

}  // namespace perftl
