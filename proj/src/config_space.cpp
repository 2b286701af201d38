#include "perftl/config_space.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace perftl {

ConfigurationSpace::ConfigurationSpace(std::vector<OptionSpec> options)
    : options_(std::move(options)) {
    if (options_.empty()) {
        throw std::invalid_argument("configuration space needs at least one option");
    }
    std::unordered_set<std::string> names;
    for (const auto& opt : options_) {
        if (opt.name.empty()) {
            throw std::invalid_argument("option name must be non-empty");
        }
        if (!names.insert(opt.name).second) {
            throw std::invalid_argument("duplicate option name: " + opt.name);
        }
        if (opt.levels.empty()) {
            throw std::invalid_argument("option " + opt.name + " has no levels");
        }
        for (std::size_t i = 0; i + 1 < opt.levels.size(); ++i) {
            if (!(opt.levels[i] < opt.levels[i + 1])) {
                throw std::invalid_argument("levels of option " + opt.name +
                                            " must be strictly increasing");
            }
        }
        for (double v : opt.levels) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("levels of option " + opt.name + " must be finite");
            }
        }
    }
    // Row-major strides: option 0 is the most significant digit.
    strides_.assign(options_.size(), 1);
    cardinality_ = 1;
    for (std::size_t i = options_.size(); i-- > 0;) {
        strides_[i] = cardinality_;
        const std::uint64_t count = options_[i].levels.size();
        if (cardinality_ > std::numeric_limits<std::uint64_t>::max() / count) {
            throw std::invalid_argument("configuration space cardinality overflows");
        }
        cardinality_ *= count;
    }
}

bool ConfigurationSpace::valid(const Configuration& config) const {
    if (config.level_indices.size() != options_.size()) return false;
    for (std::size_t i = 0; i < options_.size(); ++i) {
        if (config.level_indices[i] >= options_[i].levels.size()) return false;
    }
    return true;
}

void ConfigurationSpace::require_valid(const Configuration& config) const {
    if (config.level_indices.size() != options_.size()) {
        throw std::invalid_argument("dimension mismatch: configuration has " +
                                    std::to_string(config.level_indices.size()) +
                                    " indices, space has " + std::to_string(options_.size()) +
                                    " options");
    }
    for (std::size_t i = 0; i < options_.size(); ++i) {
        if (config.level_indices[i] >= options_[i].levels.size()) {
            throw std::invalid_argument("level index out of range for option " + options_[i].name);
        }
    }
}

std::uint64_t ConfigurationSpace::rank_of(const Configuration& config) const {
    require_valid(config);
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < options_.size(); ++i) {
        rank += config.level_indices[i] * strides_[i];
    }
    return rank;
}

Configuration ConfigurationSpace::configuration_at(std::uint64_t rank) const {
    if (rank >= cardinality_) {
        throw std::out_of_range("configuration rank out of range");
    }
    Configuration config;
    config.level_indices.resize(options_.size());
    for (std::size_t i = 0; i < options_.size(); ++i) {
        config.level_indices[i] = rank / strides_[i];
        rank %= strides_[i];
    }
    return config;
}

std::vector<double> ConfigurationSpace::encode(const Configuration& config) const {
    std::vector<double> out(options_.size());
    encode_into(config, out);
    return out;
}

void ConfigurationSpace::encode_into(const Configuration& config, std::span<double> out) const {
    require_valid(config);
    if (out.size() != options_.size()) {
        throw std::invalid_argument("dimension mismatch in encode output");
    }
    for (std::size_t i = 0; i < options_.size(); ++i) {
        const std::size_t count = options_[i].levels.size();
        out[i] = count == 1 ? 0.0
                            : static_cast<double>(config.level_indices[i]) /
                                  static_cast<double>(count - 1);
    }
}

std::size_t ConfigurationSpace::option_index(const std::string& name) const {
    for (std::size_t i = 0; i < options_.size(); ++i) {
        if (options_[i].name == name) return i;
    }
    throw std::invalid_argument("unknown option: " + name);
}

std::vector<Configuration> enumerate(const ConfigurationSpace& space) {
    std::vector<Configuration> all;
    all.reserve(space.cardinality());
    Configuration config;
    config.level_indices.assign(space.dimension(), 0);
    while (true) {
        all.push_back(config);
        // Odometer increment, least significant digit last.
        std::size_t i = space.dimension();
        while (i > 0) {
            --i;
            if (++config.level_indices[i] < space.option(i).level_count()) break;
            config.level_indices[i] = 0;
            if (i == 0) return all;
        }
    }
}

std::uint64_t budget(const ConfigurationSpace& space, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw std::invalid_argument("budget fraction must be in (0, 1]");
    }
    const double raw = std::ceil(fraction * static_cast<double>(space.cardinality()));
    const auto count = static_cast<std::uint64_t>(raw);
    return count < 1 ? 1 : count;
}

std::shared_ptr<const ConfigurationSpace> load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open space file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("invalid space file " + path + ": " + e.what());
    }
    if (!doc.contains("options") || !doc["options"].is_array()) {
        throw std::runtime_error("space file " + path + " must contain an \"options\" array");
    }
    std::vector<OptionSpec> options;
    for (const auto& item : doc["options"]) {
        OptionSpec opt;
        opt.name = item.at("name").get<std::string>();
        opt.unit = item.value("unit", std::string{});
        opt.levels = item.at("levels").get<std::vector<double>>();
        options.push_back(std::move(opt));
    }
    return std::make_shared<const ConfigurationSpace>(std::move(options));
}

void save_space(const ConfigurationSpace& space, const std::string& path) {
    nlohmann::json doc;
    doc["options"] = nlohmann::json::array();
    for (const auto& opt : space.options()) {
        doc["options"].push_back({{"name", opt.name}, {"unit", opt.unit}, {"levels", opt.levels}});
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write space file: " + path);
    }
    out << doc.dump(2) << '\n';
}

}  // namespace perftl
