#pragma once

#include <compare>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace perftl {

class ConfigurationSpace;

/// One column of a degree-2 polynomial design over encoded features:
/// 1, x_i, x_i^2, or x_i*x_j (i < j).
struct Term {
    enum class Kind { intercept, main, quadratic, interaction };

    Kind kind = Kind::intercept;
    int i = -1;
    int j = -1;  // second option of an interaction, i < j

    static Term make_intercept() { return {Kind::intercept, -1, -1}; }
    static Term make_main(int i) { return {Kind::main, i, -1}; }
    static Term make_quadratic(int i) { return {Kind::quadratic, i, -1}; }
    static Term make_interaction(int a, int b) {
        return a < b ? Term{Kind::interaction, a, b} : Term{Kind::interaction, b, a};
    }

    double value(std::span<const double> x) const;
    bool is_intercept() const { return kind == Kind::intercept; }

    std::string to_string() const;
    std::string to_string(const ConfigurationSpace& space) const;

    auto operator<=>(const Term&) const = default;
};

/// Full candidate set for stepwise screening over a d-dimensional space:
/// intercept, d mains, d quadratics, C(d,2) pairwise interactions.
std::vector<Term> candidate_terms(std::size_t dimension);

/// Options and interaction pairs carrying nonzero influence.
struct InfluenceSet {
    std::set<int> options;
    std::set<std::pair<int, int>> pairs;

    bool empty() const { return options.empty() && pairs.empty(); }
    bool operator==(const InfluenceSet&) const = default;

    std::string to_string() const;
    std::string to_string(const ConfigurationSpace& space) const;
};

}  // namespace perftl
