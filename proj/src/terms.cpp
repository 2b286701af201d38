#include "perftl/terms.hpp"

#include <stdexcept>

#include "perftl/config_space.hpp"

namespace perftl {

double Term::value(std::span<const double> x) const {
    switch (kind) {
    case Kind::intercept:
        return 1.0;
    case Kind::main:
        return x[static_cast<std::size_t>(i)];
    case Kind::quadratic: {
        const double v = x[static_cast<std::size_t>(i)];
        return v * v;
    }
    case Kind::interaction:
        return x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    }
    throw std::logic_error("unreachable term kind");
}

std::string Term::to_string() const {
    switch (kind) {
    case Kind::intercept:
        return "1";
    case Kind::main:
        return "x" + std::to_string(i);
    case Kind::quadratic:
        return "x" + std::to_string(i) + "^2";
    case Kind::interaction:
        return "x" + std::to_string(i) + "*x" + std::to_string(j);
    }
    return "?";
}

std::string Term::to_string(const ConfigurationSpace& space) const {
    switch (kind) {
    case Kind::intercept:
        return "1";
    case Kind::main:
        return space.option(static_cast<std::size_t>(i)).name;
    case Kind::quadratic:
        return space.option(static_cast<std::size_t>(i)).name + "^2";
    case Kind::interaction:
        return space.option(static_cast<std::size_t>(i)).name + "*" +
               space.option(static_cast<std::size_t>(j)).name;
    }
    return "?";
}

std::vector<Term> candidate_terms(std::size_t dimension) {
    std::vector<Term> terms;
    terms.push_back(Term::make_intercept());
    for (std::size_t i = 0; i < dimension; ++i) {
        terms.push_back(Term::make_main(static_cast<int>(i)));
    }
    for (std::size_t i = 0; i < dimension; ++i) {
        terms.push_back(Term::make_quadratic(static_cast<int>(i)));
    }
    for (std::size_t i = 0; i < dimension; ++i) {
        for (std::size_t j = i + 1; j < dimension; ++j) {
            terms.push_back(Term::make_interaction(static_cast<int>(i), static_cast<int>(j)));
        }
    }
    return terms;
}

std::string InfluenceSet::to_string() const {
    std::string out = "options {";
    bool first = true;
    for (int o : options) {
        if (!first) out += ", ";
        out += "x" + std::to_string(o);
        first = false;
    }
    out += "} interactions {";
    first = true;
    for (const auto& [a, b] : pairs) {
        if (!first) out += ", ";
        out += "x" + std::to_string(a) + "*x" + std::to_string(b);
        first = false;
    }
    out += "}";
    return out;
}

std::string InfluenceSet::to_string(const ConfigurationSpace& space) const {
    std::string out = "options {";
    bool first = true;
    for (int o : options) {
        if (!first) out += ", ";
        out += space.option(static_cast<std::size_t>(o)).name;
        first = false;
    }
    out += "} interactions {";
    first = true;
    for (const auto& [a, b] : pairs) {
        if (!first) out += ", ";
        out += space.option(static_cast<std::size_t>(a)).name + "*" +
               space.option(static_cast<std::size_t>(b)).name;
        first = false;
    }
    out += "}";
    return out;
}

}  // namespace perftl
