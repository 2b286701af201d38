#include "perftl/rng.hpp"

#include <unordered_map>

namespace perftl {

std::vector<std::uint64_t> sample_without_replacement(std::uint64_t universe, std::uint64_t n,
                                                      Rng& rng) {
    if (n > universe) {
        throw std::invalid_argument("sample size exceeds universe size");
    }
    std::unordered_map<std::uint64_t, std::uint64_t> moved;
    auto slot = [&moved](std::uint64_t i) {
        const auto it = moved.find(i);
        return it == moved.end() ? i : it->second;
    };
    std::vector<std::uint64_t> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t j = i + rng.uniform_index(universe - i);
        out.push_back(slot(j));
        moved[j] = slot(i);
    }
    return out;
}

}  // namespace perftl
