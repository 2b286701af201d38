#include "perftl/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "perftl/rng.hpp"

namespace perftl {

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double sse_reduction = 0.0;
};

struct Builder {
    const std::vector<std::vector<double>>& rows;
    const std::vector<double>& targets;
    TreeParams params;
    // Empty subset means "consider every feature" (plain CART).
    std::function<std::vector<std::size_t>(Rng&)> feature_sampler;
    Rng* rng = nullptr;
    std::vector<RegressionTreeModel::Node> nodes;

    // Scratch: (value, target) pairs for the per-feature scan.
    std::vector<std::pair<double, double>> scan;

    int build(std::vector<std::size_t>& indices, int depth) {
        const std::size_t n = indices.size();
        double sum = 0.0, sum_sq = 0.0;
        for (const std::size_t idx : indices) {
            sum += targets[idx];
            sum_sq += targets[idx] * targets[idx];
        }
        const double mean = sum / static_cast<double>(n);
        const double node_sse = sum_sq - sum * sum / static_cast<double>(n);

        const bool can_split = depth < params.max_depth &&
                               n >= 2 * static_cast<std::size_t>(params.min_leaf) &&
                               node_sse > 1e-12 * (1.0 + sum_sq);
        SplitChoice choice;
        if (can_split) {
            std::vector<std::size_t> features;
            if (feature_sampler) {
                features = feature_sampler(*rng);
            } else {
                features.resize(rows.front().size());
                std::iota(features.begin(), features.end(), 0);
            }
            choice = best_split(indices, features, node_sse);
        }
        if (!choice.found) {
            nodes.push_back({-1, 0.0, -1, -1, mean});
            return static_cast<int>(nodes.size()) - 1;
        }

        std::vector<std::size_t> left, right;
        left.reserve(n);
        right.reserve(n);
        for (const std::size_t idx : indices) {
            (rows[idx][choice.feature] <= choice.threshold ? left : right).push_back(idx);
        }
        const int node_index = static_cast<int>(nodes.size());
        nodes.push_back({static_cast<int>(choice.feature), choice.threshold, -1, -1, mean});
        indices.clear();
        indices.shrink_to_fit();
        const int left_child = build(left, depth + 1);
        const int right_child = build(right, depth + 1);
        nodes[static_cast<std::size_t>(node_index)].left = left_child;
        nodes[static_cast<std::size_t>(node_index)].right = right_child;
        return node_index;
    }

    SplitChoice best_split(const std::vector<std::size_t>& indices,
                           const std::vector<std::size_t>& features, double node_sse) {
        const std::size_t min_leaf = static_cast<std::size_t>(params.min_leaf);
        SplitChoice best;
        for (const std::size_t f : features) {
            scan.clear();
            scan.reserve(indices.size());
            for (const std::size_t idx : indices) {
                scan.emplace_back(rows[idx][f], targets[idx]);
            }
            std::sort(scan.begin(), scan.end());
            double left_sum = 0.0;
            double left_sq = 0.0;
            double total_sum = 0.0;
            double total_sq = 0.0;
            for (const auto& [value, target] : scan) {
                total_sum += target;
                total_sq += target * target;
            }
            for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
                left_sum += scan[k].second;
                left_sq += scan[k].second * scan[k].second;
                if (scan[k].first == scan[k + 1].first) continue;  // no boundary here
                const std::size_t left_n = k + 1;
                const std::size_t right_n = scan.size() - left_n;
                if (left_n < min_leaf || right_n < min_leaf) continue;
                const double right_sum = total_sum - left_sum;
                const double right_sq = total_sq - left_sq;
                const double left_sse =
                    left_sq - left_sum * left_sum / static_cast<double>(left_n);
                const double right_sse =
                    right_sq - right_sum * right_sum / static_cast<double>(right_n);
                const double reduction = node_sse - left_sse - right_sse;
                const double threshold = std::midpoint(scan[k].first, scan[k + 1].first);
                // Strictly-better keeps the lowest feature, then lowest
                // threshold, since features ascend and thresholds ascend
                // within a feature.
                if (reduction > best.sse_reduction &&
                    reduction > 1e-12 * (1.0 + std::abs(node_sse))) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = threshold;
                    best.sse_reduction = reduction;
                }
            }
        }
        (void)n;
        return best;
    }
};

}  // namespace

RegressionTreeModel::RegressionTreeModel(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("tree needs at least one node");
}

double RegressionTreeModel::predict_encoded(std::span<const double> features) const {
    std::size_t at = 0;
    while (!nodes_[at].is_leaf()) {
        const auto& node = nodes_[at];
        if (static_cast<std::size_t>(node.feature) >= features.size()) {
            throw std::invalid_argument("dimension mismatch in tree prediction");
        }
        at = static_cast<std::size_t>(features[static_cast<std::size_t>(node.feature)] <=
                                              node.threshold
                                          ? node.left
                                          : node.right);
    }
    return nodes_[at].value;
}

std::size_t RegressionTreeModel::leaf_count() const {
    std::size_t count = 0;
    for (const auto& node : nodes_) count += node.is_leaf() ? 1 : 0;
    return count;
}

int RegressionTreeModel::depth() const {
    // Iterative depth over the explicit child links.
    std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
    int max_depth = 0;
    while (!stack.empty()) {
        const auto [at, d] = stack.back();
        stack.pop_back();
        max_depth = std::max(max_depth, d);
        const auto& node = nodes_[at];
        if (!node.is_leaf()) {
            stack.push_back({static_cast<std::size_t>(node.left), d + 1});
            stack.push_back({static_cast<std::size_t>(node.right), d + 1});
        }
    }
    return max_depth;
}

RegressionTreeModel fit_tree(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& targets, const TreeParams& params) {
    if (rows.empty()) throw std::invalid_argument("empty training set");
    if (rows.size() != targets.size()) throw std::invalid_argument("rows/targets size mismatch");
    if (params.min_leaf < 1) throw std::invalid_argument("min_leaf must be >= 1");
    if (rows.size() < static_cast<std::size_t>(params.min_leaf)) {
        throw std::invalid_argument("fewer rows than min_leaf");
    }
    Builder builder{rows, targets, params, nullptr, nullptr, {}, {}};
    std::vector<std::size_t> indices(rows.size());
    std::iota(indices.begin(), indices.end(), 0);
    builder.build(indices, 0);
    return RegressionTreeModel(std::move(builder.nodes));
}

RandomForestModel::RandomForestModel(std::vector<RegressionTreeModel> trees)
    : trees_(std::move(trees)) {
    if (trees_.empty()) throw std::invalid_argument("forest needs at least one tree");
}

double RandomForestModel::predict_encoded(std::span<const double> features) const {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict_encoded(features);
    return sum / static_cast<double>(trees_.size());
}

RandomForestModel fit_forest(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& targets, const ForestParams& params,
                             std::uint64_t seed) {
    if (rows.empty()) throw std::invalid_argument("empty training set");
    if (rows.size() != targets.size()) throw std::invalid_argument("rows/targets size mismatch");
    if (params.n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");

    const std::size_t dim = rows.front().size();
    std::size_t per_split = params.features_per_split > 0
                                ? static_cast<std::size_t>(params.features_per_split)
                                : (dim + 2) / 3;  // ceil(d / 3)
    per_split = std::min(per_split, dim);

    std::vector<RegressionTreeModel> trees;
    trees.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        Rng tree_rng(Rng::mix(seed, static_cast<std::uint64_t>(t)));

        std::vector<std::vector<double>> sample_rows;
        std::vector<double> sample_targets;
        if (params.bootstrap) {
            sample_rows.reserve(rows.size());
            sample_targets.reserve(rows.size());
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const auto pick =
                    static_cast<std::size_t>(tree_rng.uniform_index(rows.size()));
                sample_rows.push_back(rows[pick]);
                sample_targets.push_back(targets[pick]);
            }
        } else {
            sample_rows = rows;
            sample_targets = targets;
        }

        Builder builder{sample_rows, sample_targets, params.tree, nullptr, &tree_rng, {}, {}};
        if (per_split < dim) {
            builder.feature_sampler = [dim, per_split](Rng& rng) {
                auto subset = sample_without_replacement(dim, per_split, rng);
                std::sort(subset.begin(), subset.end());
                return std::vector<std::size_t>(subset.begin(), subset.end());
            };
        }
        std::vector<std::size_t> indices(sample_rows.size());
        std::iota(indices.begin(), indices.end(), 0);
        builder.build(indices, 0);
        trees.emplace_back(std::move(builder.nodes));
    }
    return RandomForestModel(std::move(trees));
}

}  // namespace perftl
