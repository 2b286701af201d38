#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "perftl/model.hpp"

namespace perftl {

struct TreeParams {
    int max_depth = 12;
    int min_leaf = 2;
};

/// CART for regression. Internal nodes route feature <= threshold to the
/// left child; leaves predict the mean of the training targets they hold.
class RegressionTreeModel final : public PerformanceModel {
public:
    struct Node {
        int feature = -1;  // < 0 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;

        bool is_leaf() const { return feature < 0; }
    };

    explicit RegressionTreeModel(std::vector<Node> nodes);

    double predict_encoded(std::span<const double> features) const override;
    std::string kind() const override { return "tree"; }

    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t leaf_count() const;
    int depth() const;

private:
    std::vector<Node> nodes_;
};

/// Greedy SSE-reduction splitter over all (feature, adjacent-midpoint)
/// candidates; ties break to the lowest feature index, then lowest threshold.
RegressionTreeModel fit_tree(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& targets, const TreeParams& params);

struct ForestParams {
    int n_trees = 50;
    int features_per_split = 0;  // 0 -> ceil(d / 3)
    bool bootstrap = true;
    TreeParams tree;
};

/// Mean over member trees, each grown on a bootstrap resample with random
/// feature subsets per split.
class RandomForestModel final : public PerformanceModel {
public:
    explicit RandomForestModel(std::vector<RegressionTreeModel> trees);

    double predict_encoded(std::span<const double> features) const override;
    std::string kind() const override { return "forest"; }

    const std::vector<RegressionTreeModel>& trees() const { return trees_; }

private:
    std::vector<RegressionTreeModel> trees_;
};

RandomForestModel fit_forest(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& targets, const ForestParams& params,
                             std::uint64_t seed);

}  // namespace perftl
