#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "loe/features.hpp"
#include "loe/label.hpp"

namespace loe {

struct ForestParams {
    std::size_t trees = 200;
    /// 0 = grow until pure.
    std::size_t max_depth = 0;
    /// 0 = floor(sqrt(feature count)), at least 1.
    std::size_t features_per_split = 0;
    std::size_t min_samples_split = 2;
    bool bootstrap = true;
    std::uint64_t seed = 0;
    /// 0 = std::thread::hardware_concurrency().
    std::size_t threads = 0;
};

/// CART classification tree with Gini splits on dense feature rows.
/// Samples with x[feature] <= threshold go left.
class DecisionTree {
public:
    struct Node {
        std::int32_t feature = -1;  // -1 = leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        BandArray distribution{};  // class frequencies of the node's samples, sums to 1
    };

    DecisionTree() = default;
    explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    const BandArray& leaf_distribution(const SparseVector& x) const;
    const BandArray& root_distribution() const { return nodes_.front().distribution; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t depth() const;

private:
    std::vector<Node> nodes_;
};

class ForestModel {
public:
    ForestModel() = default;
    ForestModel(std::vector<DecisionTree> trees, std::size_t feature_count, ForestParams params)
        : trees_(std::move(trees)), feature_count_(feature_count), params_(params) {}

    /// Mean of leaf distributions across trees. An empty vector is answered
    /// from the trees' root distributions.
    BandArray predict_proba(const SparseVector& x) const;

    const std::vector<DecisionTree>& trees() const { return trees_; }
    std::size_t feature_count() const { return feature_count_; }
    const ForestParams& params() const { return params_; }

    nlohmann::json to_json() const;
    static ForestModel from_json(const nlohmann::json& j);

private:
    std::vector<DecisionTree> trees_;
    std::size_t feature_count_ = 0;
    ForestParams params_;
};

/// Bagged Gini trees. Each tree draws its bootstrap sample and feature
/// subsets from its own generator seeded by (params.seed, tree index), so
/// the result does not depend on the thread count. Throws InvalidArgument
/// unless at least two classes are present.
ForestModel train_forest(std::span<const SparseVector> rows, std::span<const LoELabel> labels,
                         std::size_t feature_count, const ForestParams& params);

}  // namespace loe
