#include "loe/forest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "loe/error.hpp"
#include "loe/random.hpp"

namespace loe {

using nlohmann::json;

const BandArray& DecisionTree::leaf_distribution(const SparseVector& x) const {
    std::size_t node = 0;
    while (nodes_[node].feature >= 0) {
        const auto& n = nodes_[node];
        node = static_cast<std::size_t>(x.at(static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right);
    }
    return nodes_[node].distribution;
}

std::size_t DecisionTree::depth() const {
    std::function<std::size_t(std::size_t)> rec = [&](std::size_t i) -> std::size_t {
        const auto& n = nodes_[i];
        if (n.feature < 0) return 0;
        return 1 + std::max(rec(static_cast<std::size_t>(n.left)), rec(static_cast<std::size_t>(n.right)));
    };
    return nodes_.empty() ? 0 : rec(0);
}

BandArray ForestModel::predict_proba(const SparseVector& x) const {
    BandArray sum{};
    if (trees_.empty()) return sum;
    for (const auto& tree : trees_) {
        const BandArray& d = x.empty() ? tree.root_distribution() : tree.leaf_distribution(x);
        for (std::size_t c = 0; c < kNumBands; ++c) sum[c] += d[c];
    }
    for (auto& v : sum) v /= static_cast<double>(trees_.size());
    return sum;
}

namespace {

using ClassCounts = std::array<std::size_t, kNumBands>;

double gini(const ClassCounts& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (auto c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& columns, std::span<const LoELabel> labels,
                const ForestParams& params, std::size_t mtry, std::uint64_t seed)
        : columns_(columns), labels_(labels), params_(params), mtry_(mtry), rng_(seed) {}

    DecisionTree build(std::vector<std::size_t> samples) {
        grow(samples, 0);
        return DecisionTree(std::move(nodes_));
    }

private:
    struct Split {
        std::int32_t feature = -1;
        double threshold = 0.0;
        double impurity = 0.0;  // weighted child impurity
    };

    std::int32_t grow(std::vector<std::size_t>& samples, std::size_t depth) {
        ClassCounts counts{};
        for (auto s : samples) ++counts[labels_[s].index()];

        const auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        for (std::size_t c = 0; c < kNumBands; ++c) {
            nodes_.back().distribution[c] = static_cast<double>(counts[c]) / static_cast<double>(samples.size());
        }

        const double parent = gini(counts, samples.size());
        const bool depth_reached = params_.max_depth != 0 && depth >= params_.max_depth;
        if (parent <= 0.0 || depth_reached || samples.size() < params_.min_samples_split) return id;

        const Split split = find_split(samples, counts);
        if (split.feature < 0 || parent - split.impurity <= 1e-12) return id;

        const auto& column = columns_[static_cast<std::size_t>(split.feature)];
        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto s : samples) (column[s] <= split.threshold ? left : right).push_back(s);
        std::vector<std::size_t>().swap(samples);

        const auto l = grow(left, depth + 1);
        const auto r = grow(right, depth + 1);
        auto& node = nodes_[static_cast<std::size_t>(id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    // Visits features in random order until mtry non-constant ones have been
    // evaluated (or features run out).
    Split find_split(const std::vector<std::size_t>& samples, const ClassCounts& totals) {
        std::vector<std::uint32_t> order(columns_.size());
        std::iota(order.begin(), order.end(), 0u);
        Split best;
        best.impurity = std::numeric_limits<double>::infinity();

        std::vector<std::pair<double, std::size_t>> values(samples.size());
        std::size_t evaluated = 0;
        for (std::size_t i = 0; i < order.size() && evaluated < mtry_; ++i) {
            // Partial Fisher-Yates: draw the next feature lazily.
            const std::size_t j = i + uniform_index(rng_, order.size() - i);
            std::swap(order[i], order[j]);
            const auto& column = columns_[order[i]];

            for (std::size_t k = 0; k < samples.size(); ++k) {
                values[k] = {column[samples[k]], labels_[samples[k]].index()};
            }
            std::sort(values.begin(), values.end());
            if (values.front().first == values.back().first) continue;
            ++evaluated;

            ClassCounts left{};
            const std::size_t n = values.size();
            for (std::size_t k = 0; k + 1 < n; ++k) {
                ++left[values[k].second];
                if (values[k].first == values[k + 1].first) continue;
                ClassCounts right{};
                for (std::size_t c = 0; c < kNumBands; ++c) right[c] = totals[c] - left[c];
                const std::size_t nl = k + 1;
                const std::size_t nr = n - nl;
                const double impurity = (static_cast<double>(nl) * gini(left, nl) +
                                         static_cast<double>(nr) * gini(right, nr)) /
                                        static_cast<double>(n);
                if (impurity < best.impurity) {
                    best.feature = static_cast<std::int32_t>(order[i]);
                    best.threshold = 0.5 * (values[k].first + values[k + 1].first);
                    best.impurity = impurity;
                }
            }
        }
        return best;
    }

    const std::vector<std::vector<double>>& columns_;
    std::span<const LoELabel> labels_;
    const ForestParams& params_;
    std::size_t mtry_;
    Rng rng_;
    std::vector<DecisionTree::Node> nodes_;
};

}  // namespace

ForestModel train_forest(std::span<const SparseVector> rows, std::span<const LoELabel> labels,
                         std::size_t feature_count, const ForestParams& params) {
    if (rows.size() != labels.size()) throw InvalidArgument("forest: rows and labels differ in length");
    if (params.trees == 0) throw InvalidArgument("forest: tree count must be >= 1");
    if (feature_count == 0) throw InvalidArgument("forest: no features");
    ClassCounts present{};
    for (auto label : labels) ++present[label.index()];
    const auto classes = std::count_if(present.begin(), present.end(), [](std::size_t c) { return c > 0; });
    if (classes < 2) throw InvalidArgument("forest: training data must contain at least two classes");

    // Column-major dense copy of the (already feature-selected) rows.
    std::vector<std::vector<double>> columns(feature_count, std::vector<double>(rows.size(), 0.0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [idx, w] : rows[i].entries) {
            if (idx >= feature_count) throw InvalidArgument("forest: feature index out of range");
            columns[idx][i] = w;
        }
    }

    const std::size_t mtry = params.features_per_split != 0
                                 ? std::min(params.features_per_split, feature_count)
                                 : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(feature_count))));

    std::vector<DecisionTree> trees(params.trees);
    auto build_one = [&](std::size_t t) {
        Rng sampler(mix_seed(params.seed, 2 * t));
        std::vector<std::size_t> samples(rows.size());
        if (params.bootstrap) {
            for (auto& s : samples) s = uniform_index(sampler, rows.size());
            std::sort(samples.begin(), samples.end());
        } else {
            std::iota(samples.begin(), samples.end(), 0);
        }
        TreeBuilder builder(columns, labels, params, mtry, mix_seed(params.seed, 2 * t + 1));
        trees[t] = builder.build(std::move(samples));
    };

    std::size_t workers = params.threads != 0 ? params.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, params.trees);
    if (workers <= 1) {
        for (std::size_t t = 0; t < params.trees; ++t) build_one(t);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < params.trees; t += workers) build_one(t);
            });
        }
        for (auto& th : pool) th.join();
    }
    return ForestModel(std::move(trees), feature_count, params);
}

json ForestModel::to_json() const {
    json trees = json::array();
    for (const auto& tree : trees_) {
        json nodes = json::array();
        for (const auto& n : tree.nodes()) {
            if (n.feature < 0) {
                nodes.push_back({{"dist", n.distribution}});
            } else {
                nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}, {"dist", n.distribution}});
            }
        }
        trees.push_back(std::move(nodes));
    }
    return {{"feature_count", feature_count_},
            {"params",
             {{"trees", params_.trees},
              {"max_depth", params_.max_depth},
              {"features_per_split", params_.features_per_split},
              {"min_samples_split", params_.min_samples_split},
              {"bootstrap", params_.bootstrap},
              {"seed", params_.seed}}},
            {"trees", std::move(trees)}};
}

ForestModel ForestModel::from_json(const json& j) {
    ForestParams params;
    const auto& p = j.at("params");
    params.trees = p.at("trees").get<std::size_t>();
    params.max_depth = p.at("max_depth").get<std::size_t>();
    params.features_per_split = p.at("features_per_split").get<std::size_t>();
    params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
    params.bootstrap = p.at("bootstrap").get<bool>();
    params.seed = p.at("seed").get<std::uint64_t>();

    std::vector<DecisionTree> trees;
    for (const auto& jt : j.at("trees")) {
        std::vector<DecisionTree::Node> nodes;
        for (const auto& jn : jt) {
            DecisionTree::Node n;
            n.distribution = jn.at("dist").get<BandArray>();
            if (jn.contains("f")) {
                n.feature = jn.at("f").get<std::int32_t>();
                n.threshold = jn.at("t").get<double>();
                n.left = jn.at("l").get<std::int32_t>();
                n.right = jn.at("r").get<std::int32_t>();
                if (n.left < 0 || n.right < 0) throw DataError("forest model: internal node without children");
            }
            nodes.push_back(n);
        }
        if (nodes.empty()) throw DataError("forest model: empty tree");
        for (const auto& n : nodes) {
            if (n.feature >= 0 && (static_cast<std::size_t>(n.left) >= nodes.size() ||
                                   static_cast<std::size_t>(n.right) >= nodes.size())) {
                throw DataError("forest model: child index out of range");
            }
        }
        trees.emplace_back(std::move(nodes));
    }
    return ForestModel(std::move(trees), j.at("feature_count").get<std::size_t>(), params);
}

}  // namespace loe
