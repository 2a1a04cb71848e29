#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardylab/extremal.hpp"

namespace hardylab::trees {

/// Real labels on the full binary tree of height h, level order (row r of
/// the values array is [2^r - 1, 2^{r+1} - 1), row 0 the root, row h the
/// leaves).  The star variant carries one extra vertex above the root.
struct ValuedTree {
    int height = 0;
    std::vector<double> values;  // 2^{height+1} - 1 labels
    bool star = false;
    double star_value = 0.0;

    ValuedTree() = default;
    ValuedTree(int height, std::vector<double> values);
    static ValuedTree zero(int height);
    static ValuedTree leaf(double v);

    std::size_t node_count() const { return values.size(); }
    double& at(int row, std::size_t i) { return values[(std::size_t{1} << row) - 1 + i]; }
    double at(int row, std::size_t i) const { return values[(std::size_t{1} << row) - 1 + i]; }

    ValuedTree with_star(double a) const;

    /// U1 ~ a ~ U2: new root a over two equal-height subtrees
    static ValuedTree join(const ValuedTree& left, double a, const ValuedTree& right);

    std::string to_json() const;  // level-order array (+ star)
    static ValuedTree from_json(const std::string& text);
};

/// |||U|||, computed both by the top-down recursion and by repeated collapse
/// of the two bottom rows; throws if the two disagree beyond 1e-12.
double triple_norm(const ValuedTree& U);

/// ||U|| = 2^-h sum over leaves of the l2 norm along the root path (the star
/// value joins every path).
double bar_norm(const ValuedTree& U);

/// The adapted instance behind the tree norms: a tree with R rows (rows of
/// the binary part plus the star) maps to phi_1..phi_R on {0,1}^R with
/// phi_k(x) = (-1)^{x_k} g_{k-1}(x_{k+1},...), g_0 the leaf row.  Every
/// phi_k is F*_k-measurable with E*_{k+1} phi_k = 0, bar = E (sum phi^2)^(1/2)
/// and triple = E lambda_R.
struct TreePhiInstance {
    extremal::FiniteFiltration filtration;
    extremal::AdaptedSequence phi;
};
TreePhiInstance tree_to_phis(const ValuedTree& G);

// ---- counterexample search ------------------------------------------------------

enum class SearchStrategy { doubling, scaling, coordinate_descent };

struct RatioTraceRow {
    int height = 0;
    double best_ratio = 0.0;
    std::uint64_t evaluations = 0;
};

struct RatioSearchResult {
    std::vector<RatioTraceRow> trace;  // one row per height, 1..height
    ValuedTree best;                   // underlying G at the final height (without the star)
    double best_ratio = 1.0;
};

/// Minimizes |||1 ~ G||| / ||1 ~ G|| over nonnegative G; `height` counts the
/// star edge, so height h searches G of height h-1 (height 1 is the T*_0 case
/// where both norms coincide and the ratio is identically 1).
RatioSearchResult ratio_search(int height, SearchStrategy strategy, std::uint64_t budget,
                               std::uint64_t seed = 1);

/// ratio of the star tree 1 ~ G
double star_ratio(const ValuedTree& G);

}  // namespace hardylab::trees
