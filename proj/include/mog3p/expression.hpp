#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mog3p/matrix.hpp"
#include "mog3p/rng.hpp"

namespace mog3p::gp {

enum class FunctionSymbol : std::uint8_t { Add, Sub, Mul, ProtDiv, Min, Max, Pow, Log };

inline constexpr std::array<FunctionSymbol, 8> kAllSymbols = {
    FunctionSymbol::Add, FunctionSymbol::Sub, FunctionSymbol::Mul, FunctionSymbol::ProtDiv,
    FunctionSymbol::Min, FunctionSymbol::Max, FunctionSymbol::Pow, FunctionSymbol::Log};

constexpr int arity(FunctionSymbol s) noexcept { return s == FunctionSymbol::Log ? 1 : 2; }

std::string_view symbol_name(FunctionSymbol s) noexcept;

// Protected-operator constants.
inline constexpr double kProtectEps = 1e-9;
inline constexpr double kClampBound = 1e150;

// Applies one base function with protected semantics; the result is always
// finite and within [-kClampBound, kClampBound]. `b` is ignored for Log.
double apply_symbol(FunctionSymbol s, double a, double b) noexcept;

struct Node {
    enum class Kind : std::uint8_t { Function, Variable };

    Kind kind = Kind::Variable;
    FunctionSymbol symbol = FunctionSymbol::Add;
    std::uint32_t feature = 0;

    static constexpr Node function(FunctionSymbol s) noexcept { return {Kind::Function, s, 0}; }
    static constexpr Node variable(std::size_t f) noexcept {
        return {Kind::Variable, FunctionSymbol::Add, static_cast<std::uint32_t>(f)};
    }

    bool is_function() const noexcept { return kind == Kind::Function; }
    int arity() const noexcept { return is_function() ? gp::arity(symbol) : 0; }

    bool operator==(const Node&) const = default;
};

// An immutable expression tree stored as a prefix-order node sequence; the
// subtree rooted at node i occupies [i, subtree_end(i)). Size and depth are
// computed once at construction. A lone variable has depth 0.
class ExpressionTree {
public:
    ExpressionTree() : ExpressionTree(std::vector<Node>{Node::variable(0)}) {}
    explicit ExpressionTree(std::vector<Node> prefix);

    static ExpressionTree variable(std::size_t feature);
    static ExpressionTree apply(FunctionSymbol s, std::span<const ExpressionTree> children);
    static ExpressionTree apply(FunctionSymbol s, const ExpressionTree& a);
    static ExpressionTree apply(FunctionSymbol s, const ExpressionTree& a, const ExpressionTree& b);

    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    int depth() const noexcept { return depth_; }

    std::size_t subtree_end(std::size_t i) const;
    // Depth of every node position, root = 0.
    std::vector<int> node_depths() const;
    std::set<std::size_t> variables() const;
    std::size_t max_feature() const noexcept;

    // New tree with the subtree at `at` replaced by `replacement`.
    ExpressionTree replace_subtree(std::size_t at, std::span<const Node> replacement) const;

    bool operator==(const ExpressionTree& o) const { return nodes_ == o.nodes_; }

private:
    std::vector<Node> nodes_;
    int depth_ = 0;
};

// Recomputes size/depth from the node structure and throws InvariantError
// if the tree is malformed or exceeds `max_depth` (when non-negative).
void validate(const ExpressionTree& tree, std::size_t n_features, int max_depth = -1);

struct ProjectionModel {
    std::vector<ExpressionTree> trees;

    std::size_t dims() const noexcept { return trees.size(); }
    std::size_t total_size() const noexcept;
    bool operator==(const ProjectionModel&) const = default;
};

struct GpParams {
    int max_depth_init = 5;
    int init_min_depth = 2;
    int max_depth = 12;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::size_t n_features = 1;
    std::size_t target_dims = 2;

    // Throws ConfigError on out-of-domain values.
    void validate() const;
};

double evaluate(const ExpressionTree& tree, std::span<const double> row);

// Evaluates the tree on every row of `x`; equal to calling evaluate() per row.
std::vector<double> evaluate_rows(const ExpressionTree& tree, const Matrix& x);

// n x T matrix of tree outputs. Throws DimensionError on bad variable indices.
Matrix project(const ProjectionModel& model, const Matrix& x);

enum class InitMethod { Grow, Full };

ExpressionTree random_tree(const GpParams& params, Rng& rng, InitMethod method);
ExpressionTree random_tree(std::size_t n_features, int depth, Rng& rng, InitMethod method);

// Swaps one uniformly chosen subtree of each parent. A child deeper than
// `max_depth` is replaced by a copy of its parent.
std::pair<ExpressionTree, ExpressionTree> subtree_crossover(const ExpressionTree& a,
                                                            const ExpressionTree& b,
                                                            int max_depth, Rng& rng);

// Replaces one uniformly chosen subtree by a fresh Grow tree of depth <= 2,
// retrying at the same point with shallower replacements to respect max_depth.
ExpressionTree subtree_mutation(const ExpressionTree& a, const GpParams& params, Rng& rng);

std::string to_infix(const ExpressionTree& tree, std::span<const std::string> names);

// Inverse of to_infix. Throws DataError on malformed text or unknown names.
ExpressionTree parse_infix(std::string_view text, std::span<const std::string> names);

}  // namespace mog3p::gp
