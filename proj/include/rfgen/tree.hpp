#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfgen/common.hpp"

namespace rfgen {

// Primitive set for single-input redundancy mappings. There are no constant
// terminals and no cos, subtraction or division.
enum class Op : std::uint8_t {
    X,
    Sin,
    Tan,
    Tanh,
    Log,
    Exp,
    Sqrt,
    Square,
    Cube,
    Neg,
    Add,
    Mul,
    Max,
    Min,
    Pow,
    If,
};

inline constexpr std::size_t kOpCount = 16;

int arity(Op op) noexcept;
std::string_view token(Op op) noexcept;
std::optional<Op> op_from_token(std::string_view tok) noexcept;

enum class InitMethod { Grow, Full };

/// Expression tree stored as a prefix-order node list. The subtree rooted at
/// node i occupies the contiguous range [i, subtree_end(i)).
class GpTree {
public:
    /// The single-terminal tree "X".
    GpTree();
    /// Throws DomainError unless `prefix` is one complete arity-correct tree.
    explicit GpTree(std::vector<Op> prefix);

    std::span<const Op> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    /// Depth with the root at depth 1.
    int depth() const;
    /// Depth of node i counted from the root (root = 1).
    int node_depth(std::size_t i) const;
    std::size_t subtree_end(std::size_t i) const;
    GpTree subtree(std::size_t i) const;
    /// Copy of this tree with the subtree at node i replaced by `replacement`.
    GpTree with_subtree(std::size_t i, const GpTree& replacement) const;

    std::uint64_t structural_hash() const noexcept;

    friend bool operator==(const GpTree&, const GpTree&) = default;

private:
    std::vector<Op> nodes_;
};

/// Elementwise evaluation. Returns nullopt when any output element is NaN or
/// +-Inf; no operator is protected.
std::optional<FeatureVector> evaluate_tree(const GpTree& tree, std::span<const double> inputs);

std::string to_sexpr(const GpTree& tree);
/// Throws ParseError (with character offset) on unknown tokens, arity
/// mismatches, unbalanced parentheses or trailing input.
GpTree parse_sexpr(std::string_view text);

GpTree random_tree(int max_depth, InitMethod method, Rng& rng);

} // namespace rfgen
