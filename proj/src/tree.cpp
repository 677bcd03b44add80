#include "rfgen/tree.hpp"

#include <array>
#include <cctype>
#include <cmath>

namespace rfgen {

namespace {

constexpr std::array<std::string_view, kOpCount> kTokens = {
    "X", "sin", "tan", "tanh", "log", "exp", "sqrt", "square", "cube", "neg",
    "+", "mul", "max", "min", "pow", "if",
};

constexpr std::array<int, kOpCount> kArity = {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 3};

constexpr std::size_t kFirstFunction = 1;

bool is_complete_prefix(const std::vector<Op>& nodes)
{
    std::ptrdiff_t open = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (open <= 0) {
            return false;
        }
        open += arity(nodes[i]) - 1;
    }
    return open == 0;
}

// Evaluates the subtree starting at `pos` into `out`, returns the index one past it.
std::size_t eval_at(std::span<const Op> nodes, std::size_t pos, std::span<const double> in, FeatureVector& out)
{
    const Op op = nodes[pos++];
    const std::size_t n = in.size();
    if (op == Op::X) {
        out.assign(in.begin(), in.end());
        return pos;
    }
    pos = eval_at(nodes, pos, in, out);
    switch (op) {
    case Op::Sin:
        for (auto& v : out) v = std::sin(v);
        return pos;
    case Op::Tan:
        for (auto& v : out) v = std::tan(v);
        return pos;
    case Op::Tanh:
        for (auto& v : out) v = std::tanh(v);
        return pos;
    case Op::Log:
        for (auto& v : out) v = std::log(v);
        return pos;
    case Op::Exp:
        for (auto& v : out) v = std::exp(v);
        return pos;
    case Op::Sqrt:
        for (auto& v : out) v = std::sqrt(v);
        return pos;
    case Op::Square:
        for (auto& v : out) v = v * v;
        return pos;
    case Op::Cube:
        for (auto& v : out) v = v * v * v;
        return pos;
    case Op::Neg:
        for (auto& v : out) v = -v;
        return pos;
    default:
        break;
    }

    FeatureVector b;
    pos = eval_at(nodes, pos, in, b);
    switch (op) {
    case Op::Add:
        for (std::size_t i = 0; i < n; ++i) out[i] += b[i];
        return pos;
    case Op::Mul:
        for (std::size_t i = 0; i < n; ++i) out[i] *= b[i];
        return pos;
    case Op::Max:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::fmax(out[i], b[i]);
        return pos;
    case Op::Min:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::fmin(out[i], b[i]);
        return pos;
    case Op::Pow:
        for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(out[i], b[i]);
        return pos;
    default:
        break;
    }

    // if(c, t, e)
    FeatureVector e;
    pos = eval_at(nodes, pos, in, e);
    for (std::size_t i = 0; i < n; ++i) {
        // NaN conditions propagate rather than silently choosing a branch.
        out[i] = std::isnan(out[i]) ? out[i] : (out[i] >= 0.0 ? b[i] : e[i]);
    }
    return pos;
}

void grow(std::vector<Op>& out, int depth, int max_depth, InitMethod method, Rng& rng)
{
    Op op;
    if (depth >= max_depth) {
        op = Op::X;
    } else if (method == InitMethod::Full) {
        op = static_cast<Op>(kFirstFunction + uniform_index(rng, kOpCount - kFirstFunction));
    } else {
        op = static_cast<Op>(uniform_index(rng, kOpCount));
    }
    out.push_back(op);
    for (int c = 0; c < arity(op); ++c) {
        grow(out, depth + 1, max_depth, method, rng);
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    GpTree parse()
    {
        std::vector<Op> nodes;
        expr(nodes);
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError("trailing input after expression", pos_);
        }
        return GpTree(std::move(nodes));
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    std::string_view atom()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')'
            && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    void expr(std::vector<Op>& nodes)
    {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        if (text_[pos_] == ')') {
            throw ParseError("unexpected ')'", pos_);
        }
        if (text_[pos_] != '(') {
            const std::size_t at = pos_;
            const auto tok = atom();
            const auto op = op_from_token(tok);
            if (!op) {
                throw ParseError("unknown token '" + std::string(tok) + "'", at);
            }
            if (*op != Op::X) {
                throw ParseError("function '" + std::string(tok) + "' must be applied inside parentheses", at);
            }
            nodes.push_back(Op::X);
            return;
        }
        ++pos_;
        skip_space();
        const std::size_t at = pos_;
        const auto tok = atom();
        const auto op = op_from_token(tok);
        if (!op) {
            throw ParseError("unknown token '" + std::string(tok) + "'", at);
        }
        if (*op == Op::X) {
            throw ParseError("terminal X cannot be applied", at);
        }
        nodes.push_back(*op);
        int children = 0;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) {
                throw ParseError("missing ')'", pos_);
            }
            if (text_[pos_] == ')') {
                break;
            }
            if (children == arity(*op)) {
                throw ParseError("arity mismatch: '" + std::string(tok) + "' takes "
                    + std::to_string(arity(*op)) + " argument(s)", pos_);
            }
            expr(nodes);
            ++children;
        }
        if (children != arity(*op)) {
            throw ParseError("arity mismatch: '" + std::string(tok) + "' takes "
                + std::to_string(arity(*op)) + " argument(s), got " + std::to_string(children), pos_);
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void write_sexpr(std::span<const Op> nodes, std::size_t& pos, std::string& out)
{
    const Op op = nodes[pos++];
    if (op == Op::X) {
        out += 'X';
        return;
    }
    out += '(';
    out += token(op);
    for (int c = 0; c < arity(op); ++c) {
        out += ' ';
        write_sexpr(nodes, pos, out);
    }
    out += ')';
}

} // namespace

int arity(Op op) noexcept { return kArity[static_cast<std::size_t>(op)]; }

std::string_view token(Op op) noexcept { return kTokens[static_cast<std::size_t>(op)]; }

std::optional<Op> op_from_token(std::string_view tok) noexcept
{
    for (std::size_t i = 0; i < kOpCount; ++i) {
        if (kTokens[i] == tok) {
            return static_cast<Op>(i);
        }
    }
    return std::nullopt;
}

GpTree::GpTree() : nodes_{Op::X} {}

GpTree::GpTree(std::vector<Op> prefix) : nodes_(std::move(prefix))
{
    if (!is_complete_prefix(nodes_)) {
        throw DomainError("GpTree: prefix sequence is not a single arity-correct tree");
    }
}

std::size_t GpTree::subtree_end(std::size_t i) const
{
    std::ptrdiff_t open = 1;
    while (open > 0) {
        open += arity(nodes_[i++]) - 1;
    }
    return i;
}

int GpTree::depth() const
{
    // open slots stack: remaining children per depth level
    int best = 0;
    std::vector<int> pending;
    for (Op op : nodes_) {
        const int d = static_cast<int>(pending.size()) + 1;
        best = std::max(best, d);
        if (!pending.empty()) {
            --pending.back();
        }
        if (arity(op) > 0) {
            pending.push_back(arity(op));
        }
        while (!pending.empty() && pending.back() == 0) {
            pending.pop_back();
        }
    }
    return best;
}

int GpTree::node_depth(std::size_t i) const
{
    std::vector<int> pending;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        if (j == i) {
            return static_cast<int>(pending.size()) + 1;
        }
        if (!pending.empty()) {
            --pending.back();
        }
        if (arity(nodes_[j]) > 0) {
            pending.push_back(arity(nodes_[j]));
        }
        while (!pending.empty() && pending.back() == 0) {
            pending.pop_back();
        }
    }
    throw std::out_of_range("GpTree::node_depth: index out of range");
}

GpTree GpTree::subtree(std::size_t i) const
{
    return GpTree(std::vector<Op>(nodes_.begin() + static_cast<std::ptrdiff_t>(i),
        nodes_.begin() + static_cast<std::ptrdiff_t>(subtree_end(i))));
}

GpTree GpTree::with_subtree(std::size_t i, const GpTree& replacement) const
{
    const std::size_t end = subtree_end(i);
    std::vector<Op> out;
    out.reserve(nodes_.size() - (end - i) + replacement.size());
    out.insert(out.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.end(), replacement.nodes_.begin(), replacement.nodes_.end());
    out.insert(out.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end), nodes_.end());
    GpTree t;
    t.nodes_ = std::move(out);
    return t;
}

std::uint64_t GpTree::structural_hash() const noexcept
{
    std::uint64_t h = 0x243f6a8885a308d3ULL ^ nodes_.size();
    for (Op op : nodes_) {
        h = mix64(h, static_cast<std::uint64_t>(op));
    }
    return h;
}

std::optional<FeatureVector> evaluate_tree(const GpTree& tree, std::span<const double> inputs)
{
    FeatureVector out;
    eval_at(tree.nodes(), 0, inputs, out);
    if (!all_finite(out)) {
        return std::nullopt;
    }
    return out;
}

std::string to_sexpr(const GpTree& tree)
{
    std::string out;
    std::size_t pos = 0;
    write_sexpr(tree.nodes(), pos, out);
    return out;
}

GpTree parse_sexpr(std::string_view text)
{
    return Parser(text).parse();
}

GpTree random_tree(int max_depth, InitMethod method, Rng& rng)
{
    if (max_depth < 1) {
        throw DomainError("random_tree: max_depth must be >= 1");
    }
    std::vector<Op> nodes;
    grow(nodes, 1, max_depth, method, rng);
    return GpTree(std::move(nodes));
}

} // namespace rfgen
