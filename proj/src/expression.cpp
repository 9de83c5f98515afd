#include "mog3p/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mog3p/error.hpp"

namespace mog3p::gp {

std::string_view symbol_name(FunctionSymbol s) noexcept {
    switch (s) {
        case FunctionSymbol::Add: return "+";
        case FunctionSymbol::Sub: return "-";
        case FunctionSymbol::Mul: return "*";
        case FunctionSymbol::ProtDiv: return "pdiv";
        case FunctionSymbol::Min: return "min";
        case FunctionSymbol::Max: return "max";
        case FunctionSymbol::Pow: return "pow";
        case FunctionSymbol::Log: return "log";
    }
    return "?";
}

namespace {

double protected_pow(double a, double b) noexcept {
    if (std::abs(a) < kProtectEps) {
        if (b > 0.0) return 0.0;
        return 1.0;
    }
    return std::exp(b * std::log(std::abs(a)));
}

double sanitize(double v) noexcept {
    if (!std::isfinite(v)) return 0.0;
    return std::clamp(v, -kClampBound, kClampBound);
}

}  // namespace

double apply_symbol(FunctionSymbol s, double a, double b) noexcept {
    double r = 0.0;
    switch (s) {
        case FunctionSymbol::Add: r = a + b; break;
        case FunctionSymbol::Sub: r = a - b; break;
        case FunctionSymbol::Mul: r = a * b; break;
        case FunctionSymbol::ProtDiv: r = std::abs(b) < kProtectEps ? 1.0 : a / b; break;
        case FunctionSymbol::Min: r = std::min(a, b); break;
        case FunctionSymbol::Max: r = std::max(a, b); break;
        case FunctionSymbol::Pow: r = protected_pow(a, b); break;
        case FunctionSymbol::Log: r = std::abs(a) < kProtectEps ? 0.0 : std::log(std::abs(a)); break;
    }
    return sanitize(r);
}

// ---------------------------------------------------------------------------
// ExpressionTree

ExpressionTree::ExpressionTree(std::vector<Node> prefix) : nodes_(std::move(prefix)) {
    if (nodes_.empty()) throw InvariantError("expression tree must have at least one node");
    // Walk the prefix sequence tracking how many operands are still open.
    std::vector<std::pair<int, int>> pending;  // (children still expected, depth) per open function
    long open = 1;
    int max_depth = 0;
    for (const Node& n : nodes_) {
        if (open <= 0) throw InvariantError("expression tree has trailing nodes");
        const int d = pending.empty() ? 0 : pending.back().second + 1;
        max_depth = std::max(max_depth, d);
        if (!pending.empty() && --pending.back().first == 0) pending.pop_back();
        open += n.arity() - 1;
        if (n.arity() > 0) pending.emplace_back(n.arity(), d);
    }
    if (open != 0) throw InvariantError("expression tree is missing operands");
    depth_ = max_depth;
}

ExpressionTree ExpressionTree::variable(std::size_t feature) {
    return ExpressionTree(std::vector<Node>{Node::variable(feature)});
}

ExpressionTree ExpressionTree::apply(FunctionSymbol s, std::span<const ExpressionTree> children) {
    if (static_cast<int>(children.size()) != arity(s))
        throw InvariantError("wrong number of children for " + std::string(symbol_name(s)));
    std::vector<Node> nodes{Node::function(s)};
    for (const auto& c : children) nodes.insert(nodes.end(), c.nodes().begin(), c.nodes().end());
    return ExpressionTree(std::move(nodes));
}

ExpressionTree ExpressionTree::apply(FunctionSymbol s, const ExpressionTree& a) {
    return apply(s, std::span<const ExpressionTree>(&a, 1));
}

ExpressionTree ExpressionTree::apply(FunctionSymbol s, const ExpressionTree& a,
                                     const ExpressionTree& b) {
    const std::array<ExpressionTree, 2> kids{a, b};
    return apply(s, kids);
}

std::size_t ExpressionTree::subtree_end(std::size_t i) const {
    if (i >= nodes_.size()) throw InvariantError("subtree index out of range");
    long open = 1;
    std::size_t j = i;
    while (open > 0) {
        open += nodes_[j].arity() - 1;
        ++j;
    }
    return j;
}

std::vector<int> ExpressionTree::node_depths() const {
    std::vector<int> depths(nodes_.size());
    std::vector<std::pair<int, int>> pending;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        depths[i] = pending.empty() ? 0 : pending.back().second + 1;
        if (!pending.empty() && --pending.back().first == 0) pending.pop_back();
        if (nodes_[i].arity() > 0) pending.emplace_back(nodes_[i].arity(), depths[i]);
    }
    return depths;
}

std::set<std::size_t> ExpressionTree::variables() const {
    std::set<std::size_t> out;
    for (const Node& n : nodes_)
        if (!n.is_function()) out.insert(n.feature);
    return out;
}

std::size_t ExpressionTree::max_feature() const noexcept {
    std::size_t m = 0;
    for (const Node& n : nodes_)
        if (!n.is_function()) m = std::max<std::size_t>(m, n.feature);
    return m;
}

ExpressionTree ExpressionTree::replace_subtree(std::size_t at,
                                               std::span<const Node> replacement) const {
    const std::size_t end = subtree_end(at);
    std::vector<Node> out;
    out.reserve(nodes_.size() - (end - at) + replacement.size());
    out.insert(out.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(at));
    out.insert(out.end(), replacement.begin(), replacement.end());
    out.insert(out.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end), nodes_.end());
    return ExpressionTree(std::move(out));
}

namespace {

// Independent recursive recomputation used by validate().
std::size_t recount(std::span<const Node> nodes, std::size_t& pos, int depth, int& max_depth) {
    if (pos >= nodes.size()) throw InvariantError("expression tree is missing operands");
    const Node& n = nodes[pos++];
    max_depth = std::max(max_depth, depth);
    std::size_t size = 1;
    for (int c = 0; c < n.arity(); ++c) size += recount(nodes, pos, depth + 1, max_depth);
    return size;
}

}  // namespace

void validate(const ExpressionTree& tree, std::size_t n_features, int max_depth) {
    std::size_t pos = 0;
    int depth = 0;
    const std::size_t size = recount(tree.nodes(), pos, 0, depth);
    if (pos != tree.size() || size != tree.size())
        throw InvariantError("cached tree size disagrees with structure");
    if (depth != tree.depth()) throw InvariantError("cached tree depth disagrees with structure");
    if (max_depth >= 0 && depth > max_depth) throw InvariantError("tree exceeds maximum depth");
    for (const Node& n : tree.nodes()) {
        if (!n.is_function() && n.feature >= n_features)
            throw InvariantError("variable index out of range");
        if (n.is_function() && static_cast<std::size_t>(n.symbol) >= kAllSymbols.size())
            throw InvariantError("unknown function symbol");
    }
}

std::size_t ProjectionModel::total_size() const noexcept {
    std::size_t s = 0;
    for (const auto& t : trees) s += t.size();
    return s;
}

void GpParams::validate() const {
    if (crossover_rate < 0.0 || crossover_rate > 1.0) throw ConfigError("crossover_rate must be in [0,1]");
    if (mutation_rate < 0.0 || mutation_rate > 1.0) throw ConfigError("mutation_rate must be in [0,1]");
    if (max_depth_init < 0) throw ConfigError("max_depth_init must be >= 0");
    if (init_min_depth < 0 || init_min_depth > max_depth_init)
        throw ConfigError("init_min_depth must be in [0, max_depth_init]");
    if (max_depth_init > max_depth) throw ConfigError("max_depth_init must not exceed max_depth");
    if (n_features < 1) throw ConfigError("n_features must be >= 1");
    if (target_dims < 1) throw ConfigError("target_dims must be >= 1");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_at(std::span<const Node> nodes, std::size_t& pos, std::span<const double> row) {
    const Node& n = nodes[pos++];
    if (!n.is_function()) return row[n.feature];
    const double a = eval_at(nodes, pos, row);
    const double b = n.arity() == 2 ? eval_at(nodes, pos, row) : 0.0;
    return apply_symbol(n.symbol, a, b);
}

}  // namespace

double evaluate(const ExpressionTree& tree, std::span<const double> row) {
    if (tree.max_feature() >= row.size())
        throw DimensionError("variable index exceeds row length");
    std::size_t pos = 0;
    return eval_at(tree.nodes(), pos, row);
}

std::vector<double> evaluate_rows(const ExpressionTree& tree, const Matrix& x) {
    if (tree.max_feature() >= x.cols())
        throw DimensionError("variable index " + std::to_string(tree.max_feature()) +
                             " exceeds feature count " + std::to_string(x.cols()));
    const std::size_t n = x.rows();
    // Reverse prefix order acts as a postfix program; the first operand of a
    // function is on top of the stack when it is reached.
    std::vector<std::vector<double>> stack;
    std::vector<std::vector<double>> spare;
    auto take = [&]() {
        if (spare.empty()) return std::vector<double>(n);
        auto v = std::move(spare.back());
        spare.pop_back();
        return v;
    };
    const auto nodes = tree.nodes();
    for (std::size_t k = nodes.size(); k-- > 0;) {
        const Node& node = nodes[k];
        if (!node.is_function()) {
            auto col = take();
            for (std::size_t r = 0; r < n; ++r) col[r] = x(r, node.feature);
            stack.push_back(std::move(col));
            continue;
        }
        auto a = std::move(stack.back());
        stack.pop_back();
        if (node.arity() == 2) {
            auto b = std::move(stack.back());
            stack.pop_back();
            for (std::size_t r = 0; r < n; ++r) a[r] = apply_symbol(node.symbol, a[r], b[r]);
            spare.push_back(std::move(b));
        } else {
            for (std::size_t r = 0; r < n; ++r) a[r] = apply_symbol(node.symbol, a[r], 0.0);
        }
        stack.push_back(std::move(a));
    }
    return std::move(stack.back());
}

Matrix project(const ProjectionModel& model, const Matrix& x) {
    Matrix out(x.rows(), model.dims());
    for (std::size_t t = 0; t < model.dims(); ++t) {
        const auto col = evaluate_rows(model.trees[t], x);
        for (std::size_t r = 0; r < x.rows(); ++r) out(r, t) = col[r];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generation and variation

namespace {

void grow_into(std::vector<Node>& out, std::size_t n_features, int depth_left, Rng& rng,
               InitMethod method) {
    bool terminal = depth_left <= 0;
    if (!terminal && method == InitMethod::Grow) {
        terminal = rng.index(kAllSymbols.size() + n_features) >= kAllSymbols.size();
    }
    if (terminal) {
        out.push_back(Node::variable(rng.index(n_features)));
        return;
    }
    const FunctionSymbol s = kAllSymbols[rng.index(kAllSymbols.size())];
    out.push_back(Node::function(s));
    for (int c = 0; c < arity(s); ++c) grow_into(out, n_features, depth_left - 1, rng, method);
}

}  // namespace

ExpressionTree random_tree(std::size_t n_features, int depth, Rng& rng, InitMethod method) {
    std::vector<Node> nodes;
    grow_into(nodes, n_features, depth, rng, method);
    return ExpressionTree(std::move(nodes));
}

ExpressionTree random_tree(const GpParams& params, Rng& rng, InitMethod method) {
    return random_tree(params.n_features, params.max_depth_init, rng, method);
}

std::pair<ExpressionTree, ExpressionTree> subtree_crossover(const ExpressionTree& a,
                                                            const ExpressionTree& b,
                                                            int max_depth, Rng& rng) {
    const std::size_t i = rng.index(a.size());
    const std::size_t j = rng.index(b.size());
    const auto a_sub = a.nodes().subspan(i, a.subtree_end(i) - i);
    const auto b_sub = b.nodes().subspan(j, b.subtree_end(j) - j);
    ExpressionTree first = a.replace_subtree(i, b_sub);
    ExpressionTree second = b.replace_subtree(j, a_sub);
    if (first.depth() > max_depth) first = a;
    if (second.depth() > max_depth) second = b;
    return {std::move(first), std::move(second)};
}

ExpressionTree subtree_mutation(const ExpressionTree& a, const GpParams& params, Rng& rng) {
    const std::size_t at = rng.index(a.size());
    const int point_depth = a.node_depths()[at];
    for (int d = 2;; --d) {
        ExpressionTree fresh = random_tree(params.n_features, d, rng, InitMethod::Grow);
        if (point_depth + fresh.depth() <= params.max_depth || d == 0) {
            return a.replace_subtree(at, fresh.nodes());
        }
    }
}

// ---------------------------------------------------------------------------
// Infix text

namespace {

void infix_at(std::span<const Node> nodes, std::size_t& pos, std::span<const std::string> names,
              std::string& out) {
    const Node& n = nodes[pos++];
    if (!n.is_function()) {
        if (n.feature >= names.size()) throw DimensionError("no name for variable index");
        out += names[n.feature];
        return;
    }
    switch (n.symbol) {
        case FunctionSymbol::Add:
        case FunctionSymbol::Sub:
        case FunctionSymbol::Mul:
            out += '(';
            infix_at(nodes, pos, names, out);
            out += ' ';
            out += symbol_name(n.symbol);
            out += ' ';
            infix_at(nodes, pos, names, out);
            out += ')';
            return;
        default:
            out += symbol_name(n.symbol);
            out += '(';
            infix_at(nodes, pos, names, out);
            if (n.arity() == 2) {
                out += ", ";
                infix_at(nodes, pos, names, out);
            }
            out += ')';
            return;
    }
}

class InfixParser {
public:
    InfixParser(std::string_view text, std::span<const std::string> names)
        : text_(text), names_(names) {}

    ExpressionTree parse() {
        parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return ExpressionTree(std::move(out_));
    }

private:
    static bool is_name_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' &&
               c != ',' && c != '+' && c != '-' && c != '*';
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError("expression parse error at offset " + std::to_string(pos_) + ": " +
                        what + " in \"" + std::string(text_) + "\"");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void parse_expr() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '(') {
            ++pos_;
            const std::size_t op_slot = out_.size();
            out_.push_back(Node::function(FunctionSymbol::Add));
            parse_expr();
            skip_ws();
            if (pos_ >= text_.size()) fail("expected operator");
            switch (text_[pos_]) {
                case '+': out_[op_slot] = Node::function(FunctionSymbol::Add); break;
                case '-': out_[op_slot] = Node::function(FunctionSymbol::Sub); break;
                case '*': out_[op_slot] = Node::function(FunctionSymbol::Mul); break;
                default: fail("expected '+', '-' or '*'");
            }
            ++pos_;
            parse_expr();
            expect(')');
            return;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
        if (pos_ == start) fail("expected a name");
        const std::string_view word = text_.substr(start, pos_ - start);
        std::size_t look = pos_;
        while (look < text_.size() && std::isspace(static_cast<unsigned char>(text_[look]))) ++look;
        if (look < text_.size() && text_[look] == '(') {
            for (FunctionSymbol s : kAllSymbols) {
                if (arity(s) == 2 && (s == FunctionSymbol::Add || s == FunctionSymbol::Sub ||
                                      s == FunctionSymbol::Mul))
                    continue;
                if (symbol_name(s) != word) continue;
                out_.push_back(Node::function(s));
                pos_ = look + 1;
                parse_expr();
                if (arity(s) == 2) {
                    expect(',');
                    parse_expr();
                }
                expect(')');
                return;
            }
            fail("unknown function '" + std::string(word) + "'");
        }
        for (std::size_t f = 0; f < names_.size(); ++f) {
            if (names_[f] == word) {
                out_.push_back(Node::variable(f));
                return;
            }
        }
        fail("unknown feature '" + std::string(word) + "'");
    }

    std::string_view text_;
    std::span<const std::string> names_;
    std::size_t pos_ = 0;
    std::vector<Node> out_;
};

}  // namespace

std::string to_infix(const ExpressionTree& tree, std::span<const std::string> names) {
    std::string out;
    std::size_t pos = 0;
    infix_at(tree.nodes(), pos, names, out);
    return out;
}

ExpressionTree parse_infix(std::string_view text, std::span<const std::string> names) {
    return InfixParser(text, names).parse();
}

}  // namespace mog3p::gp
