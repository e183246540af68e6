#include "csrank/formula.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <set>
#include <utility>

namespace csrank {

namespace {

const std::set<std::string> kKeywords = {"sup",  "inf",   "max", "min",   "tsub",
                                         "norm", "adj",   "sub", "tuple", "one",
                                         "ball1", "posball1", "A"};

FormulaPtr make(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    FormulaPtr sentence() {
        std::vector<FormulaNode> quants;
        while (true) {
            skip_ws();
            const std::size_t mark = pos_;
            const std::string word = try_ident();
            if (word != "sup" && word != "inf") {
                pos_ = mark;
                break;
            }
            FormulaNode q;
            q.kind = word == "sup" ? NodeKind::kSup : NodeKind::kInf;
            q.name = expect_fresh_ident();
            expect(':');
            q.sort = parse_sort();
            expect('.');
            bound_.emplace_back(q.name, q.sort);
            quants.push_back(std::move(q));
        }
        if (quants.empty()) fail(pos_, "expected a quantifier");
        FormulaPtr inner = body();
        skip_ws();
        if (pos_ != s_.size()) fail(pos_, "trailing input after the sentence");
        for (auto it = quants.rbegin(); it != quants.rend(); ++it) {
            FormulaNode q = std::move(*it);
            q.children = {std::move(inner)};
            inner = make(std::move(q));
        }
        return inner;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(std::size_t at, const std::string& msg) { throw ParseError(at, msg); }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(pos_, std::string("expected '") + c + "'");
    }

    // Empty string when the next token is not an identifier.
    std::string try_ident() {
        skip_ws();
        std::size_t p = pos_;
        if (p >= s_.size()) return {};
        const auto head = static_cast<unsigned char>(s_[p]);
        if (!std::isalpha(head) && s_[p] != '_') return {};
        while (p < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_'))
            ++p;
        std::string word = s_.substr(pos_, p - pos_);
        pos_ = p;
        return word;
    }

    std::string expect_fresh_ident() {
        skip_ws();
        const std::size_t at = pos_;
        const std::string word = try_ident();
        if (word.empty()) fail(at, "expected a variable name");
        if (kKeywords.count(word)) fail(at, "'" + word + "' is a keyword");
        for (const auto& [name, sort] : bound_)
            if (name == word) fail(at, "variable '" + word + "' is already bound");
        return word;
    }

    VarSort parse_sort() {
        skip_ws();
        const std::size_t at = pos_;
        const std::string word = try_ident();
        VarSort sort;
        if (word == "ball1") {
            expect('(');
            skip_ws();
            if (try_ident() != "A") fail(pos_, "expected 'A'");
            expect('^');
            sort.kind = SortKind::kBallTuple;
            sort.width = parse_width();
            expect(')');
        } else if (word == "posball1") {
            expect('(');
            skip_ws();
            if (try_ident() != "A") fail(pos_, "expected 'A'");
            sort.kind = SortKind::kPosBall;
            sort.width = 1;
            expect(')');
        } else {
            fail(at, "expected a sort: ball1(A^n) or posball1(A)");
        }
        return sort;
    }

    std::size_t parse_width() {
        skip_ws();
        const std::size_t at = pos_;
        std::size_t p = pos_;
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        if (p == pos_) fail(at, "expected a tuple width");
        std::size_t value = 0;
        std::from_chars(s_.data() + pos_, s_.data() + p, value);
        pos_ = p;
        if (value == 0) fail(at, "tuple width must be positive");
        return value;
    }

    bool number_ahead() {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        return c == '-' && pos_ + 1 < s_.size() &&
               std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
    }

    double parse_number() {
        skip_ws();
        const std::size_t at = pos_;
        std::size_t p = pos_;
        if (p < s_.size() && s_[p] == '-') ++p;
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        if (p < s_.size() && s_[p] == '.') {
            ++p;
            while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        }
        if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            std::size_t digits = q;
            while (digits < s_.size() && std::isdigit(static_cast<unsigned char>(s_[digits])))
                ++digits;
            if (digits > q) p = digits;
        }
        double value = 0.0;
        const auto res = std::from_chars(s_.data() + pos_, s_.data() + p, value);
        if (res.ec != std::errc() || res.ptr == s_.data() + pos_)
            fail(at, "malformed number");
        pos_ = static_cast<std::size_t>(res.ptr - s_.data());
        return value;
    }

    FormulaPtr body() {
        FormulaPtr left = body_factor();
        while (accept('+')) {
            FormulaPtr right = body_factor();
            FormulaNode sum;
            sum.kind = NodeKind::kBodySum;
            sum.children = {std::move(left), std::move(right)};
            left = make(std::move(sum));
        }
        return left;
    }

    FormulaPtr body_factor() {
        skip_ws();
        const std::size_t at = pos_;
        if (number_ahead()) {
            const double value = parse_number();
            if (accept('*')) {
                FormulaNode scale;
                scale.kind = NodeKind::kBodyScale;
                scale.scalar = value;
                scale.children = {body_factor()};
                return make(std::move(scale));
            }
            FormulaNode c;
            c.kind = NodeKind::kConst;
            c.scalar = value;
            return make(std::move(c));
        }
        const std::string word = try_ident();
        if (word == "max" || word == "min" || word == "tsub") {
            FormulaNode node;
            node.kind = word == "max"   ? NodeKind::kMax
                        : word == "min" ? NodeKind::kMin
                                        : NodeKind::kTSub;
            expect('(');
            FormulaPtr first = body();
            expect(',');
            FormulaPtr second = body();
            expect(')');
            node.children = {std::move(first), std::move(second)};
            return make(std::move(node));
        }
        if (word == "norm") {
            expect('(');
            FormulaPtr t = term();
            expect(')');
            FormulaNode node;
            node.kind = NodeKind::kNorm;
            node.children = {std::move(t)};
            return make(std::move(node));
        }
        fail(at, "expected a body: max, min, tsub, norm, or an affine combination");
    }

    FormulaPtr term() {
        FormulaPtr left = term_product();
        while (accept('+')) {
            const std::size_t at = pos_;
            FormulaPtr right = term_product();
            if (left->term_sort != right->term_sort || left->width != right->width)
                fail(at, "sum of terms with different sorts");
            FormulaNode sum;
            sum.kind = NodeKind::kTermSum;
            sum.term_sort = left->term_sort;
            sum.width = left->width;
            sum.children = {std::move(left), std::move(right)};
            left = make(std::move(sum));
        }
        return left;
    }

    FormulaPtr term_product() {
        FormulaPtr left = term_factor();
        while (accept('*')) {
            const std::size_t at = pos_;
            FormulaPtr right = term_factor();
            FormulaNode prod;
            prod.kind = NodeKind::kTermProduct;
            if (left->term_sort == TermSort::kTuple && right->term_sort == TermSort::kScalar) {
                prod.term_sort = TermSort::kTuple;
                prod.width = left->width;
            } else if (left->term_sort == TermSort::kCoTuple &&
                       right->term_sort == TermSort::kTuple && left->width == right->width) {
                prod.term_sort = TermSort::kScalar;
                prod.width = 1;
            } else if (left->term_sort == TermSort::kScalar &&
                       right->term_sort == TermSort::kScalar) {
                prod.term_sort = TermSort::kScalar;
                prod.width = 1;
            } else {
                fail(at, "cannot multiply terms with these sorts");
            }
            prod.children = {std::move(left), std::move(right)};
            left = make(std::move(prod));
        }
        return left;
    }

    FormulaPtr term_factor() {
        skip_ws();
        const std::size_t at = pos_;
        if (number_ahead()) {
            const double value = parse_number();
            expect('*');
            FormulaPtr child = term_factor();
            FormulaNode scale;
            scale.kind = NodeKind::kTermScale;
            scale.scalar = value;
            scale.term_sort = child->term_sort;
            scale.width = child->width;
            scale.children = {std::move(child)};
            return make(std::move(scale));
        }
        const std::string word = try_ident();
        if (word.empty()) fail(at, "expected a term");
        if (word == "one") {
            FormulaNode one;
            one.kind = NodeKind::kOne;
            one.term_sort = TermSort::kScalar;
            return make(std::move(one));
        }
        if (word == "adj") {
            expect('(');
            FormulaPtr child = term();
            expect(')');
            FormulaNode node;
            node.kind = NodeKind::kAdjoint;
            node.width = child->width;
            switch (child->term_sort) {
                case TermSort::kScalar: node.term_sort = TermSort::kScalar; break;
                case TermSort::kTuple: node.term_sort = TermSort::kCoTuple; break;
                case TermSort::kCoTuple: node.term_sort = TermSort::kTuple; break;
            }
            node.children = {std::move(child)};
            return make(std::move(node));
        }
        if (word == "sub") {
            expect('(');
            FormulaPtr first = term();
            expect(',');
            const std::size_t second_at = pos_;
            FormulaPtr second = term();
            expect(')');
            if (first->term_sort != second->term_sort || first->width != second->width)
                fail(second_at, "sub of terms with different sorts");
            FormulaNode node;
            node.kind = NodeKind::kTermSub;
            node.term_sort = first->term_sort;
            node.width = first->width;
            node.children = {std::move(first), std::move(second)};
            return make(std::move(node));
        }
        if (word == "tuple") {
            expect('(');
            FormulaNode node;
            node.kind = NodeKind::kTupleOf;
            do {
                const std::size_t entry_at = pos_;
                FormulaPtr entry = term();
                if (entry->term_sort != TermSort::kScalar)
                    fail(entry_at, "tuple entries must be single elements");
                node.children.push_back(std::move(entry));
            } while (accept(','));
            expect(')');
            node.term_sort = TermSort::kTuple;
            node.width = node.children.size();
            return make(std::move(node));
        }
        if (kKeywords.count(word)) fail(at, "'" + word + "' cannot start a term");
        for (const auto& [name, sort] : bound_) {
            if (name != word) continue;
            FormulaNode var;
            var.kind = NodeKind::kVar;
            var.name = word;
            if (sort.kind == SortKind::kBallTuple) {
                var.term_sort = TermSort::kTuple;
                var.width = sort.width;
            } else {
                var.term_sort = TermSort::kScalar;
                var.width = 1;
            }
            return make(std::move(var));
        }
        fail(at, "unbound variable '" + word + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    std::vector<std::pair<std::string, VarSort>> bound_;
};

std::string format_scalar(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string print_sort(const VarSort& sort) {
    if (sort.kind == SortKind::kPosBall) return "posball1(A)";
    return "ball1(A^" + std::to_string(sort.width) + ")";
}

void print_term(const FormulaPtr& t, std::string& out) {
    switch (t->kind) {
        case NodeKind::kVar: out += t->name; return;
        case NodeKind::kOne: out += "one"; return;
        case NodeKind::kTermSum:
            print_term(t->children[0], out);
            out += '+';
            print_term(t->children[1], out);
            return;
        case NodeKind::kTermSub:
            out += "sub(";
            print_term(t->children[0], out);
            out += ',';
            print_term(t->children[1], out);
            out += ')';
            return;
        case NodeKind::kTermScale:
            out += format_scalar(t->scalar);
            out += '*';
            print_term(t->children[0], out);
            return;
        case NodeKind::kTermProduct:
            print_term(t->children[0], out);
            out += '*';
            print_term(t->children[1], out);
            return;
        case NodeKind::kAdjoint:
            out += "adj(";
            print_term(t->children[0], out);
            out += ')';
            return;
        case NodeKind::kTupleOf:
            out += "tuple(";
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                if (i) out += ',';
                print_term(t->children[i], out);
            }
            out += ')';
            return;
        default: throw ContractViolation("print_formula: body node in term position");
    }
}

void print_body(const FormulaPtr& b, std::string& out) {
    switch (b->kind) {
        case NodeKind::kMax:
        case NodeKind::kMin:
        case NodeKind::kTSub:
            out += b->kind == NodeKind::kMax ? "max(" : b->kind == NodeKind::kMin ? "min(" : "tsub(";
            print_body(b->children[0], out);
            out += ',';
            print_body(b->children[1], out);
            out += ')';
            return;
        case NodeKind::kNorm:
            out += "norm(";
            print_term(b->children[0], out);
            out += ')';
            return;
        case NodeKind::kConst: out += format_scalar(b->scalar); return;
        case NodeKind::kBodyScale:
            out += format_scalar(b->scalar);
            out += '*';
            print_body(b->children[0], out);
            return;
        case NodeKind::kBodySum:
            print_body(b->children[0], out);
            out += '+';
            print_body(b->children[1], out);
            return;
        default: throw ContractViolation("print_formula: term node in body position");
    }
}

double term_norm_hi(const FormulaPtr& t) {
    switch (t->kind) {
        case NodeKind::kVar:
        case NodeKind::kOne: return 1.0;
        case NodeKind::kTermSum:
        case NodeKind::kTermSub:
            return term_norm_hi(t->children[0]) + term_norm_hi(t->children[1]);
        case NodeKind::kTermScale: return std::abs(t->scalar) * term_norm_hi(t->children[0]);
        case NodeKind::kTermProduct:
            return term_norm_hi(t->children[0]) * term_norm_hi(t->children[1]);
        case NodeKind::kAdjoint: return term_norm_hi(t->children[0]);
        case NodeKind::kTupleOf: {
            double sq = 0.0;
            for (const auto& c : t->children) {
                const double h = term_norm_hi(c);
                sq += h * h;
            }
            return std::sqrt(sq);
        }
        default: throw ContractViolation("formula_range: body node in term position");
    }
}

ValueRange body_range(const FormulaPtr& b) {
    switch (b->kind) {
        case NodeKind::kSup:
        case NodeKind::kInf: return body_range(b->children[0]);
        case NodeKind::kNorm: return {0.0, term_norm_hi(b->children[0])};
        case NodeKind::kConst: return {b->scalar, b->scalar};
        case NodeKind::kBodyScale: {
            const ValueRange r = body_range(b->children[0]);
            if (b->scalar >= 0.0) return {b->scalar * r.lo, b->scalar * r.hi};
            return {b->scalar * r.hi, b->scalar * r.lo};
        }
        case NodeKind::kBodySum: {
            const ValueRange x = body_range(b->children[0]);
            const ValueRange y = body_range(b->children[1]);
            return {x.lo + y.lo, x.hi + y.hi};
        }
        case NodeKind::kMax: {
            const ValueRange x = body_range(b->children[0]);
            const ValueRange y = body_range(b->children[1]);
            return {std::max(x.lo, y.lo), std::max(x.hi, y.hi)};
        }
        case NodeKind::kMin: {
            const ValueRange x = body_range(b->children[0]);
            const ValueRange y = body_range(b->children[1]);
            return {std::min(x.lo, y.lo), std::min(x.hi, y.hi)};
        }
        case NodeKind::kTSub: {
            const ValueRange x = body_range(b->children[0]);
            const ValueRange y = body_range(b->children[1]);
            return {std::max(0.0, x.lo - y.hi), std::max(0.0, x.hi - y.lo)};
        }
        default: throw ContractViolation("formula_range: term node in body position");
    }
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).sentence(); }

std::string print_formula(const FormulaPtr& f) {
    std::string out;
    FormulaPtr node = f;
    while (node->kind == NodeKind::kSup || node->kind == NodeKind::kInf) {
        out += node->kind == NodeKind::kSup ? "sup " : "inf ";
        out += node->name;
        out += ':';
        out += print_sort(node->sort);
        out += ". ";
        node = node->children[0];
    }
    print_body(node, out);
    return out;
}

FormulaPtr build_phi_n(std::size_t n) {
    if (n == 0) throw PreconditionError("build_phi_n: n must be at least 1");
    const std::string text = "sup x:ball1(A^" + std::to_string(n) +
                             "). inf v:ball1(A^" + std::to_string(n) +
                             "). inf y:posball1(A). "
                             "max(norm(sub(x,v*y)),norm(sub(adj(v)*v,one)))";
    return parse_formula(text);
}

std::optional<std::size_t> phi_shape(const FormulaPtr& f) {
    const FormulaNode* q1 = f.get();
    if (q1->kind != NodeKind::kSup || q1->sort.kind != SortKind::kBallTuple) return {};
    const std::size_t n = q1->sort.width;
    const FormulaNode* q2 = q1->children[0].get();
    if (q2->kind != NodeKind::kInf || q2->sort.kind != SortKind::kBallTuple ||
        q2->sort.width != n)
        return {};
    const FormulaNode* q3 = q2->children[0].get();
    if (q3->kind != NodeKind::kInf || q3->sort.kind != SortKind::kPosBall) return {};
    const std::string& x = q1->name;
    const std::string& v = q2->name;
    const std::string& y = q3->name;

    const FormulaNode* top = q3->children[0].get();
    if (top->kind != NodeKind::kMax) return {};

    auto is_var = [](const FormulaNode* t, const std::string& name) {
        return t->kind == NodeKind::kVar && t->name == name;
    };

    const FormulaNode* left = top->children[0].get();
    if (left->kind != NodeKind::kNorm) return {};
    const FormulaNode* left_sub = left->children[0].get();
    if (left_sub->kind != NodeKind::kTermSub) return {};
    if (!is_var(left_sub->children[0].get(), x)) return {};
    const FormulaNode* vy = left_sub->children[1].get();
    if (vy->kind != NodeKind::kTermProduct || !is_var(vy->children[0].get(), v) ||
        !is_var(vy->children[1].get(), y))
        return {};

    const FormulaNode* right = top->children[1].get();
    if (right->kind != NodeKind::kNorm) return {};
    const FormulaNode* right_sub = right->children[0].get();
    if (right_sub->kind != NodeKind::kTermSub) return {};
    const FormulaNode* vv = right_sub->children[0].get();
    if (vv->kind != NodeKind::kTermProduct) return {};
    const FormulaNode* adj_v = vv->children[0].get();
    if (adj_v->kind != NodeKind::kAdjoint || !is_var(adj_v->children[0].get(), v)) return {};
    if (!is_var(vv->children[1].get(), v)) return {};
    if (right_sub->children[1]->kind != NodeKind::kOne) return {};
    return n;
}

ValueRange formula_range(const FormulaPtr& f) { return body_range(f); }

}  // namespace csrank
