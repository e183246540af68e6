#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csrank/error.hpp"

namespace csrank {

// Prenex sentences over a represented algebra.
//
// Grammar (whitespace-insensitive, keywords case-sensitive):
//   sentence := quant+ body
//   quant    := ("sup" | "inf") IDENT ":" sort "."
//   sort     := "ball1(A^" INT ")" | "posball1(A)"
//   body     := "max(" body "," body ")" | "min(" body "," body ")"
//             | "tsub(" body "," body ")" | "norm(" term ")"
//             | SCALAR | SCALAR "*" body | body "+" body
//   term     := IDENT | "one" | term "+" term | SCALAR "*" term
//             | term "*" term | "adj(" term ")"
//             | "tuple(" term {"," term} ")" | "sub(" term "," term ")"
//
// tsub is truncated subtraction max(b1 - b2, 0).  Terms are sorted: a
// variable of sort ball1(A^n) is a width-n column, posball1(A) and "one" are
// single elements, adj turns columns into rows and back.  Products allow
// column * element, row * column (the pairing sum adj(a_i) * b_i), and
// element * element; sums and sub need equal sorts.

enum class SortKind { kBallTuple, kPosBall };

struct VarSort {
    SortKind kind = SortKind::kBallTuple;
    std::size_t width = 1;  // meaningful for kBallTuple
    bool operator==(const VarSort& o) const { return kind == o.kind && width == o.width; }
};

enum class TermSort { kScalar, kTuple, kCoTuple };

enum class NodeKind {
    // quantifiers
    kSup,
    kInf,
    // body connectives
    kMax,
    kMin,
    kTSub,
    kBodySum,
    kBodyScale,
    kConst,
    kNorm,
    // terms
    kVar,
    kOne,
    kTermSum,
    kTermSub,
    kTermScale,
    kTermProduct,
    kAdjoint,
    kTupleOf,
};

struct FormulaNode;
using FormulaPtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    NodeKind kind;
    std::string name;                          // kVar / quantifier binders
    VarSort sort{};                            // quantifiers
    double scalar = 0.0;                       // kConst, kBodyScale, kTermScale
    TermSort term_sort = TermSort::kScalar;    // resolved sort of term nodes
    std::size_t width = 1;                     // tuple width of term nodes
    std::vector<FormulaPtr> children;
};

// Parse failure carrying the byte offset of the offending token.
struct ParseError : ConfigError {
    std::size_t offset;
    ParseError(std::size_t at, const std::string& what)
        : ConfigError(what + " (at offset " + std::to_string(at) + ")"), offset(at) {}
};

// Total on the grammar above; anything else raises ParseError (syntax,
// unbound or rebound variables, sort mismatches, with position).
FormulaPtr parse_formula(const std::string& text);

// Canonical rendering: one space after each quantifier dot, none inside the
// body.  print_formula(parse_formula(t)) is a fixed point.
std::string print_formula(const FormulaPtr& f);

// sup_x inf_v inf_y max(norm(sub(x, v*y)), norm(sub(adj(v)*v, one))) with
// x, v of width n and y a positive contraction.
FormulaPtr build_phi_n(std::size_t n);

// Width n when the sentence has exactly the shape produced by build_phi_n
// (any variable names), nullopt otherwise.
std::optional<std::size_t> phi_shape(const FormulaPtr& f);

// Sound enclosure of the sentence value over the declared sorts, from the
// sort bounds alone (every variable has norm at most 1).
struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
};
ValueRange formula_range(const FormulaPtr& f);

}  // namespace csrank
