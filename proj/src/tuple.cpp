#include "csrank/tuple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"

namespace csrank {

Tuple::Tuple(std::vector<Element> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw PreconditionError("tuple needs at least one entry");
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        require_same_algebra(entries_[0].algebra(), entries_[i].algebra());
    }
}

Tuple Tuple::zero(const Algebra& algebra, std::size_t n) {
    if (n == 0) throw PreconditionError("tuple needs at least one entry");
    std::vector<Element> entries(n, Element::zero(algebra));
    return Tuple(std::move(entries));
}

ComplexMatrix Tuple::stack_fiber(std::size_t fiber) const {
    const std::size_t k = algebra().fiber_dim(fiber);
    ComplexMatrix stacked(entries_.size() * k, k);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        stacked.set_block(i * k, 0, entries_[i].fiber(fiber));
    }
    return stacked;
}

ComplexMatrix Tuple::gram_fiber(std::size_t fiber) const {
    const ComplexMatrix stacked = stack_fiber(fiber);
    return stacked.adjoint() * stacked;
}

double Tuple::norm() const {
    double sq = 0.0;
    for (std::size_t f = 0; f < algebra().fiber_count(); ++f) {
        sq = std::max(sq, op_norm(gram_fiber(f)));
    }
    return std::sqrt(std::max(0.0, sq));
}

double Tuple::sigma_min_sq() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < algebra().fiber_count(); ++f) {
        m = std::min(m, min_eig_gram(stack_fiber(f)));
    }
    return m;
}

double Tuple::stack_lipschitz() const {
    double sq = 0.0;
    for (const auto& e : entries_) sq += e.lipschitz() * e.lipschitz();
    return std::sqrt(sq);
}

bool Tuple::affine() const {
    for (const auto& e : entries_) {
        if (!e.affine()) return false;
    }
    return true;
}

double Tuple::norm_upper() const {
    if (affine()) return norm();
    return norm() + stack_lipschitz() * algebra().cover_radius();
}

bool Tuple::all_finite() const {
    for (const auto& e : entries_) {
        if (!e.all_finite()) return false;
    }
    return true;
}

Tuple& Tuple::operator+=(const Tuple& other) {
    if (entries_.size() != other.entries_.size()) {
        throw PreconditionError("tuple widths differ");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

Tuple& Tuple::operator-=(const Tuple& other) {
    if (entries_.size() != other.entries_.size()) {
        throw PreconditionError("tuple widths differ");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

Tuple& Tuple::operator*=(Complex scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

Tuple operator+(Tuple a, const Tuple& b) {
    a += b;
    return a;
}

Tuple operator-(Tuple a, const Tuple& b) {
    a -= b;
    return a;
}

Tuple operator*(Complex scalar, Tuple a) {
    a *= scalar;
    return a;
}

double tuple_norm(const Tuple& a) { return a.norm(); }

double tuple_dist(const Tuple& a, const Tuple& b) {
    Tuple diff = a;
    diff -= b;
    return diff.norm();
}

double tuple_dist_upper(const Tuple& a, const Tuple& b) {
    Tuple diff = a;
    diff -= b;
    return diff.norm_upper();
}

Tuple mul_element(const Tuple& a, const Element& g) {
    std::vector<Element> entries;
    entries.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) entries.push_back(mul(a.entry(i), g));
    return Tuple(std::move(entries));
}

Element inner(const Tuple& a, const Tuple& b) {
    if (a.size() != b.size()) throw PreconditionError("tuple widths differ");
    Element acc = mul(adjoint(a.entry(0)), b.entry(0));
    for (std::size_t i = 1; i < a.size(); ++i) {
        acc += mul(adjoint(a.entry(i)), b.entry(i));
    }
    return acc;
}

}  // namespace csrank
