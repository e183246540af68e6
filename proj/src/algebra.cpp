#include "csrank/algebra.hpp"

#include <cmath>

#include "csrank/error.hpp"

namespace csrank {

Algebra::Algebra(AlgebraKind kind, std::vector<std::size_t> dims,
                 std::shared_ptr<const SimplicialMesh> mesh)
    : kind_(kind), block_dims_(std::move(dims)), mesh_(std::move(mesh)) {
    if (block_dims_.empty()) throw PreconditionError("algebra needs at least one fiber");
    for (std::size_t k : block_dims_) {
        if (k == 0) throw PreconditionError("fiber dimension must be >= 1");
    }
}

Algebra Algebra::full_matrix(std::size_t k) {
    return Algebra(AlgebraKind::FullMatrix, {k}, nullptr);
}

Algebra Algebra::direct_sum(std::vector<std::size_t> block_dims) {
    return Algebra(AlgebraKind::DirectSum, std::move(block_dims), nullptr);
}

Algebra Algebra::sampled_field(std::shared_ptr<const SimplicialMesh> mesh,
                               std::size_t fiber_dim) {
    if (!mesh) throw PreconditionError("sampled field needs a mesh");
    mesh->validate();
    return Algebra(AlgebraKind::SampledField, {fiber_dim}, std::move(mesh));
}

std::size_t Algebra::fiber_count() const {
    switch (kind_) {
        case AlgebraKind::FullMatrix:
            return 1;
        case AlgebraKind::DirectSum:
            return block_dims_.size();
        case AlgebraKind::SampledField:
            return mesh_->vertex_count();
    }
    throw ContractViolation("unknown algebra kind");
}

std::size_t Algebra::fiber_dim(std::size_t fiber) const {
    if (kind_ == AlgebraKind::DirectSum) {
        if (fiber >= block_dims_.size()) throw PreconditionError("fiber index out of range");
        return block_dims_[fiber];
    }
    if (fiber >= fiber_count()) throw PreconditionError("fiber index out of range");
    return block_dims_[0];
}

double Algebra::cover_radius() const {
    if (!is_field()) return 0.0;
    const double m = mesh_->max_edge_length();
    return mesh_->two_dimensional() ? m / std::sqrt(3.0) : m / 2.0;
}

double Algebra::max_edge() const { return is_field() ? mesh_->max_edge_length() : 0.0; }

bool Algebra::operator==(const Algebra& other) const {
    if (kind_ != other.kind_ || block_dims_ != other.block_dims_) return false;
    if (!is_field()) return true;
    if (mesh_ == other.mesh_) return true;
    return mesh_->vertices() == other.mesh_->vertices() &&
           mesh_->triangles() == other.mesh_->triangles() &&
           mesh_->boundary_cycle() == other.mesh_->boundary_cycle();
}

}  // namespace csrank
