#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "csrank/mesh.hpp"

namespace csrank {

enum class AlgebraKind { FullMatrix, DirectSum, SampledField };

// A represented algebra: k-by-k matrices, a finite direct sum of matrix
// blocks, or matrix-valued functions sampled on a mesh.  Elements are stored
// fiberwise; a "fiber" is one block (DirectSum) or one vertex (SampledField).
class Algebra {
public:
    static Algebra full_matrix(std::size_t k);
    static Algebra direct_sum(std::vector<std::size_t> block_dims);
    static Algebra sampled_field(std::shared_ptr<const SimplicialMesh> mesh, std::size_t fiber_dim);

    AlgebraKind kind() const { return kind_; }
    bool is_field() const { return kind_ == AlgebraKind::SampledField; }

    std::size_t fiber_count() const;
    std::size_t fiber_dim(std::size_t fiber) const;
    const std::vector<std::size_t>& block_dims() const { return block_dims_; }
    const std::shared_ptr<const SimplicialMesh>& mesh() const { return mesh_; }

    // Largest distance from a point of the meshed region to its nearest
    // vertex; 0 for matrix algebras.  Controls sampling slack.
    double cover_radius() const;
    // Edge-scale slack multiplier used by membership certificates.
    double max_edge() const;

    bool operator==(const Algebra& other) const;
    bool operator!=(const Algebra& other) const { return !(*this == other); }

private:
    Algebra(AlgebraKind kind, std::vector<std::size_t> dims,
            std::shared_ptr<const SimplicialMesh> mesh);

    AlgebraKind kind_;
    std::vector<std::size_t> block_dims_;  // FullMatrix/SampledField: single entry
    std::shared_ptr<const SimplicialMesh> mesh_;
};

}  // namespace csrank
