#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace csrank {

// Simplicial mesh underlying a sampled continuous field.  Supports exactly
// two shapes of data: 1-dimensional path meshes (edges only) and
// 2-dimensional triangulated regions with a designated boundary cycle.
class SimplicialMesh {
public:
    // Uniform mesh of [0, 1] with `resolution` edges (resolution + 1 vertices).
    static SimplicialMesh interval(std::size_t resolution);

    // Triangulated unit disk whose boundary cycle has `resolution` vertices.
    // Built from concentric rings; ring j of m carries about resolution*j/m
    // vertices, so triangles stay close to equilateral.
    static SimplicialMesh disk(std::size_t resolution);

    static SimplicialMesh from_parts(std::vector<std::array<double, 2>> vertices,
                                     std::vector<std::array<std::size_t, 3>> triangles,
                                     std::vector<std::size_t> boundary_cycle);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t triangle_count() const { return triangles_.size(); }
    bool two_dimensional() const { return !triangles_.empty(); }

    const std::vector<std::array<double, 2>>& vertices() const { return vertices_; }
    const std::vector<std::array<std::size_t, 2>>& edges() const { return edges_; }
    const std::vector<double>& edge_lengths() const { return edge_lengths_; }
    const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
    const std::vector<std::size_t>& boundary_cycle() const { return boundary_cycle_; }

    double max_edge_length() const;
    double max_boundary_edge_length() const;

    // V - E + F; 1 for a disk-like region, so nonvanishing fields on it have
    // null-homotopic boundary loops.
    long euler_characteristic() const;

    // Vertices of a 1-dimensional mesh ordered along the path.
    std::vector<std::size_t> path_order() const;

    // Checks the structural invariants: every triangle edge is listed, the
    // boundary cycle is a closed simple cycle of edges each lying on exactly
    // one triangle, and the mesh is connected.  ContractViolation on failure.
    void validate() const;

private:
    SimplicialMesh() = default;
    void build_edges();

    std::vector<std::array<double, 2>> vertices_;
    std::vector<std::array<std::size_t, 2>> edges_;  // each sorted, list sorted
    std::vector<double> edge_lengths_;
    std::vector<std::array<std::size_t, 3>> triangles_;
    std::vector<std::size_t> boundary_cycle_;
    std::vector<std::array<std::size_t, 2>> explicit_edges_;  // 1-d meshes only
};

}  // namespace csrank
