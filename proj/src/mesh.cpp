#include "csrank/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>

#include "csrank/error.hpp"

namespace csrank {

namespace {

double dist2d(const std::array<double, 2>& p, const std::array<double, 2>& q) {
    return std::hypot(p[0] - q[0], p[1] - q[1]);
}

double signed_area(const std::array<double, 2>& a, const std::array<double, 2>& b,
                   const std::array<double, 2>& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

}  // namespace

SimplicialMesh SimplicialMesh::interval(std::size_t resolution) {
    if (resolution == 0) throw PreconditionError("interval mesh needs at least one edge");
    SimplicialMesh mesh;
    mesh.vertices_.reserve(resolution + 1);
    for (std::size_t i = 0; i <= resolution; ++i) {
        mesh.vertices_.push_back({static_cast<double>(i) / static_cast<double>(resolution), 0.0});
    }
    for (std::size_t i = 0; i < resolution; ++i) {
        mesh.explicit_edges_.push_back({i, i + 1});
    }
    mesh.build_edges();
    mesh.validate();
    return mesh;
}

SimplicialMesh SimplicialMesh::disk(std::size_t resolution) {
    if (resolution < 3) throw PreconditionError("disk mesh needs a boundary cycle of length >= 3");
    SimplicialMesh mesh;
    const double two_pi = 2.0 * std::numbers::pi;
    const std::size_t rings =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(resolution / two_pi)));

    // Vertex 0 is the center; ring j in 1..rings holds ring_size(j) vertices.
    std::vector<std::size_t> ring_start(rings + 1, 0);
    std::vector<std::size_t> ring_size(rings + 1, 0);
    mesh.vertices_.push_back({0.0, 0.0});
    for (std::size_t j = 1; j <= rings; ++j) {
        std::size_t size = static_cast<std::size_t>(
            std::llround(static_cast<double>(resolution) * static_cast<double>(j) /
                         static_cast<double>(rings)));
        size = std::max<std::size_t>(3, size);
        ring_start[j] = mesh.vertices_.size();
        ring_size[j] = size;
        const double radius = static_cast<double>(j) / static_cast<double>(rings);
        for (std::size_t i = 0; i < size; ++i) {
            const double angle = two_pi * static_cast<double>(i) / static_cast<double>(size);
            mesh.vertices_.push_back({radius * std::cos(angle), radius * std::sin(angle)});
        }
    }

    auto add_triangle = [&mesh](std::size_t a, std::size_t b, std::size_t c) {
        if (signed_area(mesh.vertices_[a], mesh.vertices_[b], mesh.vertices_[c]) < 0.0) {
            std::swap(b, c);
        }
        mesh.triangles_.push_back({a, b, c});
    };

    // Fan from the center to the innermost ring.
    for (std::size_t i = 0; i < ring_size[1]; ++i) {
        add_triangle(0, ring_start[1] + i, ring_start[1] + (i + 1) % ring_size[1]);
    }

    // Stitch consecutive rings with an angle-ordered merge.
    for (std::size_t j = 1; j < rings; ++j) {
        const std::size_t n_in = ring_size[j];
        const std::size_t n_out = ring_size[j + 1];
        std::size_t i = 0;
        std::size_t k = 0;
        while (i < n_in || k < n_out) {
            bool advance_outer;
            if (i == n_in) {
                advance_outer = true;
            } else if (k == n_out) {
                advance_outer = false;
            } else {
                const double next_inner = static_cast<double>(i + 1) / static_cast<double>(n_in);
                const double next_outer = static_cast<double>(k + 1) / static_cast<double>(n_out);
                advance_outer = next_outer <= next_inner;
            }
            if (advance_outer) {
                add_triangle(ring_start[j + 1] + k, ring_start[j + 1] + (k + 1) % n_out,
                             ring_start[j] + (i % n_in));
                ++k;
            } else {
                add_triangle(ring_start[j] + i, ring_start[j] + (i + 1) % n_in,
                             ring_start[j + 1] + (k % n_out));
                ++i;
            }
        }
    }

    for (std::size_t i = 0; i < ring_size[rings]; ++i) {
        mesh.boundary_cycle_.push_back(ring_start[rings] + i);
    }
    mesh.build_edges();
    mesh.validate();
    return mesh;
}

SimplicialMesh SimplicialMesh::from_parts(std::vector<std::array<double, 2>> vertices,
                                          std::vector<std::array<std::size_t, 3>> triangles,
                                          std::vector<std::size_t> boundary_cycle) {
    SimplicialMesh mesh;
    mesh.vertices_ = std::move(vertices);
    mesh.triangles_ = std::move(triangles);
    mesh.boundary_cycle_ = std::move(boundary_cycle);
    for (auto& tri : mesh.triangles_) {
        for (std::size_t v : tri) {
            if (v >= mesh.vertices_.size()) {
                throw PreconditionError("triangle vertex index out of range");
            }
        }
        if (signed_area(mesh.vertices_[tri[0]], mesh.vertices_[tri[1]], mesh.vertices_[tri[2]]) <
            0.0) {
            std::swap(tri[1], tri[2]);
        }
    }
    mesh.build_edges();
    mesh.validate();
    return mesh;
}

void SimplicialMesh::build_edges() {
    std::set<std::array<std::size_t, 2>> edge_set;
    auto insert = [&edge_set](std::size_t a, std::size_t b) {
        if (a == b) throw PreconditionError("degenerate edge");
        if (a > b) std::swap(a, b);
        edge_set.insert({a, b});
    };
    for (const auto& tri : triangles_) {
        insert(tri[0], tri[1]);
        insert(tri[1], tri[2]);
        insert(tri[2], tri[0]);
    }
    for (const auto& e : explicit_edges_) insert(e[0], e[1]);
    edges_.assign(edge_set.begin(), edge_set.end());
    edge_lengths_.clear();
    edge_lengths_.reserve(edges_.size());
    for (const auto& e : edges_) {
        edge_lengths_.push_back(dist2d(vertices_[e[0]], vertices_[e[1]]));
    }
}

double SimplicialMesh::max_edge_length() const {
    double m = 0.0;
    for (double len : edge_lengths_) m = std::max(m, len);
    return m;
}

double SimplicialMesh::max_boundary_edge_length() const {
    if (boundary_cycle_.empty()) throw PreconditionError("mesh has no boundary cycle");
    double m = 0.0;
    for (std::size_t i = 0; i < boundary_cycle_.size(); ++i) {
        const std::size_t a = boundary_cycle_[i];
        const std::size_t b = boundary_cycle_[(i + 1) % boundary_cycle_.size()];
        m = std::max(m, dist2d(vertices_[a], vertices_[b]));
    }
    return m;
}

long SimplicialMesh::euler_characteristic() const {
    return static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) +
           static_cast<long>(triangles_.size());
}

std::vector<std::size_t> SimplicialMesh::path_order() const {
    if (two_dimensional()) throw PreconditionError("path order is defined for 1-d meshes only");
    std::vector<std::vector<std::size_t>> adjacency(vertices_.size());
    for (const auto& e : edges_) {
        adjacency[e[0]].push_back(e[1]);
        adjacency[e[1]].push_back(e[0]);
    }
    std::size_t start = vertices_.size();
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (adjacency[v].size() == 1) {
            start = v;
            break;
        }
    }
    if (start == vertices_.size()) throw ContractViolation("1-d mesh has no endpoint");
    std::vector<std::size_t> order;
    order.reserve(vertices_.size());
    std::size_t prev = vertices_.size();
    std::size_t cur = start;
    while (true) {
        order.push_back(cur);
        std::size_t next = vertices_.size();
        for (std::size_t nb : adjacency[cur]) {
            if (nb != prev) {
                next = nb;
                break;
            }
        }
        if (next == vertices_.size()) break;
        prev = cur;
        cur = next;
    }
    if (order.size() != vertices_.size()) throw ContractViolation("1-d mesh is not a single path");
    return order;
}

void SimplicialMesh::validate() const {
    if (vertices_.empty()) throw ContractViolation("mesh has no vertices");
    for (const auto& v : vertices_) {
        if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
            throw ContractViolation("mesh vertex is not finite");
        }
    }

    // Connectivity over the edge graph.
    std::vector<std::vector<std::size_t>> adjacency(vertices_.size());
    for (const auto& e : edges_) {
        if (e[0] >= vertices_.size() || e[1] >= vertices_.size()) {
            throw ContractViolation("edge index out of range");
        }
        adjacency[e[0]].push_back(e[1]);
        adjacency[e[1]].push_back(e[0]);
    }
    std::vector<char> seen(vertices_.size(), 0);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop();
        for (std::size_t nb : adjacency[v]) {
            if (!seen[nb]) {
                seen[nb] = 1;
                ++reached;
                frontier.push(nb);
            }
        }
    }
    if (reached != vertices_.size()) throw ContractViolation("mesh is not connected");

    if (!two_dimensional()) {
        if (!boundary_cycle_.empty()) {
            throw ContractViolation("1-d mesh must not carry a boundary cycle");
        }
        for (const auto& nbs : adjacency) {
            if (nbs.size() > 2) throw ContractViolation("1-d mesh vertex has degree > 2");
        }
        path_order();  // throws unless the mesh is a single path
        return;
    }

    // Triangles: nondegenerate, positively oriented, and their edges account
    // for every mesh edge.
    std::map<std::array<std::size_t, 2>, std::size_t> incidence;
    for (const auto& tri : triangles_) {
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
            throw ContractViolation("triangle with repeated vertex");
        }
        if (signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) <= 0.0) {
            throw ContractViolation("triangle is degenerate or negatively oriented");
        }
        for (int side = 0; side < 3; ++side) {
            std::size_t a = tri[side];
            std::size_t b = tri[(side + 1) % 3];
            if (a > b) std::swap(a, b);
            ++incidence[{a, b}];
        }
    }
    if (incidence.size() != edges_.size()) throw ContractViolation("stray edge outside triangles");

    std::set<std::array<std::size_t, 2>> boundary_edges;
    if (boundary_cycle_.size() < 3) throw ContractViolation("2-d mesh needs a boundary cycle");
    std::set<std::size_t> cycle_vertices(boundary_cycle_.begin(), boundary_cycle_.end());
    if (cycle_vertices.size() != boundary_cycle_.size()) {
        throw ContractViolation("boundary cycle revisits a vertex");
    }
    for (std::size_t i = 0; i < boundary_cycle_.size(); ++i) {
        std::size_t a = boundary_cycle_[i];
        std::size_t b = boundary_cycle_[(i + 1) % boundary_cycle_.size()];
        if (a > b) std::swap(a, b);
        boundary_edges.insert({a, b});
    }
    for (const auto& [edge, count] : incidence) {
        if (count > 2) throw ContractViolation("edge shared by more than two triangles");
        const bool on_boundary = boundary_edges.count(edge) > 0;
        if (count == 1 && !on_boundary) {
            throw ContractViolation("free edge not on the boundary cycle");
        }
        if (count == 2 && on_boundary) {
            throw ContractViolation("interior edge listed on the boundary cycle");
        }
    }
    if (euler_characteristic() != 1) {
        throw ContractViolation("mesh region is not disk-like");
    }
}

}  // namespace csrank
