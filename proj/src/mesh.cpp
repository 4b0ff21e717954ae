#include "projfem/mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace projfem {

Diagonal diagonal_from_string(const std::string& name) {
    if (name == "right") return Diagonal::Right;
    if (name == "left") return Diagonal::Left;
    if (name == "alternating") return Diagonal::Alternating;
    throw std::invalid_argument("unknown diagonal: " + name);
}

std::string to_string(Diagonal d) {
    switch (d) {
        case Diagonal::Right: return "right";
        case Diagonal::Left: return "left";
        case Diagonal::Alternating: return "alternating";
    }
    return "right";
}

TriMesh TriMesh::structured(int n, Diagonal diagonal) {
    if (n < 1) throw std::invalid_argument("TriMesh: n must be >= 1");
    TriMesh mesh;
    mesh.n_ = n;
    mesh.diagonal_ = diagonal;

    const int nv = n + 1;
    mesh.vertices_.reserve(static_cast<std::size_t>(nv) * nv);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh.vertices_.push_back(
                {static_cast<double>(i) / n, static_cast<double>(j) / n});
        }
    }
    auto vid = [nv](int i, int j) { return j * nv + i; };

    mesh.triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int a = vid(i, j);
            int b = vid(i + 1, j);
            int c = vid(i + 1, j + 1);
            int d = vid(i, j + 1);
            bool right = diagonal == Diagonal::Right ||
                         (diagonal == Diagonal::Alternating && (i + j) % 2 == 0);
            if (right) {
                // diagonal a-c, lower-left to upper-right
                mesh.triangles_.push_back({a, b, c});
                mesh.triangles_.push_back({a, c, d});
            } else {
                // diagonal b-d
                mesh.triangles_.push_back({a, b, d});
                mesh.triangles_.push_back({b, c, d});
            }
        }
    }

    mesh.boundary_vertex_.resize(mesh.vertices_.size());
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh.boundary_vertex_[vid(i, j)] =
                i == 0 || i == n || j == 0 || j == n;
        }
    }

    mesh.build_edges();
    mesh.build_maps();
    return mesh;
}

void TriMesh::build_edges() {
    std::map<std::pair<int, int>, int> edge_ids;
    std::vector<int> edge_tri_count;
    triangle_edges_.resize(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            int a = tri[(k + 1) % 3];
            int b = tri[(k + 2) % 3];
            auto key = std::minmax(a, b);
            auto [it, inserted] = edge_ids.try_emplace(key, n_edges());
            if (inserted) {
                edges_.push_back({key.first, key.second});
                edge_tri_count.push_back(0);
            }
            triangle_edges_[t][k] = it->second;
            ++edge_tri_count[it->second];
        }
    }
    boundary_edge_.resize(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edge_tri_count[e] != 1 && edge_tri_count[e] != 2) {
            throw std::runtime_error("TriMesh: nonconforming edge");
        }
        boundary_edge_[e] = edge_tri_count[e] == 1;
    }
}

void TriMesh::build_maps() {
    maps_.reserve(triangles_.size());
    for (const auto& tri : triangles_) {
        const Point& p0 = vertices_[tri[0]];
        const Point& p1 = vertices_[tri[1]];
        const Point& p2 = vertices_[tri[2]];
        AffineMap m;
        m.B = {{{p1.x - p0.x, p2.x - p0.x}, {p1.y - p0.y, p2.y - p0.y}}};
        m.b = {p0.x, p0.y};
        m.det = m.B[0][0] * m.B[1][1] - m.B[0][1] * m.B[1][0];
        if (m.det <= 0.0) {
            throw std::runtime_error("TriMesh: degenerate or flipped triangle");
        }
        m.area = 0.5 * m.det;
        const double inv = 1.0 / m.det;
        // (B^-1)^T
        m.Binvt = {{{m.B[1][1] * inv, -m.B[1][0] * inv},
                    {-m.B[0][1] * inv, m.B[0][0] * inv}}};
        maps_.push_back(m);
    }
}

Point TriMesh::edge_midpoint(int e) const {
    const auto& ed = edges_[e];
    const Point& a = vertices_[ed[0]];
    const Point& b = vertices_[ed[1]];
    return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

std::array<double, 3> TriMesh::barycentric(int t, const Point& p) const {
    const AffineMap& m = maps_[t];
    const double dx = p.x - m.b[0];
    const double dy = p.y - m.b[1];
    const double inv = 1.0 / m.det;
    const double l1 = inv * (m.B[1][1] * dx - m.B[0][1] * dy);
    const double l2 = inv * (-m.B[1][0] * dx + m.B[0][0] * dy);
    return {1.0 - l1 - l2, l1, l2};
}

}  // namespace projfem
