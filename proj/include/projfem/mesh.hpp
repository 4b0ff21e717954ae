#ifndef PROJFEM_MESH_HPP
#define PROJFEM_MESH_HPP

#include <array>
#include <string>
#include <vector>

namespace projfem {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// How each square cell of the structured grid is split in two.
enum class Diagonal { Right, Left, Alternating };

Diagonal diagonal_from_string(const std::string& name);
std::string to_string(Diagonal d);

/// Reference-to-physical affine map F(x^) = B x^ + b for one triangle,
/// with the quantities assembly needs cached.
struct AffineMap {
    std::array<std::array<double, 2>, 2> B;        // columns v1-v0, v2-v0
    std::array<double, 2> b;                       // v0
    std::array<std::array<double, 2>, 2> Binvt;    // inverse transpose
    double det = 0.0;                              // = 2 * area, positive
    double area = 0.0;
};

/// Conforming triangulation of the unit square. Immutable after build.
class TriMesh {
public:
    static TriMesh structured(int n, Diagonal diagonal = Diagonal::Right);

    int n() const { return n_; }
    Diagonal diagonal() const { return diagonal_; }
    double h() const { return 1.0 / n_; }

    int n_vertices() const { return static_cast<int>(vertices_.size()); }
    int n_triangles() const { return static_cast<int>(triangles_.size()); }
    int n_edges() const { return static_cast<int>(edges_.size()); }

    const Point& vertex(int v) const { return vertices_[v]; }
    const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
    const std::array<int, 2>& edge(int e) const { return edges_[e]; }
    /// Edge k of triangle t joins local vertices (k+1)%3 and (k+2)%3.
    const std::array<int, 3>& triangle_edges(int t) const {
        return triangle_edges_[t];
    }
    Point edge_midpoint(int e) const;

    bool vertex_on_boundary(int v) const { return boundary_vertex_[v]; }
    bool edge_on_boundary(int e) const { return boundary_edge_[e]; }

    const AffineMap& map(int t) const { return maps_[t]; }
    const std::vector<AffineMap>& maps() const { return maps_; }

    /// Barycentric coordinates of physical point p inside triangle t.
    std::array<double, 3> barycentric(int t, const Point& p) const;

private:
    TriMesh() = default;
    void build_edges();
    void build_maps();

    int n_ = 0;
    Diagonal diagonal_ = Diagonal::Right;
    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> triangle_edges_;
    std::vector<bool> boundary_vertex_;
    std::vector<bool> boundary_edge_;
    std::vector<AffineMap> maps_;
};

}  // namespace projfem

#endif
