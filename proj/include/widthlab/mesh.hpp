#pragma once

#include "widthlab/linalg.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace widthlab {

enum class NodeClass : int { Interior = 0, OuterBoundary = 1, Interface = 2 };

/// Conforming P1 triangulation. Triangles are counterclockwise, node classes
/// distinguish the outer boundary from an (optional) interior interface that
/// discretizes a reference inner boundary.
struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<NodeClass> node_class;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    double signed_area(int t) const {
        const auto& tri = triangles[t];
        const Vec2 e1 = nodes[tri[1]] - nodes[tri[0]];
        const Vec2 e2 = nodes[tri[2]] - nodes[tri[0]];
        return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    }

    /// Mean edge length; the mesh-size proxy used for quadrature densities.
    double mean_edge_length() const {
        double acc = 0.0;
        long cnt = 0;
        for (const auto& tri : triangles) {
            for (int e = 0; e < 3; ++e) {
                acc += (nodes[tri[e]] - nodes[tri[(e + 1) % 3]]).norm();
                ++cnt;
            }
        }
        return cnt ? acc / static_cast<double>(cnt) : 0.0;
    }

    std::vector<int> nodes_of_class(NodeClass c) const {
        std::vector<int> out;
        for (int i = 0; i < node_count(); ++i)
            if (node_class[i] == c) out.push_back(i);
        return out;
    }
};

namespace detail {

inline void check_mesh_basics(const Mesh& mesh) {
    const int n = mesh.node_count();
    if (static_cast<int>(mesh.node_class.size()) != n)
        throw std::invalid_argument("mesh: node_class size does not match node count");
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        for (int v : mesh.triangles[t])
            if (v < 0 || v >= n) throw std::invalid_argument("mesh: triangle node index out of range");
        if (mesh.signed_area(t) <= 0.0)
            throw std::runtime_error("mesh: triangle " + std::to_string(t) + " has non-positive area");
    }
}

/// Interface nodes must form a connected subgraph of the mesh edges.
inline void check_interface_connected(const Mesh& mesh) {
    std::vector<int> iface = mesh.nodes_of_class(NodeClass::Interface);
    if (iface.size() <= 1) return;
    std::vector<std::vector<int>> adj(mesh.node_count());
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            if (mesh.node_class[a] == NodeClass::Interface && mesh.node_class[b] == NodeClass::Interface) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        }
    }
    std::vector<char> seen(mesh.node_count(), 0);
    std::vector<int> stack{iface.front()};
    seen[iface.front()] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != iface.size())
        throw std::runtime_error("mesh: interface nodes are not edge-connected");
}

inline int snap_to_grid_line(double value, double lo, double step, int count, const char* axis) {
    const double rel = (value - lo) / step;
    const int idx = static_cast<int>(std::lround(rel));
    if (idx < 0 || idx > count || std::abs(rel - idx) > 1e-9) {
        std::ostringstream msg;
        msg << "interface coordinate " << axis << "=" << value
            << " does not lie on a grid line (grid step " << step << ")";
        throw std::invalid_argument(msg.str());
    }
    return idx;
}

}  // namespace detail

struct Rect {
    double x_lo, x_hi, y_lo, y_hi;
};

/// Interior interface on a rectangle mesh: either the edge set of an axis
/// aligned rectangle, or a full-width horizontal line x2 = y.
struct RectInterface {
    enum class Kind { RectangleEdges, HorizontalLine };
    Kind kind;
    Rect rectangle{};  // RectangleEdges
    double line_y = 0.0;  // HorizontalLine

    static RectInterface rectangle_edges(const Rect& r) { return {Kind::RectangleEdges, r, 0.0}; }
    static RectInterface horizontal_line(double y) { return {Kind::HorizontalLine, {}, y}; }
};

/// Structured crossed triangulation of a rectangle: nx-by-ny cells, the cell
/// diagonal alternating with the cell parity so the mesh has no directional
/// bias. Interface descriptors must land on grid lines after snapping.
inline Mesh build_rect_mesh(const Rect& rect, int nx, int ny,
                            const std::optional<RectInterface>& interface = std::nullopt) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("build_rect_mesh: nx, ny must be >= 2");
    if (!(rect.x_hi > rect.x_lo) || !(rect.y_hi > rect.y_lo))
        throw std::invalid_argument("build_rect_mesh: empty rectangle");
    const double hx = (rect.x_hi - rect.x_lo) / nx;
    const double hy = (rect.y_hi - rect.y_lo) / ny;

    // Snap the interface onto grid indices up front so misalignment is
    // rejected with the offending coordinate before any node is created.
    int line_j = -1;
    int ri_lo = -1, ri_hi = -1, rj_lo = -1, rj_hi = -1;
    if (interface) {
        if (interface->kind == RectInterface::Kind::HorizontalLine) {
            line_j = detail::snap_to_grid_line(interface->line_y, rect.y_lo, hy, ny, "x2");
            if (line_j <= 0 || line_j >= ny)
                throw std::invalid_argument("build_rect_mesh: interface line lies on the outer boundary");
        } else {
            const Rect& r = interface->rectangle;
            ri_lo = detail::snap_to_grid_line(r.x_lo, rect.x_lo, hx, nx, "x1");
            ri_hi = detail::snap_to_grid_line(r.x_hi, rect.x_lo, hx, nx, "x1");
            rj_lo = detail::snap_to_grid_line(r.y_lo, rect.y_lo, hy, ny, "x2");
            rj_hi = detail::snap_to_grid_line(r.y_hi, rect.y_lo, hy, ny, "x2");
            if (ri_lo >= ri_hi || rj_lo >= rj_hi)
                throw std::invalid_argument("build_rect_mesh: degenerate interface rectangle");
            if (ri_lo <= 0 || ri_hi >= nx || rj_lo <= 0 || rj_hi >= ny)
                throw std::invalid_argument("build_rect_mesh: interface rectangle touches the outer boundary");
        }
    }

    Mesh mesh;
    mesh.nodes.reserve((nx + 1) * (ny + 1));
    mesh.node_class.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            mesh.nodes.emplace_back(rect.x_lo + i * hx, rect.y_lo + j * hy);
            NodeClass cls = NodeClass::Interior;
            bool on_interface = false;
            if (line_j >= 0) {
                on_interface = (j == line_j);
            } else if (ri_lo >= 0) {
                const bool x_in = (i >= ri_lo && i <= ri_hi);
                const bool y_in = (j >= rj_lo && j <= rj_hi);
                on_interface = (x_in && (j == rj_lo || j == rj_hi)) || (y_in && (i == ri_lo || i == ri_hi));
            }
            if (on_interface)
                cls = NodeClass::Interface;
            else if (i == 0 || i == nx || j == 0 || j == ny)
                cls = NodeClass::OuterBoundary;
            mesh.node_class.push_back(cls);
        }
    }

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    mesh.triangles.reserve(2 * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                mesh.triangles.push_back({v00, v10, v11});
                mesh.triangles.push_back({v00, v11, v01});
            } else {
                mesh.triangles.push_back({v00, v10, v01});
                mesh.triangles.push_back({v10, v11, v01});
            }
        }
    }
    detail::check_mesh_basics(mesh);
    detail::check_interface_connected(mesh);
    return mesh;
}

struct Circle {
    Vec2 center;
    double radius;
};

/// Deterministic disk triangulation. Without an interface: a fan around the
/// origin with 8*2^L spokes and 2^L rings. With an interface circle: a fan
/// around the interface center up to the interface radius, then layered
/// transition quads from the interface polygon to the outer circle polygon
/// along rays through the interface center (the outer circle is star-shaped
/// about any interior point, so the rays never cross).
inline Mesh build_disk_mesh(double radius, int refinement,
                            const std::optional<Circle>& interface_circle = std::nullopt) {
    if (radius <= 0.0) throw std::invalid_argument("build_disk_mesh: radius must be positive");
    if (refinement < 0) throw std::invalid_argument("build_disk_mesh: refinement must be >= 0");
    const int scale = 1 << refinement;
    const int m = 8 * scale;  // angular resolution

    Mesh mesh;
    auto ring_angle = [m](int j) { return 2.0 * M_PI * j / m; };

    if (!interface_circle) {
        const int rings = scale;
        mesh.nodes.emplace_back(0.0, 0.0);
        mesh.node_class.push_back(NodeClass::Interior);
        for (int i = 1; i <= rings; ++i) {
            const double r = radius * i / rings;
            for (int j = 0; j < m; ++j)
                mesh.nodes.emplace_back(r * std::cos(ring_angle(j)), r * std::sin(ring_angle(j)));
            for (int j = 0; j < m; ++j)
                mesh.node_class.push_back(i == rings ? NodeClass::OuterBoundary : NodeClass::Interior);
        }
        auto rid = [m](int ring, int j) { return 1 + (ring - 1) * m + (j % m); };
        for (int j = 0; j < m; ++j) mesh.triangles.push_back({0, rid(1, j), rid(1, j + 1)});
        for (int i = 1; i < rings; ++i) {
            for (int j = 0; j < m; ++j) {
                const int a = rid(i, j), b = rid(i, j + 1), c = rid(i + 1, j + 1), d = rid(i + 1, j);
                if ((i + j) % 2 == 0) {
                    mesh.triangles.push_back({a, d, c});
                    mesh.triangles.push_back({a, c, b});
                } else {
                    mesh.triangles.push_back({a, d, b});
                    mesh.triangles.push_back({d, c, b});
                }
            }
        }
        detail::check_mesh_basics(mesh);
        return mesh;
    }

    const Vec2 c0 = interface_circle->center;
    const double ri = interface_circle->radius;
    if (ri <= 0.0) throw std::invalid_argument("build_disk_mesh: interface radius must be positive");
    if (c0.norm() + ri >= radius - 1e-12)
        throw std::invalid_argument("build_disk_mesh: interface circle touches the outer boundary");

    const int rings_in = scale;
    const int layers_out = 2 * scale;

    mesh.nodes.emplace_back(c0);
    mesh.node_class.push_back(NodeClass::Interior);
    for (int i = 1; i <= rings_in; ++i) {
        const double r = ri * i / rings_in;
        for (int j = 0; j < m; ++j)
            mesh.nodes.emplace_back(c0 + r * Vec2(std::cos(ring_angle(j)), std::sin(ring_angle(j))));
        for (int j = 0; j < m; ++j)
            mesh.node_class.push_back(i == rings_in ? NodeClass::Interface : NodeClass::Interior);
    }
    // Distance from c0 to the outer circle along direction theta.
    auto outer_reach = [&](double theta) {
        const Vec2 nu(std::cos(theta), std::sin(theta));
        const double proj = c0.dot(nu);
        return -proj + std::sqrt(proj * proj + radius * radius - c0.squaredNorm());
    };
    for (int i = 1; i <= layers_out; ++i) {
        const double t = static_cast<double>(i) / layers_out;
        for (int j = 0; j < m; ++j) {
            const double theta = ring_angle(j);
            const Vec2 nu(std::cos(theta), std::sin(theta));
            const Vec2 p_in = c0 + ri * nu;
            const Vec2 p_out = c0 + outer_reach(theta) * nu;
            mesh.nodes.emplace_back(p_in + t * (p_out - p_in));
        }
        for (int j = 0; j < m; ++j)
            mesh.node_class.push_back(i == layers_out ? NodeClass::OuterBoundary : NodeClass::Interior);
    }

    auto rid = [m](int ring, int j) { return 1 + (ring - 1) * m + (j % m); };  // ring 1..rings_in+layers_out
    for (int j = 0; j < m; ++j) mesh.triangles.push_back({0, rid(1, j), rid(1, j + 1)});
    const int total_rings = rings_in + layers_out;
    for (int i = 1; i < total_rings; ++i) {
        for (int j = 0; j < m; ++j) {
            const int a = rid(i, j), b = rid(i, j + 1), c = rid(i + 1, j + 1), d = rid(i + 1, j);
            if ((i + j) % 2 == 0) {
                mesh.triangles.push_back({a, d, c});
                mesh.triangles.push_back({a, c, b});
            } else {
                mesh.triangles.push_back({a, d, b});
                mesh.triangles.push_back({d, c, b});
            }
        }
    }
    detail::check_mesh_basics(mesh);
    detail::check_interface_connected(mesh);
    return mesh;
}

// Forward declaration; the full Transform lives in transforms.hpp.
struct Transform;

/// Moves every node through the transform, keeping connectivity and node
/// classes. Any inverted element is reported with its triangle index.
template <typename TransformLike>
inline Mesh map_mesh(const Mesh& mesh, const TransformLike& transform) {
    Mesh out = mesh;
    for (auto& p : out.nodes) p = transform.forward(p);
    for (int t = 0; t < out.triangle_count(); ++t) {
        if (out.signed_area(t) <= 0.0)
            throw std::runtime_error("map_mesh: inverted element at triangle " + std::to_string(t));
    }
    return out;
}

/// Plain-text mesh format:
///   nodes <N>
///   x y class            (N lines; class 0=interior 1=outer boundary 2=interface)
///   triangles <M>
///   i j k                (M lines, 0-based)
inline void export_mesh(const Mesh& mesh, std::ostream& os) {
    char buf[96];
    os << "nodes " << mesh.node_count() << "\n";
    for (int i = 0; i < mesh.node_count(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %d\n", mesh.nodes[i].x(), mesh.nodes[i].y(),
                      static_cast<int>(mesh.node_class[i]));
        os << buf;
    }
    os << "triangles " << mesh.triangle_count() << "\n";
    for (const auto& tri : mesh.triangles) os << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
}

inline void export_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_mesh: cannot open " + path);
    export_mesh(mesh, os);
}

inline Mesh import_mesh(std::istream& is) {
    std::string tag;
    int n = 0;
    if (!(is >> tag >> n) || tag != "nodes") throw std::runtime_error("import_mesh: expected 'nodes <N>'");
    Mesh mesh;
    mesh.nodes.resize(n);
    mesh.node_class.resize(n);
    for (int i = 0; i < n; ++i) {
        double x, y;
        int cls;
        if (!(is >> x >> y >> cls)) throw std::runtime_error("import_mesh: bad node line");
        mesh.nodes[i] = Vec2(x, y);
        if (cls < 0 || cls > 2) throw std::runtime_error("import_mesh: bad node class");
        mesh.node_class[i] = static_cast<NodeClass>(cls);
    }
    int mtri = 0;
    if (!(is >> tag >> mtri) || tag != "triangles")
        throw std::runtime_error("import_mesh: expected 'triangles <M>'");
    mesh.triangles.resize(mtri);
    for (int t = 0; t < mtri; ++t) {
        if (!(is >> mesh.triangles[t][0] >> mesh.triangles[t][1] >> mesh.triangles[t][2]))
            throw std::runtime_error("import_mesh: bad triangle line");
    }
    detail::check_mesh_basics(mesh);
    return mesh;
}

inline Mesh import_mesh(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("import_mesh: cannot open " + path);
    return import_mesh(is);
}

}  // namespace widthlab
