#include "widthlab/mesh.hpp"
#include "widthlab/transforms.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

using namespace widthlab;

TEST_CASE("rect mesh: smallest structured mesh") {
    const Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 2, 2);
    CHECK(mesh.node_count() == 9);
    CHECK(mesh.triangle_count() == 8);
    for (int t = 0; t < mesh.triangle_count(); ++t) CHECK(mesh.signed_area(t) > 0.0);
    // 4 corner + 4 edge-midpoint boundary nodes, 1 interior node.
    CHECK(mesh.nodes_of_class(NodeClass::OuterBoundary).size() == 8);
    CHECK(mesh.nodes_of_class(NodeClass::Interior).size() == 1);
}

TEST_CASE("rect mesh: rectangle interface nodes are the grid nodes on its edges") {
    const double pi = M_PI;
    const Mesh mesh = build_rect_mesh({-pi, pi, -pi, pi}, 8, 8,
                                      RectInterface::rectangle_edges({-pi / 2, pi / 2, -pi / 2, pi / 2}));
    // Oracle: enumerate grid nodes on the rectangle edge set.
    std::set<int> expected;
    const double h = 2 * pi / 8;
    for (int j = 0; j <= 8; ++j) {
        for (int i = 0; i <= 8; ++i) {
            const double x = -pi + i * h, y = -pi + j * h;
            const bool xin = x >= -pi / 2 - 1e-12 && x <= pi / 2 + 1e-12;
            const bool yin = y >= -pi / 2 - 1e-12 && y <= pi / 2 + 1e-12;
            const bool on_edge = (xin && (std::abs(y - pi / 2) < 1e-12 || std::abs(y + pi / 2) < 1e-12)) ||
                                 (yin && (std::abs(x - pi / 2) < 1e-12 || std::abs(x + pi / 2) < 1e-12));
            if (on_edge) expected.insert(j * 9 + i);
        }
    }
    std::set<int> got;
    for (int i : mesh.nodes_of_class(NodeClass::Interface)) got.insert(i);
    CHECK(got == expected);
    CHECK(got.size() == 16);  // 5 nodes per edge, corners shared
}

TEST_CASE("rect mesh: horizontal line interface node count") {
    const double pi = M_PI;
    const Mesh mesh =
        build_rect_mesh({-pi, pi, 0, pi}, 16, 8, RectInterface::horizontal_line(pi / 2));
    CHECK(mesh.nodes_of_class(NodeClass::Interface).size() == 17);
    for (int i : mesh.nodes_of_class(NodeClass::Interface))
        CHECK(std::abs(mesh.nodes[i].y() - pi / 2) < 1e-12);
}

TEST_CASE("rect mesh: misaligned interface is rejected with the coordinate") {
    const double bad = 0.3141;
    try {
        build_rect_mesh({0, 1, 0, 1}, 4, 4, RectInterface::horizontal_line(bad));
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("0.3141") != std::string::npos);
    }
}

TEST_CASE("disk mesh: coarse fan") {
    const Mesh mesh = build_disk_mesh(1.0, 0);
    CHECK(mesh.triangle_count() >= 8);
    for (int t = 0; t < mesh.triangle_count(); ++t) CHECK(mesh.signed_area(t) > 0.0);
}

TEST_CASE("disk mesh: interface circle nodes sit on the circle") {
    const Mesh mesh = build_disk_mesh(1.0, 2, Circle{{1.0 / 3.0, 0.0}, 1.0 / 3.0});
    const auto iface = mesh.nodes_of_class(NodeClass::Interface);
    REQUIRE(!iface.empty());
    for (int i : iface)
        CHECK(std::abs((mesh.nodes[i] - Vec2(1.0 / 3.0, 0.0)).norm() - 1.0 / 3.0) < 1e-10);
}

TEST_CASE("disk mesh: node count grows about 4x per refinement") {
    std::vector<int> counts;
    for (int lvl = 0; lvl <= 3; ++lvl) counts.push_back(build_disk_mesh(1.0, lvl).node_count());
    for (std::size_t k = 0; k + 1 < counts.size(); ++k) {
        const double ratio = static_cast<double>(counts[k + 1]) / counts[k];
        CHECK(ratio > 3.3);
        CHECK(ratio < 4.5);
    }
}

TEST_CASE("disk mesh: interface circle touching the boundary is rejected") {
    CHECK_THROWS_AS(build_disk_mesh(1.0, 1, Circle{{0.5, 0.0}, 0.5}), std::invalid_argument);
}

TEST_CASE("map_mesh: identity leaves the mesh unchanged bitwise") {
    const Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 3, 3);
    const Mesh mapped = map_mesh(mesh, identity_transform());
    for (int i = 0; i < mesh.node_count(); ++i) {
        CHECK(mapped.nodes[i].x() == mesh.nodes[i].x());
        CHECK(mapped.nodes[i].y() == mesh.nodes[i].y());
    }
    CHECK(mapped.triangles == mesh.triangles);
    CHECK(mapped.node_class == mesh.node_class);
}

TEST_CASE("map_mesh: rotation preserves node radii") {
    const Mesh mesh = build_disk_mesh(1.0, 2, Circle{{1.0 / 3.0, 0.0}, 1.0 / 3.0});
    const auto family = rotation_family();
    Eigen::VectorXd lambda(1);
    lambda << 0.7;
    const Mesh mapped = map_mesh(mesh, family.at(lambda));
    for (int i = 0; i < mesh.node_count(); ++i)
        CHECK(std::abs(mapped.nodes[i].norm() - mesh.nodes[i].norm()) < 1e-12);
    CHECK(mapped.node_class == mesh.node_class);
    CHECK(mapped.triangle_count() == mesh.triangle_count());
}

TEST_CASE("map_mesh: sine stretch moves the hole interface onto the stretched rectangle") {
    const double pi = M_PI;
    const Mesh mesh = build_rect_mesh({-pi, pi, -pi, pi}, 8, 8,
                                      RectInterface::rectangle_edges({-pi / 2, pi / 2, -pi / 2, pi / 2}));
    const auto family = sine_stretch_family();
    Eigen::VectorXd lambda(2);
    lambda << 0.3, -0.2;
    const Mesh mapped = map_mesh(mesh, family.at(lambda));
    // sin(+-pi/2) = +-1, so the hole half-widths become pi/2 + lambda_i.
    const double x_hi = pi / 2 + 0.3, y_hi = pi / 2 - 0.2;
    for (int i : mapped.nodes_of_class(NodeClass::Interface)) {
        const Vec2 p = mapped.nodes[i];
        const bool on_x_edge = std::abs(std::abs(p.x()) - x_hi) < 1e-12 && std::abs(p.y()) <= y_hi + 1e-12;
        const bool on_y_edge = std::abs(std::abs(p.y()) - y_hi) < 1e-12 && std::abs(p.x()) <= x_hi + 1e-12;
        CHECK((on_x_edge || on_y_edge));
    }
}

TEST_CASE("map_mesh: inverted element is reported with its triangle") {
    const Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 2, 2);
    struct Fold {
        Vec2 forward(const Vec2& p) const { return {std::abs(p.x() - 0.5), p.y()}; }
    };
    try {
        map_mesh(mesh, Fold{});
        FAIL("expected inverted-element error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("triangle") != std::string::npos);
    }
}

TEST_CASE("mesh text format round-trips") {
    const Mesh mesh = build_rect_mesh({-1, 2, 0, 1}, 3, 4, RectInterface::horizontal_line(0.5));
    std::stringstream ss;
    export_mesh(mesh, ss);
    const Mesh back = import_mesh(ss);
    REQUIRE(back.node_count() == mesh.node_count());
    REQUIRE(back.triangle_count() == mesh.triangle_count());
    for (int i = 0; i < mesh.node_count(); ++i) {
        CHECK(back.nodes[i].x() == mesh.nodes[i].x());
        CHECK(back.nodes[i].y() == mesh.nodes[i].y());
    }
    CHECK(back.node_class == mesh.node_class);
    CHECK(back.triangles == mesh.triangles);
}
