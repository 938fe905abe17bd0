#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmirror/geom.hpp"
#include "qmirror/torus.hpp"

using namespace qm;

namespace {

QRat binom_int(int n, int k) {
    if (k < 0 || k > n) return QRat(0);
    QRat r(1);
    for (int i = 0; i < k; ++i) r *= QRat(n - i, i + 1);
    return rat_canon(r);
}

}  // namespace

TEST_CASE("validate_convention") {
    SUBCASE("P2 triangle is fine") {
        CHECK_NOTHROW(validate_convention(polygon_preset("P2")));
    }
    SUBCASE("unit square is fine") {
        CHECK_NOTHROW(validate_convention(polygon_preset("P1xP1")));
    }
    SUBCASE("point with second coordinate 2 is rejected") {
        PolygonData p;
        p.points = {{0, 2}, {1, 0}, {-1, -1}};
        CHECK_THROWS_AS(validate_convention(p), ConventionViolated);
    }
    SUBCASE("missing unit points are rejected") {
        PolygonData p;
        p.points = {{-1, -1}, {1, 0}, {0, 1}};
        CHECK_NOTHROW(validate_convention(p));
        p.points = {{-1, -1}, {1, 1}, {0, 1}};
        CHECK_THROWS_AS(validate_convention(p), ConventionViolated);
        p.points = {{-1, -1}, {1, 0}, {1, 1}};
        CHECK_THROWS_AS(validate_convention(p), ConventionViolated);
    }
}

TEST_CASE("make_polygon rejects bad input") {
    CHECK_THROWS_AS(make_polygon("bad", {{1, 0}, {0, 1}}), SingularFan);
    CHECK_THROWS_AS(make_polygon("bad", {{2, 0}, {0, 1}, {-1, -1}}), SingularFan);
    // clockwise orientation
    CHECK_THROWS_AS(make_polygon("bad", {{0, 1}, {1, 0}, {-1, -1}}), SingularFan);
}

TEST_CASE("preset catalogue") {
    auto names = polygon_preset_names();
    CHECK(names.size() == 16);
    for (auto& nm : names) {
        PolygonData p = polygon_preset(nm);
        CHECK_NOTHROW(validate_convention(p));
        CHECK(p.size() >= 3);
        CHECK(p.size() <= 9);
    }
    CHECK_THROWS_AS(polygon_preset("P3"), QmError);
}

TEST_CASE("P2 classes") {
    PolygonData p = polygon_preset("P2");
    ClassLattice c = build_classes(p);
    CHECK(c.rank == 1);
    CHECK(c.basis_degree[0] == 3);
    // The line class meets every toric divisor once.
    for (int pos = 0; pos < 3; ++pos) CHECK(c.divisor_dot(p, pos, c.basis_class(0)) == 1);
}

TEST_CASE("P1xP1 classes") {
    PolygonData p = polygon_preset("P1xP1");
    ClassLattice c = build_classes(p);
    CHECK(c.rank == 2);
    CHECK(c.basis_degree == std::vector<int>{2, 2});
    // beta for ray (-1,0) meets the divisors of (1,0) and (-1,0) once and the
    // vertical divisors zero times (it is the class of the horizontal ruling).
    MultiDegree b0 = c.basis_class(0);
    CHECK(p.points[0] == Vec2{-1, 0});
    CHECK(c.divisor_dot(p, 0, b0) == 1);  // D_(-1,0)
    CHECK(c.divisor_dot(p, 2, b0) == 1);  // D_(1,0)
    CHECK(c.divisor_dot(p, 1, b0) == 0);  // D_(0,-1)
    CHECK(c.divisor_dot(p, 3, b0) == 0);  // D_(0,1)
    MultiDegree b1 = c.basis_class(1);
    CHECK(c.divisor_dot(p, 1, b1) == 1);
    CHECK(c.divisor_dot(p, 3, b1) == 1);
    CHECK(c.divisor_dot(p, 0, b1) == 0);
}

TEST_CASE("F2 classes and beta_tilde") {
    PolygonData p = polygon_preset("F2");
    ClassLattice c = build_classes(p);
    CHECK(c.rank == 2);
    // basis 0 = (-1,0) ray: F;  basis 1 = (-2,-1) ray: 2F+E
    CHECK(p.points[0] == Vec2{-1, 0});
    CHECK(p.points[1] == Vec2{-2, -1});
    CHECK(c.basis_degree == std::vector<int>{2, 4});
    CHECK_FALSE(p.vertex_flag[0]);  // (-1,0) is edge-interior
    CHECK(p.edge_dist[0] == std::pair<int, int>{1, 1});

    MultiDegree E = beta_tilde(p, c, 0);
    CHECK(E == MultiDegree{-2, 1});
    CHECK(c.antiK(E) == 0);
    // btilde . E = -2 (divisor of ray (-1,0)) and btilde . F = 1.
    CHECK(c.divisor_dot(p, 0, E) == -2);
    CHECK(c.divisor_dot(p, 1, E) == 1);

    // x^{-1} coefficient support: z^F + z^(F+E)
    auto support = potential_support(p, c);
    REQUIRE(support[0].size() == 2);
    CHECK(support[0][0] == MultiDegree{1, 0});
    MultiDegree FE{-1, 1};  // F + E in coordinates
    CHECK((support[0][1] == FE));
    CHECK(c.antiK(FE) == 2);
    // x^{-2} y^{-1} coefficient: the single vertex class 2F+E
    auto [m1, n1] = p.edge_dist[1];
    CHECK(m1 == 0);
    CHECK(n1 == 0);
    CHECK(support[1] == std::vector<MultiDegree>{MultiDegree{0, 1}});
}

TEST_CASE("charge rows annihilate ray generators") {
    for (auto& nm : polygon_preset_names()) {
        PolygonData p = polygon_preset(nm);
        ClassLattice c = build_classes(p);
        for (int j = 0; j < c.rank; ++j) {
            long sa = 0, sb = 0;
            for (int pos = 0; pos < p.size(); ++pos) {
                int col = c.pos_basis[size_t(pos)] >= 0 ? c.pos_basis[size_t(pos)]
                          : p.points[size_t(pos)] == Vec2{1, 0} ? c.rank
                                                                : c.rank + 1;
                long q = c.charge[size_t(j)][size_t(col)];
                sa += q * p.points[size_t(pos)].a;
                sb += q * p.points[size_t(pos)].b;
            }
            CHECK(sa == 0);
            CHECK(sb == 0);
        }
    }
}

TEST_CASE("anticanonical degree is the sum of divisor intersections") {
    for (auto& nm : polygon_preset_names()) {
        PolygonData p = polygon_preset(nm);
        ClassLattice c = build_classes(p);
        for (int j = 0; j < c.rank; ++j) {
            long s = 0;
            for (int pos = 0; pos < p.size(); ++pos)
                s += c.divisor_dot(p, pos, c.basis_class(j));
            CHECK(s == c.basis_degree[size_t(j)]);
        }
    }
}

TEST_CASE("beta_tilde has degree 0 and charge pattern (1,-2,1)") {
    for (auto& nm : polygon_preset_names()) {
        PolygonData p = polygon_preset(nm);
        ClassLattice c = build_classes(p);
        const int n = p.size();
        for (int pos = 0; pos < n; ++pos) {
            if (p.vertex_flag[size_t(pos)]) continue;
            MultiDegree t = beta_tilde(p, c, pos);
            CHECK(c.antiK(t) == 0);
            for (int q = 0; q < n; ++q) {
                long want = 0;
                if (q == pos) want = -2;
                if (q == (pos + 1) % n || q == (pos + n - 1) % n) want = 1;
                CHECK(c.divisor_dot(p, q, t) == want);
            }
        }
    }
}

TEST_CASE("summand count is binomial(edge length, m_k)") {
    for (auto& nm : polygon_preset_names()) {
        PolygonData p = polygon_preset(nm);
        ClassLattice c = build_classes(p);
        auto support = potential_support(p, c);
        for (int k = 0; k < p.size(); ++k) {
            auto [mk, nk] = p.edge_dist[size_t(k)];
            int ell = mk + nk;
            CHECK(QRat(long(support[size_t(k)].size())) == binom_int(ell, mk));
        }
    }
}

TEST_CASE("build_potential grading guard") {
    // Presets whose Convention form contains a boundary point of degree <= 0
    // in its coefficient class cannot carry the grading.
    for (auto& nm : {"X4b", "X4c", "X3"}) {
        PolygonData p = polygon_preset(nm);
        ClassLattice c = build_classes(p);
        CHECK_THROWS_AS(build_potential(p, c, 5), DegenerateGrading);
    }
    for (auto& nm : {"P2", "P1xP1", "F1", "F2", "dP2", "dP3", "X7", "X6a", "X6b", "X6c",
                     "X5a", "X5b", "X4a"}) {
        PolygonData p = polygon_preset(nm);
        ClassLattice c = build_classes(p);
        CHECK_NOTHROW(build_potential(p, c, 5));
    }
}

TEST_CASE("P2 and P1xP1 potentials") {
    SUBCASE("P2: f = X + Y + z^H zhat^(-1,-1)") {
        PolygonData p = polygon_preset("P2");
        ClassLattice c = build_classes(p);
        Potential f = build_potential(p, c, 6);
        REQUIRE(f.element.terms.size() == 3);
        GradedSeries one(c, 6);
        one.add_term(c.zero(), QLaurent(1));
        CHECK(f.element.coeff(1, 0) == one);
        CHECK(f.element.coeff(0, 1) == one);
        GradedSeries zH(c, 6);
        zH.add_term(c.basis_class(0), QLaurent(1));
        CHECK(f.element.coeff(-1, -1) == zH);
    }
    SUBCASE("P1xP1: f = X + Y + z^b1 X^-1 + z^b2 Y^-1") {
        PolygonData p = polygon_preset("P1xP1");
        ClassLattice c = build_classes(p);
        Potential f = build_potential(p, c, 6);
        REQUIRE(f.element.terms.size() == 4);
        GradedSeries z0(c, 6), z1(c, 6);
        z0.add_term(c.basis_class(0), QLaurent(1));
        z1.add_term(c.basis_class(1), QLaurent(1));
        CHECK(f.element.coeff(-1, 0) == z0);
        CHECK(f.element.coeff(0, -1) == z1);
    }
}
