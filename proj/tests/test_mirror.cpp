#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmirror/mirror.hpp"

using namespace qm;

namespace {

QLaurent laurent(std::initializer_list<std::pair<int, QRat>> terms) {
    QLaurent p;
    for (auto& [j, v] : terms) p.add_to(j, v);
    return p;
}

struct Surface {
    PolygonData p;
    ClassLattice c;
    Potential f;
    Surface(const std::string& name, int N)
        : p(polygon_preset(name)), c(build_classes(p)), f(build_potential(p, c, N)) {}
};

struct P2Pipeline {
    Surface s;
    GradedSeries a;
    MirrorMap Qmap, zmap;
    GradedSeries M;
    explicit P2Pipeline(int N)
        : s("P2", N),
          a(a_period_const(s.f, N)),
          Qmap(closed_mirror_map(a, s.c, N)),
          zmap(invert_mirror_map(Qmap, s.c, N)),
          M(open_mirror_map(zmap, a, s.c, N)) {}
};

}  // namespace

TEST_CASE("P2 closed mirror map anchors") {
    P2Pipeline p(9);
    const auto& Q = p.Qmap.component(0);
    CHECK(Q.coeff(MultiDegree{1}) == QLaurent(1));
    CHECK(Q.coeff(MultiDegree{2}) == laurent({{1, -3}, {-1, -3}}));
    CHECK(Q.coeff(MultiDegree{3}) ==
          laurent({{4, 3}, {2, 15}, {0, 27}, {-2, 15}, {-4, 3}}));
    // q = 1: Q = z - 6z^2 + 63z^3 - ...
    CHECK(Q.coeff(MultiDegree{2}).at_q1() == QRat(-6));
    CHECK(Q.coeff(MultiDegree{3}).at_q1() == QRat(63));
}

TEST_CASE("P2 inverse mirror map and round trips") {
    P2Pipeline p(9);
    const auto& z = p.zmap.component(0);
    CHECK(z.coeff(MultiDegree{1}) == QLaurent(1));
    CHECK(z.coeff(MultiDegree{2}) == laurent({{1, 3}, {-1, 3}}));
    CHECK(z.coeff(MultiDegree{3}) ==
          laurent({{4, -3}, {2, 3}, {0, 9}, {-2, 3}, {-4, -3}}));
    GradedSeries mono = gs_shift_class(gs_one(p.s.c, 9), p.s.c.basis_class(0));
    CHECK(gs_substitute(p.Qmap.component(0), p.zmap) == mono);
    CHECK(gs_substitute(p.zmap.component(0), p.Qmap) == mono);
}

TEST_CASE("P2 open mirror map anchors") {
    P2Pipeline p(9);
    CHECK(p.M.coeff(p.s.c.zero()) == QLaurent(1));
    CHECK(p.M.coeff(MultiDegree{1}) == laurent({{1, -1}, {-1, -1}}));
    CHECK(p.M.coeff(MultiDegree{2}) ==
          laurent({{4, 1}, {2, 1}, {0, 1}, {-2, 1}, {-4, 1}}));
    CHECK(p.M.coeff(MultiDegree{3}) == laurent({{9, -1},
                                                {7, -3},
                                                {5, -4},
                                                {3, -4},
                                                {1, -4},
                                                {-1, -4},
                                                {-3, -4},
                                                {-5, -4},
                                                {-7, -3},
                                                {-9, -1}}));
}

TEST_CASE("P2 open mirror map through degree 5: q = 1, palindromic, integral") {
    P2Pipeline p(15);
    long want[] = {-2, 5, -32, 286, -3038};
    for (int d = 1; d <= 5; ++d) {
        QLaurent v = p.M.coeff(MultiDegree{d});
        CHECK(v.at_q1() == QRat(want[d - 1]));
        CHECK(v.is_palindromic());
        for (int j = v.min_exp(); j <= v.max_exp(); ++j)
            CHECK(v.coeff(j).get_den() == 1);
    }
}

TEST_CASE("cross-class root consistency on rank-2 surfaces") {
    for (const char* name : {"P1xP1", "F2"}) {
        Surface s(name, 6);
        GradedSeries a = a_period_const(s.f, 6);
        MirrorMap Qmap = closed_mirror_map(a, s.c, 6);
        MirrorMap zmap = invert_mirror_map(Qmap, s.c, 6);
        GradedSeries M = open_mirror_map(zmap, a, s.c, 6);
        CHECK(M.coeff(s.c.zero()) == QLaurent(1));
        CHECK_FALSE((M - gs_one(s.c, 6)).is_zero());
        for (auto& [cls, v] : M.terms) CHECK(v.is_palindromic());
        // Round trip in every class component.
        for (int j = 0; j < s.c.rank; ++j) {
            GradedSeries mono = gs_shift_class(gs_one(s.c, 6), s.c.basis_class(j));
            CHECK(gs_substitute(Qmap.component(j), zmap) == mono);
        }
    }
}

TEST_CASE("theta_1 at infinity") {
    P2Pipeline p(9);
    ThetaSeries th = theta1_infinity(p.M, p.s.c, 9);
    CHECK(th.lead == 1);
    CHECK(th.coeff(1) == gs_one(p.s.c, 9));
    CHECK(th.coeff(0).is_zero());
    CHECK(th.coeff(-2).coeff(MultiDegree{1}) == laurent({{1, 1}, {-1, 1}}));
    CHECK(th.coeff(-5).coeff(MultiDegree{2}) ==
          laurent({{4, 1}, {2, 1}, {0, 1}, {-2, 1}, {-4, 1}}));
    CHECK(th.coeff(-8).coeff(MultiDegree{3}) == laurent({{9, 1},
                                                         {7, 3},
                                                         {5, 4},
                                                         {3, 4},
                                                         {1, 4},
                                                         {-1, 4},
                                                         {-3, 4},
                                                         {-5, 4},
                                                         {-7, 3},
                                                         {-9, 1}}));
}

TEST_CASE("theta_1 evaluated at ytilde is -1") {
    P2Pipeline p(12);
    ThetaSeries th = theta1_infinity(p.M, p.s.c, 12);
    GradedSeries yt = ytilde_from_a(p.a);
    CHECK(theta_eval(th, yt) == gs_one(p.s.c, 12) * QLaurent(-1));
}

TEST_CASE("log invariants") {
    P2Pipeline p(12);
    LogInvariantTable R = log_invariants_extract(p.M, 1, 12);
    CHECK(R.at(0, MultiDegree{1}) == QRat(4));
    CHECK(R.at(0, MultiDegree{2}) == QRat(25));
    CHECK(R.at(0, MultiDegree{4}) == QRat(3146));
    CHECK(R.at(1, MultiDegree{4}) == QRat(-18513));
    CHECK(R.at(1, MultiDegree{1}) == QRat(-1, 2));
}

TEST_CASE("alpha assembly from the log-invariant table") {
    P2Pipeline p(12);
    LogInvariantTable R = log_invariants_extract(p.M, 1, 12);
    SUBCASE("alpha_{1,2}^0 over classes of degree 3") {
        ThetaHbar a0 = theta_alpha_1n0(p.s.c, R, 2, 12);
        REQUIRE(a0.terms.count(0) == 1);
        const TSeries& v = a0.terms.at(0).at(MultiDegree{1});
        CHECK(v.coeff(0) == QRat(4));
        CHECK(v.coeff(2) == QRat(-1, 2));
    }
    SUBCASE("alpha_{3,1}^1 halves the invariants") {
        ThetaHbar a = theta_alpha_n1m(p.s.c, R, 3, 1, 12);
        const TSeries& v = a.terms.at(0).at(MultiDegree{1});
        CHECK(v.coeff(0) == QRat(2));
        CHECK(v.coeff(2) == QRat(-1, 4));
    }
    SUBCASE("alpha_{n,1}^n vanishes") {
        CHECK(theta_alpha_n1m(p.s.c, R, 2, 2, 12).is_zero());
    }
    SUBCASE("no classes of degree 2 on P2") {
        CHECK(theta_alpha_n1m(p.s.c, R, 2, 1, 12).is_zero());
    }
}

TEST_CASE("theta tower at z = 0 is y^n") {
    Surface s("P2", 3);
    ThetaSeries th1;
    th1.lat = &s.c;
    th1.N = 3;
    th1.lead = 1;
    th1.terms[1] = gs_one(s.c, 3);
    LogInvariantTable R;
    R.gmax = 0;
    auto thetas = theta_tower(th1, R, 4, 3);
    REQUIRE(thetas.size() == 5);
    for (int n = 0; n <= 4; ++n) {
        REQUIRE(thetas[size_t(n)].terms.size() == 1);
        auto& m = thetas[size_t(n)].terms.at(n);
        REQUIRE(m.size() == 1);
        CHECK(m.at(s.c.zero()) == TSeries::constant(1, 1));
    }
}

TEST_CASE("broken leading term is detected") {
    Surface s("P2", 3);
    ThetaSeries th1;
    th1.lat = &s.c;
    th1.N = 3;
    th1.lead = 1;
    th1.terms[1] = gs_one(s.c, 3) * QLaurent(2);
    LogInvariantTable R;
    R.gmax = 0;
    CHECK_THROWS_AS(theta_tower(th1, R, 2, 3), LeadingTermBroken);
}

TEST_CASE("full log potential equation holds") {
    P2Pipeline p(9);
    ThetaSeries th1 = theta1_infinity(p.M, p.s.c, 9);
    LogInvariantTable R = log_invariants_extract(p.M, 2, 9);
    auto thetas = theta_tower(th1, R, 10, 9);
    auto residual = check_full_log_potential(thetas, 9);
    REQUIRE(residual.size() == 10);
    for (auto& r : residual) CHECK(r.is_zero());
}
