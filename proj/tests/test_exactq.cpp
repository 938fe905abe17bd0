#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmirror/qlaurent.hpp"

using namespace qm;

namespace {

QLaurent random_laurent(std::mt19937& rng) {
    std::uniform_int_distribution<int> exp(-6, 6), num(-9, 9), den(1, 9), nterms(0, 5);
    QLaurent p;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) p.add_to(exp(rng), QRat(num(rng), den(rng)));
    return p;
}

}  // namespace

TEST_CASE("Laurent arithmetic basics") {
    QLaurent u = QLaurent::q_half(1), ui = QLaurent::q_half(-1);

    SUBCASE("(q^1/2+q^-1/2)^2 = q + 2 + q^-1") {
        QLaurent s = u + ui;
        QLaurent want;
        want.set(2, 1);
        want.set(0, 2);
        want.set(-2, 1);
        CHECK(s * s == want);
    }
    SUBCASE("(q - 2 + q^-1) + 2 = q + q^-1") {
        QLaurent p = z_of_q() + QLaurent(2);
        QLaurent want;
        want.set(2, 1);
        want.set(-2, 1);
        CHECK(p == want);
    }
    SUBCASE("difference of squares: (u-1/u)(u+1/u) = q - q^-1") {
        QLaurent want;
        want.set(2, 1);
        want.set(-2, -1);
        CHECK((u - ui) * (u + ui) == want);
    }
}

TEST_CASE("distributivity / commutativity / associativity on random inputs") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 100; ++i) {
        QLaurent a = random_laurent(rng), b = random_laurent(rng), c = random_laurent(rng);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("hbar_expand") {
    SUBCASE("q^1/2 + q^-1/2 = 2cos(hbar/2) = 2 - hbar^2/4 + hbar^4/192") {
        QLaurent p = QLaurent::q_half(1) + QLaurent::q_half(-1);
        HbarSeries h = hbar_expand(p, 2);
        CHECK(h.lead == 0);
        CHECK(h.coeff_h(0) == QRat(2));
        CHECK(h.coeff_h(2) == QRat(-1, 4));
        CHECK(h.coeff_h(4) == QRat(1, 192));
    }
    SUBCASE("independent factorial-sum oracle for 2cos(j hbar/2)") {
        // hbar^{2g} coefficient of q^{j/2}+q^{-j/2} is 2(-1)^g j^{2g}/(4^g (2g)!)
        for (int j = 1; j <= 5; ++j) {
            QLaurent p = QLaurent::q_half(j) + QLaurent::q_half(-j);
            HbarSeries h = hbar_expand(p, 4);
            for (int g = 0; g <= 4; ++g) {
                QRat fact(1);
                for (int i = 1; i <= 2 * g; ++i) fact *= i;
                QRat jpow(1);
                for (int i = 0; i < 2 * g; ++i) jpow *= j;
                QRat pow4(1);
                for (int i = 0; i < g; ++i) pow4 *= 4;
                QRat want = QRat(2) * jpow / (pow4 * fact);
                if (g % 2 == 1) want = -want;
                CHECK(h.coeff_h(2 * g) == want);
            }
        }
    }
    SUBCASE("constant 1") {
        HbarSeries h = hbar_expand(QLaurent(1), 1);
        CHECK(h.coeff_h(0) == QRat(1));
        CHECK(h.coeff_h(2) == QRat(0));
    }
    SUBCASE("antisymmetric input rejected") {
        QLaurent p;
        p.set(2, 1);
        p.set(-2, -1);  // q - q^-1
        CHECK_THROWS_AS(hbar_expand(p, 1), NonPalindromic);
    }
    SUBCASE("hbar^0 term equals q=1 evaluation for random palindromic p") {
        std::mt19937 rng(7);
        for (int i = 0; i < 50; ++i) {
            QLaurent half = random_laurent(rng);
            QLaurent p = half + half.adams(-1);  // force palindromic
            CHECK(hbar_expand(p, 3).coeff_h(0) == p.at_q1());
        }
    }
}

TEST_CASE("to_z_basis") {
    SUBCASE("defining relation") {
        ZPoly zp = to_z_basis(z_of_q());
        CHECK(zp.coeff(1) == QRat(1));
        CHECK(zp.coeffs.size() == 1);
    }
    SUBCASE("q + 1 + q^-1 = z + 3, verified by re-substitution") {
        QLaurent p;
        p.set(2, 1);
        p.set(0, 1);
        p.set(-2, 1);
        ZPoly zp = to_z_basis(p);
        CHECK(zp.coeff(1) == QRat(1));
        CHECK(zp.coeff(0) == QRat(3));
        CHECK(from_z_basis(zp) == p);
    }
    SUBCASE("round trip on random symmetric even-exponent inputs") {
        std::mt19937 rng(99);
        std::uniform_int_distribution<int> kd(0, 5), numd(-9, 9), dend(1, 9);
        for (int i = 0; i < 50; ++i) {
            ZPoly zp;
            for (int k = 0; k <= kd(rng); ++k) {
                QRat v = rat_canon(QRat(numd(rng), dend(rng)));
                if (v != 0) zp.coeffs[k] = v;
            }
            CHECK(to_z_basis(from_z_basis(zp)) == zp);
        }
    }
    SUBCASE("odd exponents rejected") {
        QLaurent p = QLaurent::q_half(1) + QLaurent::q_half(-1);
        CHECK_THROWS_AS(to_z_basis(p), NotInBasis);
    }
}

TEST_CASE("adams") {
    QLaurent u = QLaurent::q_half(1), ui = QLaurent::q_half(-1);
    SUBCASE("adams(q^1/2+q^-1/2, 2) = q + q^-1") {
        QLaurent want;
        want.set(2, 1);
        want.set(-2, 1);
        CHECK((u + ui).adams(2) == want);
    }
    SUBCASE("identity on constants") { CHECK(QLaurent(1).adams(7) == QLaurent(1)); }
    SUBCASE("adams(z, 2) = q^2 - 2 + q^-2") {
        QLaurent want;
        want.set(4, 1);
        want.set(0, -2);
        want.set(-4, 1);
        CHECK(z_of_q().adams(2) == want);
    }
    SUBCASE("adams composes multiplicatively") {
        std::mt19937 rng(3);
        for (int i = 0; i < 30; ++i) {
            QLaurent p = random_laurent(rng);
            CHECK(p.adams(2).adams(3) == p.adams(6));
        }
    }
}

TEST_CASE("RatFun") {
    QLaurent u = QLaurent::q_half(1), ui = QLaurent::q_half(-1);
    QLaurent q = QLaurent::q_half(2);

    SUBCASE("1/(u - 1/u)^2 equals 1/z cross-multiplied") {
        RatFun lhs(QLaurent(1), (u - ui) * (u - ui));
        RatFun rhs(QLaurent(1), z_of_q());
        CHECK(lhs == rhs);
    }
    SUBCASE("q^2/((q-1)(q^2-1)) arithmetic") {
        RatFun c2(q * q, (q - QLaurent(1)) * (q * q - QLaurent(1)));
        RatFun c11(q, (q - QLaurent(1)) * (q * q - QLaurent(1)));
        // C_(1,1) + C_(2) = 1/(u-1/u)^2
        RatFun sum = c2 + c11;
        CHECK(sum == RatFun(QLaurent(1), (u - ui) * (u - ui)));
        // C_(1,1) - C_(2) = -1/(q - q^-1)
        RatFun diff = c11 - c2;
        CHECK(diff == RatFun(QLaurent(-1), q - q.adams(-1)));
    }
    SUBCASE("gcd normalization cancels common factors") {
        QLaurent f = (q - QLaurent(1)) * (q + QLaurent(3));
        QLaurent g = (q - QLaurent(1)) * (q + QLaurent(5));
        RatFun r(f, g);
        CHECK(r.num() == (q + QLaurent(3)) * QRat(1));
        CHECK(r.den() == (q + QLaurent(5)) * QRat(1));
    }
    SUBCASE("field axioms on random rationals") {
        std::mt19937 rng(11);
        for (int i = 0; i < 25; ++i) {
            RatFun a(random_laurent(rng), z_of_q() + QLaurent(1));
            RatFun b(random_laurent(rng), QLaurent::q_half(2) + QLaurent(3));
            RatFun c(random_laurent(rng));
            CHECK((a + b) * c == a * c + b * c);
            if (!b.is_zero()) CHECK(a / b * b == a);
        }
    }
}

TEST_CASE("divide_exact") {
    QLaurent q = QLaurent::q_half(2);
    QLaurent a = (q - QLaurent(1)) * (q * q + QLaurent(2));
    CHECK(a.divide_exact(q - QLaurent(1)) == q * q + QLaurent(2));
    CHECK_THROWS_AS((a + QLaurent(1)).divide_exact(q - QLaurent(1)), NotInBasis);
}

TEST_CASE("JSON serialization sorted by half-exponent") {
    QLaurent p;
    p.set(1, QRat(-1));
    p.set(-1, QRat(-1));
    CHECK(p.to_json() == "[[-1,-1,1],[1,-1,1]]");
    CHECK(QLaurent().to_json() == "[]");
    QLaurent big;
    big.set(0, QRat(mpz_class("123456789012345678901234567890")));
    CHECK(big.to_json() == "[[0,123456789012345678901234567890,1]]");
}
