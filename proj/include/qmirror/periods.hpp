#pragma once
// The quantum A-period by two independent algorithms (constant terms of powers
// of the potential, and the wavefunction ratio Y(X)), the q-refined classical
// period, and descendant-invariant extraction.
#include <map>
#include <utility>
#include <vector>

#include "qmirror/torus.hpp"

namespace qm {

// Laurent polynomial in X per curve class, truncated in class degree (<= N)
// and in a graded X-window: a term X^e at class degree d is kept only when
//   -3d <= e   and   e + 3d <= NX.
// Both bounds are additive under multiplication, so arithmetic is exact
// modulo the truncation ideal; exponents below -3d raise rather than
// truncate silently.
struct XLaurentSeries {
    const ClassLattice* lat = nullptr;
    int N = 0;   // class-degree truncation
    int NX = 0;  // X-window parameter; default 3N keeps X^0 exact through N

    std::map<MultiDegree, std::map<int, QLaurent>> terms;

    XLaurentSeries() = default;
    XLaurentSeries(const ClassLattice& l, int n, int nx = -1)
        : lat(&l), N(n), NX(nx < 0 ? 3 * n : nx) {}

    bool is_zero() const { return terms.empty(); }
    QLaurent coeff(const MultiDegree& c, int e) const;
    // The X-series at a single class (empty map when absent).
    std::map<int, QLaurent> class_part(const MultiDegree& c) const;
    void add_term(const MultiDegree& c, int e, const QLaurent& v);

    friend bool operator==(const XLaurentSeries& a, const XLaurentSeries& b) {
        return a.terms == b.terms;
    }
    friend bool operator!=(const XLaurentSeries& a, const XLaurentSeries& b) {
        return !(a == b);
    }

    friend XLaurentSeries operator+(const XLaurentSeries& a, const XLaurentSeries& b);
    friend XLaurentSeries operator-(const XLaurentSeries& a, const XLaurentSeries& b);
    friend XLaurentSeries operator*(const XLaurentSeries& a, const XLaurentSeries& b);
    friend XLaurentSeries operator*(const XLaurentSeries& a, const QLaurent& s);
};

// The constant 1.
XLaurentSeries xls_one(const ClassLattice& lat, int N, int NX = -1);
// Substitution X -> q^(-i) X.
XLaurentSeries xls_qshift(const XLaurentSeries& s, int i);
// Multiplicative inverse; requires the class-0 part to have constant term 1.
XLaurentSeries xls_inverse(const XLaurentSeries& s);
// The X^0 coefficient per class.
GradedSeries xls_const(const XLaurentSeries& s);

// a(z,q) = -sum_{n>0} (1/n) Const(f^n), exact through anticanonical degree N.
GradedSeries a_period_const(const Potential& f, int N);

// The unique solution of the quantized curve equation p(X, Y(X)) = 0 with
// Y = 1 - X + (positive class degree).
XLaurentSeries solve_Y(const Potential& f, int N);

// The residual 1 - sum of ray terms evaluated at Y (zero iff Y solves the
// period equation through truncation).
XLaurentSeries period_equation_residual(const Potential& f, const XLaurentSeries& Y);

// a(z,q) = Const_X(log Y(X)); must equal a_period_const.
GradedSeries a_period_wavefunction(const Potential& f, int N);

// D on series: the z^beta coefficient is scaled by the anticanonical degree.
GradedSeries apply_D(const GradedSeries& s);

// pi(z,q) = sum_{n>0} Const(f^n); asserted equal to -Da(z,q).
GradedSeries classical_period(const Potential& f, int N);

// (g, beta) -> the hbar^(2g) coefficient of pi's z^beta term divided by
// (beta . E)!.  The zero class carries no entry.
using DescendantTable = std::map<std::pair<int, MultiDegree>, QRat>;
DescendantTable descendants_extract(const GradedSeries& pi, int g_max);

namespace detail {
// Const(f^n) for n = 1..N (index 0 unused); each is homogeneous of degree n.
std::vector<GradedSeries> const_powers(const Potential& f, int N);
}  // namespace detail

}  // namespace qm
