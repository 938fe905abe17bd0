#include "qmirror/periods.hpp"

#include <algorithm>

namespace qm {

namespace {

void check_compatible(const XLaurentSeries& a, const XLaurentSeries& b) {
    if (a.lat != b.lat || a.N != b.N || a.NX != b.NX)
        throw GradingMismatch("X-Laurent series with different grading or window");
}

bool is_zero_class(const MultiDegree& c) {
    return std::all_of(c.begin(), c.end(), [](int v) { return v == 0; });
}

// Inverse of a class-0 X-power series with constant term 1, through X^hi.
std::map<int, QLaurent> series0_inverse(const std::map<int, QLaurent>& u, int hi) {
    auto it0 = u.find(0);
    if (it0 == u.end() || it0->second != QLaurent(1))
        throw QmError("X-series inverse requires constant term 1");
    std::map<int, QLaurent> v;
    v[0] = QLaurent(1);
    for (int e = 1; e <= hi; ++e) {
        QLaurent s;
        for (auto& [k, uk] : u) {
            if (k < 1) continue;
            if (k > e) break;
            auto it = v.find(e - k);
            if (it != v.end()) s += uk * it->second;
        }
        if (!s.is_zero()) v[e] = -s;
    }
    return v;
}

}  // namespace

QLaurent XLaurentSeries::coeff(const MultiDegree& c, int e) const {
    auto it = terms.find(c);
    if (it == terms.end()) return QLaurent();
    auto jt = it->second.find(e);
    return jt == it->second.end() ? QLaurent() : jt->second;
}

std::map<int, QLaurent> XLaurentSeries::class_part(const MultiDegree& c) const {
    auto it = terms.find(c);
    return it == terms.end() ? std::map<int, QLaurent>() : it->second;
}

void XLaurentSeries::add_term(const MultiDegree& c, int e, const QLaurent& v) {
    if (v.is_zero()) return;
    int d = lat->antiK(c);
    if (d < 0) throw DegenerateGrading("class of negative anticanonical degree");
    if (d > N) return;
    if (e < -3 * d)
        throw XWindowOverflow("X-exponent " + std::to_string(e) +
                              " below window at class degree " + std::to_string(d));
    if (e + 3 * d > NX) return;
    auto& m = terms[c];
    auto [it, fresh] = m.try_emplace(e, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) m.erase(it);
    }
    if (m.empty()) terms.erase(c);
}

XLaurentSeries operator+(const XLaurentSeries& a, const XLaurentSeries& b) {
    check_compatible(a, b);
    XLaurentSeries r(*a.lat, a.N, a.NX);
    for (auto& [c, m] : a.terms)
        for (auto& [e, v] : m) r.add_term(c, e, v);
    for (auto& [c, m] : b.terms)
        for (auto& [e, v] : m) r.add_term(c, e, v);
    return r;
}

XLaurentSeries operator-(const XLaurentSeries& a, const XLaurentSeries& b) {
    check_compatible(a, b);
    XLaurentSeries r(*a.lat, a.N, a.NX);
    for (auto& [c, m] : a.terms)
        for (auto& [e, v] : m) r.add_term(c, e, v);
    for (auto& [c, m] : b.terms)
        for (auto& [e, v] : m) r.add_term(c, e, -v);
    return r;
}

XLaurentSeries operator*(const XLaurentSeries& a, const XLaurentSeries& b) {
    check_compatible(a, b);
    XLaurentSeries r(*a.lat, a.N, a.NX);
    for (auto& [c1, m1] : a.terms) {
        int d1 = a.lat->antiK(c1);
        for (auto& [c2, m2] : b.terms) {
            int d2 = a.lat->antiK(c2);
            int d = d1 + d2;
            if (d > a.N) continue;
            MultiDegree c = c1;
            for (size_t j = 0; j < c.size(); ++j) c[j] += c2[j];
            const int ehi = a.NX - 3 * d;
            for (auto& [e1, v1] : m1) {
                for (auto& [e2, v2] : m2) {
                    if (e1 + e2 > ehi) break;  // exponents ascend
                    r.add_term(c, e1 + e2, v1 * v2);
                }
            }
        }
    }
    return r;
}

XLaurentSeries operator*(const XLaurentSeries& a, const QLaurent& s) {
    XLaurentSeries r(*a.lat, a.N, a.NX);
    for (auto& [c, m] : a.terms)
        for (auto& [e, v] : m) r.add_term(c, e, v * s);
    return r;
}

XLaurentSeries xls_one(const ClassLattice& lat, int N, int NX) {
    XLaurentSeries r(lat, N, NX);
    r.add_term(lat.zero(), 0, QLaurent(1));
    return r;
}

XLaurentSeries xls_qshift(const XLaurentSeries& s, int i) {
    XLaurentSeries r(*s.lat, s.N, s.NX);
    for (auto& [c, m] : s.terms)
        for (auto& [e, v] : m) r.add_term(c, e, v.shifted(-2 * i * e));
    return r;
}

XLaurentSeries xls_inverse(const XLaurentSeries& s) {
    const ClassLattice& lat = *s.lat;
    auto inv0 = series0_inverse(s.class_part(lat.zero()), s.NX);
    XLaurentSeries I0(lat, s.N, s.NX);
    for (auto& [e, v] : inv0) I0.add_term(lat.zero(), e, v);
    XLaurentSeries one = xls_one(lat, s.N, s.NX);
    XLaurentSeries w = s * I0 - one;
    if (w.terms.count(lat.zero()))
        throw QmError("X-series inverse: unit part did not cancel");
    // s^(-1) = I0 * sum_k (-w)^k; w has positive class degree, so k <= N.
    XLaurentSeries acc = one, pw = one;
    for (int k = 1; k <= s.N; ++k) {
        pw = pw * w;
        if (pw.is_zero()) break;
        acc = (k % 2 == 1) ? acc - pw : acc + pw;
    }
    return I0 * acc;
}

GradedSeries xls_const(const XLaurentSeries& s) {
    GradedSeries r(*s.lat, s.N);
    for (auto& [c, m] : s.terms) {
        auto it = m.find(0);
        if (it != m.end()) r.add_term(c, it->second);
    }
    return r;
}

namespace detail {

std::vector<GradedSeries> const_powers(const Potential& f, int N) {
    std::vector<GradedSeries> cp;
    cp.assign(size_t(N) + 1, GradedSeries(*f.classes, N));
    QTorusElement pw = f.element;
    cp[1] = qt_const(pw);
    for (int n = 2; n <= N; ++n) {
        pw = qt_mul(pw, f.element);
        cp[size_t(n)] = qt_const(pw);
    }
    return cp;
}

// The period equation 1 = sum_k c_k(z) q^(a_k b_k / 2) X^(a_k) G_(b_k)(X)
// split into the Y-linear coefficient C (rays with b = 1), the Y-free part A
// (b = 0), and the rays with b = -m < 0, which act through
// G_(-m) = prod_{i=1..m} Y(q^(-i) X)^(-1).
struct PeriodEquation {
    XLaurentSeries C, A;
    struct NegRay {
        int m;  // -b
        XLaurentSeries coeff;
    };
    std::vector<NegRay> neg;
};

PeriodEquation split_equation(const Potential& f, int N) {
    validate_convention(*f.polygon);
    const ClassLattice& lat = *f.classes;
    PeriodEquation eq;
    eq.C = XLaurentSeries(lat, N);
    eq.A = XLaurentSeries(lat, N);
    for (auto& [m, s] : f.element.terms) {
        auto [a, b] = m;
        if (b > 1) throw ConventionViolated("potential has a Y-power above 1");
        XLaurentSeries term(lat, N);
        for (auto& [cls, v] : s.terms) term.add_term(cls, a, v.shifted(a * b));
        if (b == 1)
            eq.C = eq.C + term;
        else if (b == 0)
            eq.A = eq.A + term;
        else
            eq.neg.push_back({-b, term});
    }
    // Degree-0 sanity: the unit rays give C = 1 + ..., A = X + ... .
    if (eq.C.coeff(lat.zero(), 0) != QLaurent(1) ||
        eq.A.coeff(lat.zero(), 1) != QLaurent(1))
        throw ConventionViolated("unit rays missing from the potential");
    return eq;
}

XLaurentSeries eval_neg_rays(const PeriodEquation& eq, const XLaurentSeries& Y) {
    XLaurentSeries s(*Y.lat, Y.N, Y.NX);
    for (auto& ray : eq.neg) {
        XLaurentSeries prod = ray.coeff;
        for (int i = 1; i <= ray.m; ++i)
            prod = prod * xls_inverse(xls_qshift(Y, i));
        s = s + prod;
    }
    return s;
}

}  // namespace detail

GradedSeries a_period_const(const Potential& f, int N) {
    if (N < 1) throw QmError("a_period_const needs N >= 1");
    auto cp = detail::const_powers(f, N);
    GradedSeries a(*f.classes, N);
    for (int n = 1; n <= N; ++n) a = a + cp[size_t(n)] * QLaurent(QRat(-1, n));
    return a;
}

XLaurentSeries solve_Y(const Potential& f, int N) {
    const ClassLattice& lat = *f.classes;
    auto eq = detail::split_equation(f, N);
    XLaurentSeries Cinv = xls_inverse(eq.C);
    XLaurentSeries one = xls_one(lat, N);
    XLaurentSeries Y = one;
    Y.add_term(lat.zero(), 1, QLaurent(-1));
    for (int iter = 0; iter <= N; ++iter) {
        XLaurentSeries next = Cinv * (one - eq.A - detail::eval_neg_rays(eq, Y));
        if (next == Y) break;
        Y = next;
    }
    if (!period_equation_residual(f, Y).is_zero())
        throw QmError("period equation residual is nonzero after solve_Y");
    return Y;
}

XLaurentSeries period_equation_residual(const Potential& f, const XLaurentSeries& Y) {
    auto eq = detail::split_equation(f, Y.N);
    return xls_one(*Y.lat, Y.N, Y.NX) - eq.A - eq.C * Y - detail::eval_neg_rays(eq, Y);
}

GradedSeries a_period_wavefunction(const Potential& f, int N) {
    const ClassLattice& lat = *f.classes;
    XLaurentSeries Y = solve_Y(f, N);
    // Y = (1 - X)(1 + w) with w of positive class degree, and
    // Const_X log(1 - X) = 0, so a = Const_X sum_k (-1)^(k+1) w^k / k.
    auto inv0 = series0_inverse(Y.class_part(lat.zero()), Y.NX);
    XLaurentSeries I0(lat, N, Y.NX);
    for (auto& [e, v] : inv0) I0.add_term(lat.zero(), e, v);
    XLaurentSeries w = Y * I0 - xls_one(lat, N, Y.NX);
    if (w.terms.count(lat.zero()))
        throw QmError("wavefunction ratio is not 1 - X at class degree 0");
    GradedSeries a(lat, N);
    XLaurentSeries pw = w;
    for (int k = 1; k <= N && !pw.is_zero(); ++k) {
        a = a + xls_const(pw) * QLaurent(QRat(k % 2 == 1 ? 1 : -1, k));
        pw = pw * w;
    }
    return a;
}

GradedSeries apply_D(const GradedSeries& s) {
    GradedSeries r(*s.lat, s.N);
    for (auto& [c, v] : s.terms) r.add_term(c, v * QRat(s.lat->antiK(c)));
    return r;
}

GradedSeries classical_period(const Potential& f, int N) {
    auto cp = detail::const_powers(f, N);
    GradedSeries pi(*f.classes, N), a(*f.classes, N);
    for (int n = 1; n <= N; ++n) {
        pi = pi + cp[size_t(n)];
        a = a + cp[size_t(n)] * QLaurent(QRat(-1, n));
    }
    if (!(pi == apply_D(a) * QLaurent(-1)))
        throw QmError("classical period disagrees with -Da");
    return pi;
}

DescendantTable descendants_extract(const GradedSeries& pi, int g_max) {
    DescendantTable t;
    for (auto& [cls, v] : pi.terms) {
        if (is_zero_class(cls)) continue;
        int dE = pi.lat->antiK(cls);
        HbarSeries h = hbar_expand(v, g_max);
        QRat fact(1);
        for (int i = 2; i <= dE; ++i) fact *= i;
        for (int g = 0; g <= g_max; ++g)
            t[{g, cls}] = rat_canon(h.coeff_h(2 * g) / fact);
    }
    return t;
}

}  // namespace qm
