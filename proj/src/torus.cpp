#include "qmirror/torus.hpp"

namespace qm {

namespace {

void check_compatible(const GradedSeries& a, const GradedSeries& b) {
    if (a.lat != b.lat || a.N != b.N)
        throw GradingMismatch("graded series with different grading or truncation");
}

}  // namespace

GradedSeries operator+(const GradedSeries& a, const GradedSeries& b) {
    check_compatible(a, b);
    GradedSeries r(*a.lat, a.N);
    for (auto& [c, v] : a.terms) r.add_term(c, v);
    for (auto& [c, v] : b.terms) r.add_term(c, v);
    return r;
}

GradedSeries operator-(const GradedSeries& a, const GradedSeries& b) {
    check_compatible(a, b);
    GradedSeries r(*a.lat, a.N);
    for (auto& [c, v] : a.terms) r.add_term(c, v);
    for (auto& [c, v] : b.terms) r.add_term(c, -v);
    return r;
}

GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) {
    check_compatible(a, b);
    GradedSeries r(*a.lat, a.N);
    for (auto& [c1, v1] : a.terms) {
        int d1 = a.lat->antiK(c1);
        for (auto& [c2, v2] : b.terms) {
            if (d1 + a.lat->antiK(c2) > a.N) continue;
            MultiDegree c = c1;
            for (size_t j = 0; j < c.size(); ++j) c[j] += c2[j];
            r.add_term(c, v1 * v2);
        }
    }
    return r;
}

void QTorusElement::add_term(int a, int b, const GradedSeries& s) {
    if (s.lat != lat || s.N != N)
        throw GradingMismatch("coefficient with different grading or truncation");
    if (s.is_zero()) return;
    auto [it, fresh] = terms.try_emplace({a, b}, s);
    if (!fresh) {
        it->second = it->second + s;
        if (it->second.is_zero()) terms.erase(it);
    }
}

GradedSeries QTorusElement::coeff(int a, int b) const {
    auto it = terms.find({a, b});
    return it == terms.end() ? GradedSeries(*lat, N) : it->second;
}

QTorusElement qt_mul(const QTorusElement& u, const QTorusElement& v) {
    if (u.lat != v.lat || u.N != v.N)
        throw GradingMismatch("quantum torus elements with different grading or truncation");
    QTorusElement r(*u.lat, u.N);
    for (auto& [m1, s1] : u.terms)
        for (auto& [m2, s2] : v.terms) {
            // zhat^m zhat^m' = q^(-det(m|m')/2) zhat^(m+m')
            long det = long(m1.first) * m2.second - long(m1.second) * m2.first;
            GradedSeries prod = s1 * s2;
            GradedSeries twisted(*u.lat, u.N);
            for (auto& [c, q] : prod.terms) twisted.add_term(c, q.shifted(int(-det)));
            r.add_term(m1.first + m2.first, m1.second + m2.second, twisted);
        }
    return r;
}

QTorusElement qt_pow(const QTorusElement& u, int n) {
    if (n < 1) throw QmError("qt_pow needs n >= 1");
    QTorusElement r = u;
    for (int i = 1; i < n; ++i) r = qt_mul(r, u);
    return r;
}

GradedSeries qt_const(const QTorusElement& u) { return u.coeff(0, 0); }

QTorusElement qt_scalar(const ClassLattice& lat, int N, const QLaurent& c) {
    QTorusElement r(lat, N);
    GradedSeries s(lat, N);
    s.add_term(lat.zero(), c);
    r.add_term(0, 0, s);
    return r;
}

Potential build_potential(const PolygonData& p, const ClassLattice& c, int N) {
    auto support = potential_support(p, c);
    Potential f;
    f.polygon = &p;
    f.classes = &c;
    f.N = N;
    f.element = QTorusElement(c, N);
    for (int k = 0; k < p.size(); ++k) {
        GradedSeries coeff(c, N);
        for (const MultiDegree& cls : support[size_t(k)]) {
            bool is_unit_ray = c.pos_basis[size_t(k)] < 0;
            if (!is_unit_ray && c.antiK(cls) <= 0)
                throw DegenerateGrading("potential coefficient class of degree <= 0 at ray " +
                                        std::to_string(k));
            coeff.add_term(cls, QLaurent(1));
        }
        f.element.add_term(p.points[size_t(k)].a, p.points[size_t(k)].b, coeff);
    }
    return f;
}

}  // namespace qm
