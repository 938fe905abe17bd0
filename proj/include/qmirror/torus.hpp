#pragma once
// The quantum torus: twisted multiplication of zhat^m monomials with
// coefficients in graded curve-class series.
#include <map>
#include <utility>

#include "qmirror/geom.hpp"

namespace qm {

// Series over curve classes, graded by anticanonical degree and truncated at
// degree N.  Every stored class has degree in [0, N].
struct GradedSeries {
    const ClassLattice* lat = nullptr;
    int N = 0;
    std::map<MultiDegree, QLaurent> terms;

    GradedSeries() = default;
    GradedSeries(const ClassLattice& l, int n) : lat(&l), N(n) {}

    bool is_zero() const { return terms.empty(); }
    QLaurent coeff(const MultiDegree& c) const {
        auto it = terms.find(c);
        return it == terms.end() ? QLaurent() : it->second;
    }
    void add_term(const MultiDegree& c, const QLaurent& v) {
        if (v.is_zero()) return;
        int d = lat->antiK(c);
        if (d < 0) throw DegenerateGrading("class of negative anticanonical degree");
        if (d > N) return;
        auto [it, fresh] = terms.try_emplace(c, v);
        if (!fresh) {
            it->second += v;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    friend bool operator==(const GradedSeries& a, const GradedSeries& b) {
        return a.terms == b.terms;
    }
    friend bool operator!=(const GradedSeries& a, const GradedSeries& b) {
        return !(a == b);
    }

    friend GradedSeries operator+(const GradedSeries& a, const GradedSeries& b);
    friend GradedSeries operator-(const GradedSeries& a, const GradedSeries& b);
    friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b);
    friend GradedSeries operator*(const GradedSeries& a, const QLaurent& s) {
        GradedSeries r(*a.lat, a.N);
        for (auto& [c, v] : a.terms) r.add_term(c, v * s);
        return r;
    }
    friend GradedSeries operator*(const QLaurent& s, const GradedSeries& a) {
        return a * s;
    }
};

// Element of the quantum torus: finite sum of zhat^(a,b) monomials with
// GradedSeries coefficients.  zhat^m zhat^m' = q^(-det(m|m')/2) zhat^(m+m').
struct QTorusElement {
    const ClassLattice* lat = nullptr;
    int N = 0;
    std::map<std::pair<int, int>, GradedSeries> terms;

    QTorusElement() = default;
    QTorusElement(const ClassLattice& l, int n) : lat(&l), N(n) {}

    void add_term(int a, int b, const GradedSeries& s);
    GradedSeries coeff(int a, int b) const;

    friend bool operator==(const QTorusElement& u, const QTorusElement& v) {
        return u.terms == v.terms;
    }
};

QTorusElement qt_mul(const QTorusElement& u, const QTorusElement& v);
QTorusElement qt_pow(const QTorusElement& u, int n);
GradedSeries qt_const(const QTorusElement& u);
// The scalar c * zhat^(0,0) * z^0.
QTorusElement qt_scalar(const ClassLattice& lat, int N, const QLaurent& c);

// The toric potential as a quantum-torus element.
struct Potential {
    QTorusElement element;
    const PolygonData* polygon = nullptr;
    const ClassLattice* classes = nullptr;
    int N = 0;
};

Potential build_potential(const PolygonData& p, const ClassLattice& c, int N);

}  // namespace qm
