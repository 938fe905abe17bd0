#pragma once
// Reflexive-polygon and fan bookkeeping: boundary points, charge matrix,
// curve classes, anticanonical grading.
#include <string>
#include <utility>
#include <vector>

#include "qmirror/qlaurent.hpp"

namespace qm {

struct Vec2 {
    int a = 0, b = 0;
    friend bool operator==(const Vec2& u, const Vec2& v) {
        return u.a == v.a && u.b == v.b;
    }
};

inline long cross(const Vec2& u, const Vec2& v) {
    return long(u.a) * v.b - long(u.b) * v.a;
}

// Boundary lattice points of a reflexive polygon, cyclically ordered
// counterclockwise, together with vertex flags and, for each point, the
// lattice distances (m_k, n_k) to the previous / next vertex along its edge.
struct PolygonData {
    std::string name;
    std::vector<Vec2> points;
    std::vector<bool> vertex_flag;
    std::vector<std::pair<int, int>> edge_dist;  // (m_k, n_k); (0,0) at vertices

    int size() const { return int(points.size()); }
};

// Builds PolygonData from the cyclic point list; checks that consecutive
// points span the lattice (smoothness of the subdivided fan).
PolygonData make_polygon(const std::string& name, const std::vector<Vec2>& points);

// Named presets for the 16 reflexive polygons.
PolygonData polygon_preset(const std::string& name);
std::vector<std::string> polygon_preset_names();

// Checks that (1,0) and (0,1) are boundary points and that no boundary point
// has second coordinate > 1; returns the input unchanged.
const PolygonData& validate_convention(const PolygonData& p);

// Curve class of the surface, as coordinates over the basis classes beta_j.
using MultiDegree = std::vector<int>;

// Charge matrix in identity-normal form and the induced class data.  The
// class basis is indexed by the non-unit boundary points (in cyclic order);
// the rays (1,0) and (0,1) sit in the last two charge-matrix columns.
struct ClassLattice {
    int rank = 0;
    std::vector<int> basis_pos;  // basis index -> cyclic point index
    std::vector<int> pos_basis;  // cyclic point index -> basis index, or -1
    // charge[i][k] = D_{rho_k} . beta_i, columns ordered basis rays first,
    // then (1,0), then (0,1).
    std::vector<std::vector<int>> charge;
    std::vector<int> basis_degree;  // anticanonical degree of beta_j

    MultiDegree zero() const { return MultiDegree(size_t(rank), 0); }
    MultiDegree basis_class(int j) const {
        MultiDegree c = zero();
        c[size_t(j)] = 1;
        return c;
    }
    int antiK(const MultiDegree& c) const {
        long d = 0;
        for (int j = 0; j < rank; ++j) d += long(c[size_t(j)]) * basis_degree[size_t(j)];
        return int(d);
    }
    // D_{rho at cyclic position pos} . (class c)
    long divisor_dot(const PolygonData& p, int pos, const MultiDegree& c) const;

    bool same_as(const ClassLattice& o) const { return this == &o; }
};

ClassLattice build_classes(const PolygonData& p);

// The class beta~ of an edge-interior ray, as coordinates over the basis.
MultiDegree beta_tilde(const PolygonData& p, const ClassLattice& c, int pos);

// For each boundary point, the list of classes appearing in its potential
// coefficient (Definition of the toric potential), without truncation and
// without grading checks.
std::vector<std::vector<MultiDegree>> potential_support(const PolygonData& p,
                                                        const ClassLattice& c);

}  // namespace qm
