#include "qmirror/geom.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qm {

namespace {

std::string pt_str(const Vec2& v) {
    std::ostringstream os;
    os << "(" << v.a << "," << v.b << ")";
    return os.str();
}

}  // namespace

PolygonData make_polygon(const std::string& name, const std::vector<Vec2>& points) {
    const int n = int(points.size());
    if (n < 3) throw SingularFan("polygon needs at least 3 boundary points");
    for (int k = 0; k < n; ++k) {
        const Vec2& u = points[size_t(k)];
        if (u.a == 0 && u.b == 0) throw SingularFan("origin is not a boundary point");
        if (std::gcd(u.a, u.b) != 1)
            throw SingularFan("non-primitive boundary point " + pt_str(u));
        for (int j = k + 1; j < n; ++j)
            if (points[size_t(j)] == u)
                throw SingularFan("repeated boundary point " + pt_str(u));
    }
    // Consecutive boundary points of a reflexive polygon, counterclockwise,
    // span the lattice with determinant exactly 1.
    for (int k = 0; k < n; ++k) {
        long d = cross(points[size_t(k)], points[size_t((k + 1) % n)]);
        if (d != 1)
            throw SingularFan("adjacent rays " + pt_str(points[size_t(k)]) + ", " +
                              pt_str(points[size_t((k + 1) % n)]) +
                              " do not span the lattice");
    }

    PolygonData p;
    p.name = name;
    p.points = points;
    p.vertex_flag.assign(size_t(n), false);
    for (int k = 0; k < n; ++k) {
        const Vec2& prv = points[size_t((k + n - 1) % n)];
        const Vec2& cur = points[size_t(k)];
        const Vec2& nxt = points[size_t((k + 1) % n)];
        Vec2 e1{cur.a - prv.a, cur.b - prv.b}, e2{nxt.a - cur.a, nxt.b - cur.b};
        long turn = cross(e1, e2);
        if (turn < 0) throw SingularFan("boundary is not convex counterclockwise");
        p.vertex_flag[size_t(k)] = (turn != 0);
    }
    if (std::count(p.vertex_flag.begin(), p.vertex_flag.end(), true) < 3)
        throw SingularFan("fewer than 3 vertices");

    p.edge_dist.assign(size_t(n), {0, 0});
    for (int k = 0; k < n; ++k) {
        if (p.vertex_flag[size_t(k)]) continue;
        int m = 0, j = k;
        while (!p.vertex_flag[size_t(j)]) {
            j = (j + n - 1) % n;
            ++m;
        }
        int nn = 0;
        j = k;
        while (!p.vertex_flag[size_t(j)]) {
            j = (j + 1) % n;
            ++nn;
        }
        p.edge_dist[size_t(k)] = {m, nn};
    }
    return p;
}

const PolygonData& validate_convention(const PolygonData& p) {
    bool has10 = false, has01 = false;
    for (const Vec2& v : p.points) {
        if (v == Vec2{1, 0}) has10 = true;
        if (v == Vec2{0, 1}) has01 = true;
        if (v.b > 1)
            throw ConventionViolated("boundary point " + pt_str(v) +
                                     " has second coordinate > 1");
    }
    if (!has10) throw ConventionViolated("boundary does not contain (1,0)");
    if (!has01) throw ConventionViolated("boundary does not contain (0,1)");
    return p;
}

PolygonData polygon_preset(const std::string& name) {
    using V = std::vector<Vec2>;
    static const std::vector<std::pair<std::string, V>> presets = {
        {"P2", {{-1, -1}, {1, 0}, {0, 1}}},
        {"P1xP1", {{-1, 0}, {0, -1}, {1, 0}, {0, 1}}},
        {"F1", {{-1, 0}, {-1, -1}, {1, 0}, {0, 1}}},
        {"F2", {{-1, 0}, {-2, -1}, {1, 0}, {0, 1}}},
        {"dP2", {{-1, 0}, {-1, -1}, {0, -1}, {1, 0}, {0, 1}}},
        {"dP3", {{-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}}},
        {"X7", {{-1, 1}, {-2, 1}, {1, -1}, {1, 0}, {0, 1}}},
        {"X6a", {{-1, -1}, {-2, -3}, {-1, -2}, {0, -1}, {1, 0}, {0, 1}}},
        {"X6b", {{-1, 0}, {-2, -1}, {-1, -1}, {0, -1}, {1, 0}, {0, 1}}},
        {"X6c", {{-1, 1}, {-2, 1}, {-1, 0}, {1, -1}, {1, 0}, {0, 1}}},
        {"X5a", {{-1, 0}, {-2, -1}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {0, 1}}},
        {"X5b", {{-1, 1}, {-2, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}}},
        {"X4a", {{-1, 1}, {-2, 1}, {-1, 0}, {0, -1}, {1, -2}, {1, -1}, {1, 0}, {0, 1}}},
        {"X4b", {{-1, 1}, {-2, 1}, {-3, 1}, {-4, 1}, {-1, 0}, {2, -1}, {1, 0}, {0, 1}}},
        {"X4c", {{-1, 1}, {-2, 1}, {-1, 0}, {0, -1}, {1, -1}, {2, -1}, {1, 0}, {0, 1}}},
        {"X3",
         {{-1, 1}, {-2, 1}, {-1, 0}, {0, -1}, {1, -2}, {1, -1}, {1, 0}, {1, 1}, {0, 1}}},
    };
    for (auto& [nm, pts] : presets)
        if (nm == name) return make_polygon(nm, pts);
    throw QmError("unknown polygon preset: " + name);
}

std::vector<std::string> polygon_preset_names() {
    return {"P2",  "P1xP1", "F1",  "F2",  "dP2", "dP3", "X7",  "X6a",
            "X6b", "X6c",   "X5a", "X5b", "X4a", "X4b", "X4c", "X3"};
}

long ClassLattice::divisor_dot(const PolygonData& p, int pos, const MultiDegree& c) const {
    // Column index of the ray at cyclic position pos in the charge matrix.
    int col;
    if (pos_basis[size_t(pos)] >= 0) {
        col = pos_basis[size_t(pos)];
    } else {
        col = (p.points[size_t(pos)] == Vec2{1, 0}) ? rank : rank + 1;
    }
    long d = 0;
    for (int j = 0; j < rank; ++j)
        d += long(c[size_t(j)]) * charge[size_t(j)][size_t(col)];
    return d;
}

ClassLattice build_classes(const PolygonData& p) {
    const int n = p.size();
    ClassLattice c;
    c.pos_basis.assign(size_t(n), -1);
    for (int k = 0; k < n; ++k) {
        const Vec2& v = p.points[size_t(k)];
        if (v == Vec2{1, 0} || v == Vec2{0, 1}) continue;
        c.pos_basis[size_t(k)] = int(c.basis_pos.size());
        c.basis_pos.push_back(k);
    }
    c.rank = int(c.basis_pos.size());
    if (c.rank + 2 != n) throw SingularFan("expected exactly the two unit rays");

    // Identity-normal charge matrix: row j has the identity in the first r
    // columns and (-a_j, -b_j) in the (1,0), (0,1) columns.
    c.charge.assign(size_t(c.rank), std::vector<int>(size_t(c.rank) + 2, 0));
    c.basis_degree.assign(size_t(c.rank), 0);
    for (int j = 0; j < c.rank; ++j) {
        const Vec2& v = p.points[size_t(c.basis_pos[size_t(j)])];
        c.charge[size_t(j)][size_t(j)] = 1;
        c.charge[size_t(j)][size_t(c.rank)] = -v.a;
        c.charge[size_t(j)][size_t(c.rank) + 1] = -v.b;
        c.basis_degree[size_t(j)] = 1 - v.a - v.b;
    }
    return c;
}

MultiDegree beta_tilde(const PolygonData& p, const ClassLattice& c, int pos) {
    const int n = p.size();
    if (p.vertex_flag[size_t(pos)])
        throw QmError("beta_tilde is defined at edge-interior points only");
    MultiDegree t = c.zero();
    auto add = [&](int cyc, int v) {
        int j = c.pos_basis[size_t((cyc % n + n) % n)];
        if (j >= 0) t[size_t(j)] += v;
    };
    add(pos - 1, 1);
    add(pos, -2);
    add(pos + 1, 1);
    return t;
}

std::vector<std::vector<MultiDegree>> potential_support(const PolygonData& p,
                                                        const ClassLattice& c) {
    const int n = p.size();
    std::vector<std::vector<MultiDegree>> out;
    out.resize(size_t(n));
    for (int k = 0; k < n; ++k) {
        MultiDegree base = c.zero();
        if (c.pos_basis[size_t(k)] >= 0) base[size_t(c.pos_basis[size_t(k)])] = 1;
        auto [mk, nk] = p.edge_dist[size_t(k)];

        // Sum over l >= 0 and tuples 0 < i_1 < ... < i_l <= m_k,
        // 0 < j_1 < ... < j_l <= n_k of
        //   beta_k + sum_p sum_{q=0}^{i_p - 1} btilde_{k-q}
        //          + sum_p sum_{q=1}^{j_p - 1} btilde_{k+q}.
        std::vector<MultiDegree> iweight, jweight;  // contribution of i_p = i / j_p = j
        {
            MultiDegree acc = c.zero();
            for (int i = 1; i <= mk; ++i) {
                MultiDegree bt = beta_tilde(p, c, ((k - (i - 1)) % n + n) % n);
                for (int s = 0; s < c.rank; ++s) acc[size_t(s)] += bt[size_t(s)];
                iweight.push_back(acc);
            }
            acc = c.zero();
            jweight.push_back(acc);  // j_p = 1 contributes an empty sum
            for (int j = 2; j <= nk; ++j) {
                MultiDegree bt = beta_tilde(p, c, (k + (j - 1)) % n);
                for (int s = 0; s < c.rank; ++s) acc[size_t(s)] += bt[size_t(s)];
                jweight.push_back(acc);
            }
        }

        std::vector<MultiDegree>& list = out[size_t(k)];
        int lmax = std::min(mk, nk);
        std::vector<int> is, js;
        auto emit = [&]() {
            MultiDegree cls = base;
            for (int i : is)
                for (int s = 0; s < c.rank; ++s)
                    cls[size_t(s)] += iweight[size_t(i - 1)][size_t(s)];
            for (int j : js)
                for (int s = 0; s < c.rank; ++s)
                    cls[size_t(s)] += jweight[size_t(j - 1)][size_t(s)];
            list.push_back(cls);
        };
        auto pick_j = [&](auto&& self, int l, int start) -> void {
            if (int(js.size()) == l) {
                emit();
                return;
            }
            for (int j = start; j <= nk; ++j) {
                js.push_back(j);
                self(self, l, j + 1);
                js.pop_back();
            }
        };
        auto pick_i = [&](auto&& self, int l, int start) -> void {
            if (int(is.size()) == l) {
                pick_j(pick_j, l, 1);
                return;
            }
            for (int i = start; i <= mk; ++i) {
                is.push_back(i);
                self(self, l, i + 1);
                is.pop_back();
            }
        };
        for (int l = 0; l <= lmax; ++l) pick_i(pick_i, l, 1);
    }
    return out;
}

}  // namespace qm
