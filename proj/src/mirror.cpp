#include "qmirror/mirror.hpp"

#include <algorithm>

namespace qm {

namespace {

bool is_zero_class(const MultiDegree& c) {
    return std::all_of(c.begin(), c.end(), [](int v) { return v == 0; });
}

}  // namespace

GradedSeries gs_one(const ClassLattice& lat, int N) {
    GradedSeries r(lat, N);
    r.add_term(lat.zero(), QLaurent(1));
    return r;
}

GradedSeries gs_neg_z(const GradedSeries& s) {
    GradedSeries r(*s.lat, s.N);
    for (auto& [c, v] : s.terms)
        r.add_term(c, s.lat->antiK(c) % 2 == 0 ? v : -v);
    return r;
}

GradedSeries gs_shift_class(const GradedSeries& s, const MultiDegree& d) {
    GradedSeries r(*s.lat, s.N);
    for (auto& [c, v] : s.terms) {
        MultiDegree k = c;
        for (size_t j = 0; j < k.size(); ++j) k[j] += d[j];
        r.add_term(k, v);
    }
    return r;
}

GradedSeries gs_exp(const GradedSeries& s) {
    if (!s.coeff(s.lat->zero()).is_zero())
        throw QmError("gs_exp needs a series without class-0 part");
    GradedSeries acc = gs_one(*s.lat, s.N), pw = acc;
    QRat fact(1);
    for (int k = 1; k <= s.N; ++k) {
        pw = pw * s;
        if (pw.is_zero()) break;
        fact *= k;
        acc = acc + pw * QLaurent(rat_canon(QRat(1) / fact));
    }
    return acc;
}

GradedSeries gs_inverse(const GradedSeries& s) {
    if (s.coeff(s.lat->zero()) != QLaurent(1))
        throw QmError("gs_inverse needs class-0 part 1");
    GradedSeries one = gs_one(*s.lat, s.N);
    GradedSeries w = s - one, acc = one, pw = one;
    for (int k = 1; k <= s.N; ++k) {
        pw = pw * w;
        if (pw.is_zero()) break;
        acc = (k % 2 == 1) ? acc - pw : acc + pw;
    }
    return acc;
}

GradedSeries gs_unit_pow(const GradedSeries& s, int e) {
    GradedSeries base = e >= 0 ? s : gs_inverse(s);
    int n = e >= 0 ? e : -e;
    GradedSeries r = gs_one(*s.lat, s.N);
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
}

GradedSeries gs_binom_pow(const GradedSeries& s, const QRat& tau) {
    if (s.coeff(s.lat->zero()) != QLaurent(1))
        throw QmError("gs_binom_pow needs class-0 part 1");
    GradedSeries one = gs_one(*s.lat, s.N);
    GradedSeries w = s - one, acc = one, pw = one;
    for (int k = 1; k <= s.N; ++k) {
        pw = pw * w;
        if (pw.is_zero()) break;
        acc = acc + pw * QLaurent(binom(tau, k));
    }
    return acc;
}

GradedSeries MirrorMap::component(int j) const {
    return gs_shift_class(unit[size_t(j)], lat->basis_class(j));
}

GradedSeries gs_substitute(const GradedSeries& s, const MirrorMap& phi) {
    const ClassLattice& lat = *s.lat;
    if (phi.lat != &lat || phi.N != s.N)
        throw GradingMismatch("substitution with different grading or truncation");
    for (int j = 0; j < lat.rank; ++j)
        if (phi.unit[size_t(j)].coeff(lat.zero()) != QLaurent(1))
            throw QmError("mirror-map unit factor does not start at 1");
    std::vector<std::map<int, GradedSeries>> cache(size_t(lat.rank));
    auto upow = [&](int j, int e) -> const GradedSeries& {
        auto [it, fresh] = cache[size_t(j)].try_emplace(e);
        if (fresh) it->second = gs_unit_pow(phi.unit[size_t(j)], e);
        return it->second;
    };
    GradedSeries r(lat, s.N);
    for (auto& [c, v] : s.terms) {
        GradedSeries term = gs_one(lat, s.N) * v;
        for (int j = 0; j < lat.rank; ++j)
            if (c[size_t(j)] != 0) term = term * upow(j, c[size_t(j)]);
        r = r + gs_shift_class(term, c);
    }
    return r;
}

MirrorMap closed_mirror_map(const GradedSeries& a, const ClassLattice& c, int N) {
    GradedSeries at = gs_neg_z(a);
    MirrorMap m;
    m.lat = &c;
    m.N = N;
    for (int j = 0; j < c.rank; ++j)
        m.unit.push_back(gs_exp(at * QLaurent(QRat(-c.basis_degree[size_t(j)]))));
    return m;
}

MirrorMap invert_mirror_map(const MirrorMap& Qmap, const ClassLattice& c, int N) {
    std::vector<GradedSeries> uinv;
    for (int j = 0; j < c.rank; ++j) uinv.push_back(gs_inverse(Qmap.unit[size_t(j)]));
    MirrorMap z;
    z.lat = &c;
    z.N = N;
    for (int j = 0; j < c.rank; ++j) z.unit.push_back(gs_one(c, N));
    for (int iter = 0; iter <= N; ++iter) {
        MirrorMap next;
        next.lat = &c;
        next.N = N;
        for (int j = 0; j < c.rank; ++j)
            next.unit.push_back(gs_substitute(uinv[size_t(j)], z));
        bool fixed = true;
        for (int j = 0; j < c.rank; ++j)
            if (!(next.unit[size_t(j)] == z.unit[size_t(j)])) fixed = false;
        z = next;
        if (fixed) return z;
    }
    throw NoConvergence("mirror-map inversion did not stabilize");
}

GradedSeries open_mirror_map(const MirrorMap& z_of_Q, const GradedSeries& a,
                             const ClassLattice& c, int N) {
    GradedSeries M = gs_exp(gs_substitute(gs_neg_z(a), z_of_Q) * QLaurent(-1));
    for (int j = 0; j < c.rank; ++j) {
        if (c.basis_degree[size_t(j)] == 0) continue;  // z_j = Q_j, no root to take
        GradedSeries root = gs_binom_pow(
            z_of_Q.unit[size_t(j)], rat_canon(QRat(-1, c.basis_degree[size_t(j)])));
        if (!(root == M))
            throw RootMismatch("per-class root expressions for M disagree at class " +
                               std::to_string(j));
    }
    return M;
}

GradedSeries ThetaSeries::coeff(int yexp) const {
    auto it = terms.find(yexp);
    return it == terms.end() ? GradedSeries(*lat, N) : it->second;
}

ThetaSeries theta1_infinity(const GradedSeries& M, const ClassLattice& c, int N) {
    ThetaSeries th;
    th.lat = &c;
    th.N = N;
    th.lead = 1;
    for (auto& [beta, v] : M.terms) {
        if (is_zero_class(beta)) {
            if (v != QLaurent(1)) throw QmError("open mirror map must start at 1");
            th.terms[1] = gs_one(c, N);
            continue;
        }
        int dE = c.antiK(beta);
        GradedSeries& dst =
            th.terms.try_emplace(1 - dE, GradedSeries(c, N)).first->second;
        dst.add_term(beta, dE % 2 == 0 ? v : -v);
    }
    for (auto it = th.terms.begin(); it != th.terms.end();)
        it = it->second.is_zero() ? th.terms.erase(it) : std::next(it);
    return th;
}

GradedSeries theta_eval(const ThetaSeries& th, const GradedSeries& v) {
    const ClassLattice& lat = *th.lat;
    QLaurent v0 = v.coeff(lat.zero());
    if (v0 != QLaurent(1) && v0 != QLaurent(-1))
        throw QmError("theta_eval needs a substitution with class-0 part +-1");
    bool neg = (v0 == QLaurent(-1));
    GradedSeries base = neg ? v * QLaurent(-1) : v;  // 1 + higher degree
    std::map<int, GradedSeries> cache;
    auto vpow = [&](int e) -> const GradedSeries& {
        auto [it, fresh] = cache.try_emplace(e);
        if (fresh) {
            GradedSeries p = gs_unit_pow(base, e);
            if (neg && (e % 2 != 0)) p = p * QLaurent(-1);
            it->second = p;
        }
        return it->second;
    };
    GradedSeries r(lat, th.N);
    for (auto& [yexp, coeff] : th.terms) r = r + coeff * vpow(yexp);
    return r;
}

GradedSeries ytilde_from_a(const GradedSeries& a) {
    return gs_exp(gs_neg_z(a)) * QLaurent(-1);
}

QRat LogInvariantTable::at(int g, const MultiDegree& beta) const {
    auto it = entries.find({g, beta});
    return it == entries.end() ? QRat(0) : it->second;
}

LogInvariantTable log_invariants_extract(const GradedSeries& M, int g_max, int N) {
    (void)N;
    LogInvariantTable t;
    t.gmax = g_max;
    for (auto& [beta, v] : M.terms) {
        if (is_zero_class(beta)) continue;
        int dE = M.lat->antiK(beta);
        if (dE < 2) continue;
        HbarSeries h = hbar_expand(v, g_max);
        QRat w = QRat(dE - 1) * (dE % 2 == 0 ? 1 : -1);
        for (int g = 0; g <= g_max; ++g)
            t.entries[{g, beta}] = rat_canon(w * h.coeff_h(2 * g));
    }
    return t;
}

void ThetaHbar::add_term(int yexp, const MultiDegree& c, const TSeries& v) {
    if (v.is_zero()) return;
    int d = lat->antiK(c);
    if (d < 0) throw DegenerateGrading("class of negative anticanonical degree");
    if (d > N) return;
    auto& m = terms[yexp];
    auto [it, fresh] = m.try_emplace(c, v);
    if (!fresh) {
        it->second = it->second + v;
        if (it->second.is_zero()) m.erase(it);
    }
    if (m.empty()) terms.erase(yexp);
}

namespace {

ThetaHbar th_make(const ClassLattice& lat, int N, int gmax) {
    ThetaHbar t;
    t.lat = &lat;
    t.N = N;
    t.gmax = gmax;
    return t;
}

void th_check(const ThetaHbar& a, const ThetaHbar& b) {
    if (a.lat != b.lat || a.N != b.N || a.gmax != b.gmax)
        throw GradingMismatch("theta series with different grading or truncation");
}

}  // namespace

ThetaHbar th_add(const ThetaHbar& a, const ThetaHbar& b) {
    th_check(a, b);
    ThetaHbar r = th_make(*a.lat, a.N, a.gmax);
    r.lead = std::max(a.lead, b.lead);
    for (auto& [y, m] : a.terms)
        for (auto& [c, v] : m) r.add_term(y, c, v);
    for (auto& [y, m] : b.terms)
        for (auto& [c, v] : m) r.add_term(y, c, v);
    return r;
}

ThetaHbar th_sub(const ThetaHbar& a, const ThetaHbar& b) {
    th_check(a, b);
    ThetaHbar r = th_make(*a.lat, a.N, a.gmax);
    r.lead = std::max(a.lead, b.lead);
    for (auto& [y, m] : a.terms)
        for (auto& [c, v] : m) r.add_term(y, c, v);
    for (auto& [y, m] : b.terms)
        for (auto& [c, v] : m) r.add_term(y, c, -v);
    return r;
}

ThetaHbar th_mul(const ThetaHbar& a, const ThetaHbar& b) {
    th_check(a, b);
    ThetaHbar r = th_make(*a.lat, a.N, a.gmax);
    r.lead = a.lead + b.lead;
    for (auto& [y1, m1] : a.terms)
        for (auto& [y2, m2] : b.terms)
            for (auto& [c1, v1] : m1) {
                int d1 = a.lat->antiK(c1);
                for (auto& [c2, v2] : m2) {
                    if (d1 + a.lat->antiK(c2) > a.N) continue;
                    MultiDegree c = c1;
                    for (size_t j = 0; j < c.size(); ++j) c[j] += c2[j];
                    r.add_term(y1 + y2, c, v1 * v2);
                }
            }
    return r;
}

ThetaHbar theta_alpha_n1m(const ClassLattice& c, const LogInvariantTable& R, int n,
                          int m, int N) {
    ThetaHbar t = th_make(c, N, R.gmax);
    int k = n - m;
    if (k <= 0) return t;
    const int depth = 2 * R.gmax + 1;
    std::map<MultiDegree, TSeries> acc;
    for (auto& [key, val] : R.entries) {
        auto& [g, beta] = key;
        if (c.antiK(beta) != k + 1) continue;
        auto [it, fresh] = acc.try_emplace(beta, TSeries(depth));
        it->second.add_to(2 * g, val / k);
    }
    for (auto& [beta, v] : acc) t.add_term(0, beta, v);
    return t;
}

ThetaHbar theta_alpha_1n0(const ClassLattice& c, const LogInvariantTable& R, int n,
                          int N) {
    ThetaHbar t = th_make(c, N, R.gmax);
    const int depth = 2 * R.gmax + 1;
    std::map<MultiDegree, TSeries> acc;
    for (auto& [key, val] : R.entries) {
        auto& [g, beta] = key;
        if (c.antiK(beta) != n + 1) continue;
        auto [it, fresh] = acc.try_emplace(beta, TSeries(depth));
        it->second.add_to(2 * g, val);
    }
    for (auto& [beta, v] : acc) t.add_term(0, beta, v);
    return t;
}

std::vector<ThetaHbar> theta_tower(const ThetaSeries& theta1,
                                   const LogInvariantTable& R, int n_max, int N) {
    const ClassLattice& lat = *theta1.lat;
    const int gmax = R.gmax, depth = 2 * gmax + 1;
    ThetaHbar th0 = th_make(lat, N, gmax);
    th0.lead = 0;
    th0.add_term(0, lat.zero(), TSeries::constant(1, depth));
    ThetaHbar th1 = th_make(lat, N, gmax);
    th1.lead = 1;
    for (auto& [yexp, gs] : theta1.terms)
        for (auto& [c, v] : gs.terms) {
            HbarSeries h = hbar_expand(v, gmax);
            TSeries ts(depth);
            for (int g = 0; g <= gmax; ++g) ts.set(2 * g, h.coeff_h(2 * g));
            th1.add_term(yexp, c, ts);
        }
    std::vector<ThetaHbar> out = {th0, th1};
    for (int n = 1; n < n_max; ++n) {
        ThetaHbar t = th_mul(out[size_t(n)], th1);
        for (int m = 0; m <= n; ++m)
            t = th_sub(t, th_mul(theta_alpha_n1m(lat, R, n, m, N), out[size_t(m)]));
        t = th_sub(t, theta_alpha_1n0(lat, R, n, N));
        t.lead = n + 1;
        // Leading term: y^(n+1) with coefficient 1 and nothing above.
        auto it = t.terms.rbegin();
        if (it == t.terms.rend() || it->first != n + 1 || it->second.size() != 1 ||
            it->second.begin()->first != lat.zero() ||
            !(it->second.begin()->second == TSeries::constant(1, depth)))
            throw LeadingTermBroken("theta recursion lost its leading term at n = " +
                                    std::to_string(n + 1));
        out.push_back(t);
    }
    return out;
}

std::vector<ThetaHbar> check_full_log_potential(const std::vector<ThetaHbar>& thetas,
                                                int N) {
    const int n_max = int(thetas.size()) - 1;
    if (n_max < 1) throw QmError("full-log check needs theta_1");
    const ClassLattice& lat = *thetas[1].lat;
    const int gmax = thetas[1].gmax;
    const ThetaHbar& th1 = thetas[1];
    // Scalar (y-independent) residues res_y theta_n and its log-integration.
    auto scalar_of = [&](const std::map<MultiDegree, TSeries>& m,
                         const QRat& s) -> ThetaHbar {
        ThetaHbar t = th_make(lat, N, gmax);
        for (auto& [c, v] : m) t.add_term(0, c, v * s);
        return t;
    };
    std::vector<ThetaHbar> resW(size_t(n_max) + 1, th_make(lat, N, gmax));
    std::vector<ThetaHbar> rD(size_t(n_max) + 1, th_make(lat, N, gmax));
    for (int n = 1; n <= n_max; ++n) {
        auto it = thetas[size_t(n)].terms.find(-1);
        if (it == thetas[size_t(n)].terms.end()) continue;
        resW[size_t(n)] = scalar_of(it->second, QRat(1));
        rD[size_t(n)] = scalar_of(it->second, rat_canon(QRat(1, n)));
    }
    std::vector<ThetaHbar> residual;
    for (int n = 0; n < n_max; ++n) {
        ThetaHbar r = thetas[size_t(n) + 1];  // (1/U) W at U^n
        if (n == 0) {
            r = th_sub(r, th1);  // the standalone -theta_1
        } else {
            r = th_add(r, resW[size_t(n)]);
            r = th_add(r, rD[size_t(n)]);
            r = th_sub(r, th_mul(th1, thetas[size_t(n)]));
            for (int k = 1; k <= n - 1; ++k)
                r = th_add(r, th_mul(rD[size_t(k)], thetas[size_t(n - k)]));
        }
        residual.push_back(r);
    }
    return residual;
}

}  // namespace qm
