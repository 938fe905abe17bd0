#include "qmirror/vertex.hpp"

#include <algorithm>
#include <mutex>

namespace qm {

namespace {

constexpr int kBudgetD = 8;

// (u^(2j) - 1)
QLaurent den_factor(int j) {
    QLaurent f;
    f.add_to(2 * j, QRat(1));
    f.add_to(0, QRat(-1));
    return f;
}

QLaurent den_poly(const std::map<int, int>& den) {
    QLaurent p(1);
    for (auto& [j, e] : den)
        for (int i = 0; i < e; ++i) p *= den_factor(j);
    return p;
}

}  // namespace

// --- partitions ------------------------------------------------------------

void Partition::validate() const {
    for (size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] <= 0) throw QmError("partition parts must be positive");
        if (i > 0 && parts[i] > parts[i - 1])
            throw QmError("partition parts must be non-increasing");
    }
}

int Partition::size() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
}

Partition Partition::transpose() const {
    Partition t;
    if (parts.empty()) return t;
    for (int j = 0; j < parts[0]; ++j) {
        int c = 0;
        for (int p : parts)
            if (p > j) ++c;
        t.parts.push_back(c);
    }
    return t;
}

long Partition::kappa() const {
    long k = 0;
    for (size_t i = 0; i < parts.size(); ++i)
        k += long(parts[i]) * (parts[i] - 2 * long(i + 1) + 1);
    return k;
}

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    auto gen = [&](auto&& self, int rem, int mx) -> void {
        if (rem == 0) {
            out.push_back(Partition(cur));
            return;
        }
        for (int first = std::min(rem, mx); first >= 1; --first) {
            cur.push_back(first);
            self(self, rem - first, first);
            cur.pop_back();
        }
    };
    gen(gen, n, n);
    return out;
}

std::vector<Partition> partitions_up_to(int max_size) {
    std::vector<Partition> out;
    for (int n = 0; n <= max_size; ++n) {
        auto p = partitions_of(n);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

// --- QFrac -----------------------------------------------------------------

QFrac qf_add(const QFrac& a, const QFrac& b) {
    QFrac r;
    r.den = a.den;
    for (auto& [j, e] : b.den) {
        int& cur = r.den[j];
        cur = std::max(cur, e);
    }
    QLaurent na = a.num, nb = b.num;
    for (auto& [j, e] : r.den) {
        auto ita = a.den.find(j);
        int ea = ita == a.den.end() ? 0 : ita->second;
        auto itb = b.den.find(j);
        int eb = itb == b.den.end() ? 0 : itb->second;
        for (int i = ea; i < e; ++i) na *= den_factor(j);
        for (int i = eb; i < e; ++i) nb *= den_factor(j);
    }
    r.num = na + nb;
    if (r.num.is_zero()) r.den.clear();
    return r;
}

QFrac qf_sub(const QFrac& a, const QFrac& b) { return qf_add(a, qf_scale(b, QLaurent(-1))); }

QFrac qf_mul(const QFrac& a, const QFrac& b) {
    QFrac r;
    r.num = a.num * b.num;
    if (r.num.is_zero()) return r;
    r.den = a.den;
    for (auto& [j, e] : b.den) r.den[j] += e;
    return r;
}

QFrac qf_scale(const QFrac& a, const QLaurent& s) {
    QFrac r;
    r.num = a.num * s;
    if (!r.num.is_zero()) r.den = a.den;
    return r;
}

QFrac qf_div_factor(const QFrac& a, int j) {
    if (a.is_zero()) return a;
    QFrac r = a;
    r.den[j] += 1;
    return r;
}

QFrac qf_adams(const QFrac& a, int k) {
    QFrac r;
    r.num = a.num.adams(k);
    for (auto& [j, e] : a.den) r.den[j * k] += e;
    return r;
}

bool qf_eq(const QFrac& a, const QFrac& b) {
    std::map<int, int> extra_a, extra_b;  // factors missing on each side
    std::map<int, int> all = a.den;
    for (auto& [j, e] : b.den) all[j] = std::max(all[j], e);
    for (auto& [j, e] : all) {
        auto ita = a.den.find(j);
        int ea = ita == a.den.end() ? 0 : ita->second;
        auto itb = b.den.find(j);
        int eb = itb == b.den.end() ? 0 : itb->second;
        if (e > ea) extra_a[j] = e - ea;
        if (e > eb) extra_b[j] = e - eb;
    }
    return a.num * den_poly(extra_a) == b.num * den_poly(extra_b);
}

QLaurent qf_to_laurent(const QFrac& a) {
    if (a.num.is_zero()) return QLaurent();
    QLaurent r = a.num;
    for (auto& [j, e] : a.den)
        for (int i = 0; i < e; ++i) r = r.divide_exact(den_factor(j));
    return r;
}

// --- vertex amplitude ------------------------------------------------------

namespace {

// h_0..h_kmax of the alphabet x_i = u^(-2 nu_i - (2i - 1)), i >= 1.
std::vector<QFrac> h_series(const Partition& nu, int kmax) {
    // Base alphabet (nu = 0): h_k = u^(k^2) / prod_{j<=k} (u^(2j) - 1).
    std::vector<QFrac> base(size_t(kmax) + 1);
    base[0] = QFrac(QLaurent(1));
    for (int k = 1; k <= kmax; ++k) {
        base[size_t(k)] = qf_div_factor(
            qf_scale(base[size_t(k) - 1], QLaurent::q_half(2 * k - 1)), k);
    }
    // Finite correction prod_i (1 - u^(1-2i) t) / (1 - u^(2 nu_i + 1 - 2i) t),
    // a polynomial in t with monomial coefficients.
    std::vector<QLaurent> corr(size_t(kmax) + 1);
    corr[0] = QLaurent(1);
    for (size_t i = 1; i <= nu.parts.size(); ++i) {
        QLaurent a = QLaurent::q_half(1 - 2 * int(i));
        QLaurent b = QLaurent::q_half(2 * nu.parts[i - 1] + 1 - 2 * int(i));
        std::vector<QLaurent> next(size_t(kmax) + 1);
        for (int m = 0; m <= kmax; ++m) {
            next[size_t(m)] = corr[size_t(m)];
            if (m >= 1) next[size_t(m)] -= a * corr[size_t(m) - 1];
        }
        std::vector<QLaurent> s(size_t(kmax) + 1);
        for (int m = 0; m <= kmax; ++m) {
            s[size_t(m)] = next[size_t(m)];
            if (m >= 1) s[size_t(m)] += b * s[size_t(m) - 1];
        }
        corr = std::move(s);
    }
    std::vector<QFrac> out(size_t(kmax) + 1);
    for (int k = 0; k <= kmax; ++k)
        for (int m = 0; m <= k; ++m)
            out[size_t(k)] =
                qf_add(out[size_t(k)], qf_scale(base[size_t(k - m)], corr[size_t(m)]));
    return out;
}

QFrac qf_det(std::vector<std::vector<QFrac>>& M) {
    const size_t n = M.size();
    // Cofactor expansion along rows with a column mask; n stays small.
    auto rec = [&](auto&& self, size_t row, unsigned mask) -> QFrac {
        if (row == n) return QFrac(QLaurent(1));
        QFrac acc;
        int sign = 1;
        for (size_t col = 0; col < n; ++col) {
            if (mask & (1u << col)) continue;
            if (!M[row][col].is_zero()) {
                QFrac sub = self(self, row + 1, mask | (1u << col));
                QFrac term = qf_mul(M[row][col], sub);
                acc = sign > 0 ? qf_add(acc, term) : qf_sub(acc, term);
            }
            sign = -sign;
        }
        return acc;
    };
    return rec(rec, 0, 0u);
}

// s_{la/eta}(q^(-nu-rho)) via the h-version of Jacobi-Trudi.
QFrac skew_schur(const Partition& la, const Partition& eta, const Partition& nu) {
    if (la.parts.empty())
        return eta.parts.empty() ? QFrac(QLaurent(1)) : QFrac();
    const size_t n = la.parts.size();
    if (eta.parts.size() > n) return QFrac();
    std::vector<int> etap(n, 0);
    std::copy(eta.parts.begin(), eta.parts.end(), etap.begin());
    for (size_t i = 0; i < n; ++i)
        if (etap[i] > la.parts[i]) return QFrac();
    std::vector<QFrac> hs = h_series(nu, la.parts[0] + int(n));
    std::vector<std::vector<QFrac>> M(n, std::vector<QFrac>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            int k = la.parts[i] - etap[j] - int(i) + int(j);
            if (k >= 0) M[i][j] = hs[size_t(k)];
        }
    return qf_det(M);
}

QFrac vertex_C_compute(const Partition& la, const Partition& mu, const Partition& nu) {
    Partition lat = la.transpose(), nut = nu.transpose();
    QFrac tot;
    int mn = std::min(la.size(), mu.size());
    for (int esz = 0; esz <= mn; ++esz)
        for (const Partition& eta : partitions_of(esz)) {
            QFrac a = skew_schur(lat, eta, nu);
            if (a.is_zero()) continue;
            QFrac b = skew_schur(mu, eta, nut);
            if (b.is_zero()) continue;
            tot = qf_add(tot, qf_mul(a, b));
        }
    QFrac snut = skew_schur(nut, Partition(), Partition());
    return qf_scale(qf_mul(snut, tot),
                    QLaurent::q_half(int(la.kappa() + nu.kappa())));
}

}  // namespace

QFrac vertex_C(const Partition& l1, const Partition& l2, const Partition& l3) {
    using Key = std::tuple<std::vector<int>, std::vector<int>, std::vector<int>>;
    static std::map<Key, QFrac> cache;
    static std::mutex mtx;
    Key key{l1.parts, l2.parts, l3.parts};
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    QFrac v = vertex_C_compute(l1, l2, l3);
    std::lock_guard<std::mutex> lk(mtx);
    return cache.emplace(std::move(key), std::move(v)).first->second;
}

// --- partition functions ---------------------------------------------------

QFrac WeightedZ::coeff(int d, int b) const {
    auto it = terms.find({d, b});
    return it == terms.end() ? QFrac() : it->second;
}

WeightedZ wz_log(const WeightedZ& z) {
    if (!qf_eq(z.coeff(0, 0), QFrac(QLaurent(1))))
        throw SingularSystem("log needs constant term 1");
    WeightedZ out;
    out.d_max = z.d_max;
    out.b_max = z.b_max;
    std::map<std::pair<int, int>, QFrac> w = z.terms;
    w.erase({0, 0});
    std::map<std::pair<int, int>, QFrac> term = w;
    int sign = 1;
    for (int n = 1; n <= z.d_max + z.b_max && !term.empty(); ++n) {
        for (auto& [k, v] : term) {
            QFrac& dst = out.terms[k];
            QFrac contrib = qf_scale(v, QLaurent(rat_canon(QRat(sign, n))));
            dst = qf_add(dst, contrib);
            if (dst.is_zero()) out.terms.erase(k);
        }
        std::map<std::pair<int, int>, QFrac> next;
        for (auto& [k1, v1] : term)
            for (auto& [k2, v2] : w) {
                int a = k1.first + k2.first, b = k1.second + k2.second;
                if (a > z.d_max || b > z.b_max) continue;
                QFrac& dst = next[{a, b}];
                dst = qf_add(dst, qf_mul(v1, v2));
                if (dst.is_zero()) next.erase({a, b});
            }
        term = std::move(next);
        sign = -sign;
    }
    return out;
}

namespace {

// Open amplitude of the outer brane on local P2 restricted to nu, as a
// Q_H-series: sum over internal partitions with sign (-1)^d and framing
// q^(kappa) per leg.
std::vector<QFrac> open_A(const Partition& nu, int d_max) {
    std::vector<Partition> ps = partitions_up_to(d_max);
    std::vector<QFrac> out(size_t(d_max) + 1);
    for (const Partition& l1 : ps) {
        for (const Partition& l2 : ps) {
            int s12 = l1.size() + l2.size();
            if (s12 > d_max) continue;
            Partition l2t = l2.transpose();
            QFrac c12 = vertex_C(Partition(), l1, l2t);
            for (const Partition& l3 : ps) {
                int d = s12 + l3.size();
                if (d > d_max) continue;
                long kap = 2 * (l1.kappa() + l2.kappa() + l3.kappa());
                QLaurent pref = QLaurent::q_half(int(kap), QRat(d % 2 ? -1 : 1));
                QFrac v = qf_mul(vertex_C(nu, l2, l3.transpose()),
                                 qf_mul(c12, vertex_C(Partition(), l3, l1.transpose())));
                out[size_t(d)] = qf_add(out[size_t(d)], qf_scale(v, pref));
            }
        }
    }
    return out;
}

std::vector<QFrac> series_mul(const std::vector<QFrac>& a, const std::vector<QFrac>& b) {
    std::vector<QFrac> r(a.size());
    for (size_t d = 0; d < a.size(); ++d)
        for (size_t m = 0; m <= d; ++m) r[d] = qf_add(r[d], qf_mul(a[m], b[d - m]));
    return r;
}

std::vector<QFrac> series_inv(const std::vector<QFrac>& a) {
    if (!qf_eq(a[0], QFrac(QLaurent(1))))
        throw SingularSystem("series inversion needs constant term 1");
    std::vector<QFrac> inv(a.size());
    inv[0] = QFrac(QLaurent(1));
    for (size_t d = 1; d < a.size(); ++d) {
        QFrac s;
        for (size_t m = 1; m <= d; ++m) s = qf_add(s, qf_mul(a[m], inv[d - m]));
        inv[d] = qf_scale(s, QLaurent(-1));
    }
    return inv;
}

// Z_nu for all |nu| = l, contracted with C_{nu^T () ()}.
std::vector<QFrac> winding_S(int l, int d_max, const std::vector<QFrac>& zcl_inv) {
    std::vector<QFrac> s(size_t(d_max) + 1);
    for (const Partition& nu : partitions_of(l)) {
        std::vector<QFrac> znu = series_mul(open_A(nu, d_max), zcl_inv);
        QFrac cval = vertex_C(nu.transpose(), Partition(), Partition());
        for (size_t d = 0; d < s.size(); ++d)
            s[d] = qf_add(s[d], qf_mul(znu[d], cval));
    }
    return s;
}

void check_budget(int d_max, int w_max) {
    if (d_max < 0 || d_max > kBudgetD || w_max > kBudgetD)
        throw BudgetExceeded("vertex sums limited to degree " + std::to_string(kBudgetD));
}

}  // namespace

WeightedZ closed_Z(VertexSurface surface, int d_max, int w_max) {
    check_budget(d_max, w_max);
    WeightedZ z;
    z.d_max = d_max;
    if (surface == VertexSurface::P2) {
        z.b_max = 0;
        std::vector<QFrac> a = open_A(Partition(), d_max);
        for (int d = 0; d <= d_max; ++d)
            if (!a[size_t(d)].is_zero()) z.terms[{d, 0}] = a[size_t(d)];
        return z;
    }
    // Local F1: fiber degree from l1..l3, base degree from l2 and l4; sign
    // (-1)^(|l2|+|l4|), framing u^(kappa1 + 2 kappa2 + kappa3).
    z.b_max = d_max;
    std::vector<Partition> ps = partitions_up_to(d_max);
    for (const Partition& l1 : ps) {
        Partition l1t = l1.transpose();
        for (const Partition& l2 : ps) {
            int f12 = l1.size() + l2.size();
            if (f12 > d_max) continue;
            QFrac c21 = vertex_C(Partition(), l2, l1t);
            for (const Partition& l3 : ps) {
                int fdeg = f12 + l3.size();
                if (fdeg > d_max) continue;
                QFrac c32 = vertex_C(Partition(), l3, l2.transpose());
                long kap = l1.kappa() + 2 * l2.kappa() + l3.kappa();
                Partition l3t = l3.transpose();
                for (const Partition& l4 : ps) {
                    int bdeg = l2.size() + l4.size();
                    if (bdeg > z.b_max) continue;
                    int sgn = (l2.size() + l4.size()) % 2 ? -1 : 1;
                    QLaurent pref = QLaurent::q_half(int(kap), QRat(sgn));
                    QFrac v = qf_mul(qf_mul(vertex_C(Partition(), l1, l4.transpose()), c21),
                                     qf_mul(c32, vertex_C(Partition(), l4, l3t)));
                    QFrac& dst = z.terms[{fdeg, bdeg}];
                    dst = qf_add(dst, qf_scale(v, pref));
                    if (dst.is_zero()) z.terms.erase({fdeg, bdeg});
                }
            }
        }
    }
    return z;
}

WeightedZ open_Z_restricted(const Partition& nu, int d_max) {
    check_budget(d_max, nu.size());
    std::vector<QFrac> znu =
        series_mul(open_A(nu, d_max), series_inv(open_A(Partition(), d_max)));
    WeightedZ out;
    out.d_max = d_max;
    out.b_max = 0;
    for (int d = 0; d <= d_max; ++d)
        if (!znu[size_t(d)].is_zero()) out.terms[{d, 0}] = znu[size_t(d)];
    return out;
}

// --- winding theorem -------------------------------------------------------

WindingReport check_winding_theorem(int w, int d_max, int g_max) {
    check_budget(d_max, w);
    WindingReport rep;
    rep.w = w;
    // Right-hand side: t^w coefficient of log(1 + sum_l (-1)^l S_l t^l).
    std::vector<QFrac> zcl_inv = series_inv(open_A(Partition(), d_max));
    std::map<int, std::vector<QFrac>> gm1;  // t-degree -> Q_H-series of G - 1
    for (int l = 1; l <= w; ++l) {
        std::vector<QFrac> s = winding_S(l, d_max, zcl_inv);
        if (l % 2)
            for (auto& v : s) v = qf_scale(v, QLaurent(-1));
        gm1[l] = std::move(s);
    }
    std::vector<QFrac> rhs(size_t(d_max) + 1);
    std::map<int, std::vector<QFrac>> term = gm1;
    int sign = 1;
    for (int k = 1; k <= w && !term.empty(); ++k) {
        auto it = term.find(w);
        if (it != term.end())
            for (size_t d = 0; d < rhs.size(); ++d)
                rhs[d] = qf_add(rhs[d],
                                qf_scale(it->second[d], QLaurent(rat_canon(QRat(sign, k)))));
        std::map<int, std::vector<QFrac>> next;
        for (auto& [l1, s1] : term)
            for (auto& [l2, s2] : gm1) {
                if (l1 + l2 > w) continue;
                std::vector<QFrac> p = series_mul(s1, s2);
                auto [jt, fresh] = next.try_emplace(l1 + l2, p);
                if (!fresh)
                    for (size_t d = 0; d < p.size(); ++d)
                        jt->second[d] = qf_add(jt->second[d], p[d]);
            }
        term = std::move(next);
        sign = -sign;
    }
    // Left-hand side: [Q^(dH - wC)] log Z_F1 at key (d, d - w).
    WeightedZ L = wz_log(closed_Z(VertexSurface::F1, d_max, w));
    for (int d = w; d <= d_max; ++d) {
        if (qf_eq(L.coeff(d, d - w), rhs[size_t(d)])) continue;
        rep.ok = false;
        rep.first_d = d;
        rep.detail = "winding " + std::to_string(w) + " mismatch at degree " +
                     std::to_string(d);
        return rep;
    }
    rep.detail = "winding " + std::to_string(w) + " verified through degree " +
                 std::to_string(d_max) + " (genus cap " + std::to_string(g_max) + ")";
    return rep;
}

// --- GV / LMOV extraction --------------------------------------------------

GvTable gv_extract(const WeightedZ& F, int d_max, int w_max, int g_max) {
    check_budget(d_max, w_max);
    const QLaurent z = z_of_q();
    std::map<std::pair<int, int>, QFrac> G;
    GvTable out;
    for (int d = 1; d <= d_max; ++d)
        for (int w = 1; w <= std::min(d, w_max); ++w) {
            QFrac g = F.coeff(d, d - w);
            for (int k = 2; k <= std::min(d, w); ++k) {
                if (d % k || w % k) continue;
                g = qf_sub(g, qf_scale(qf_adams(G.at({d / k, w / k}), k),
                                       QLaurent(rat_canon(QRat(1, k)))));
            }
            G[{d, w}] = g;
            ZPoly zp = to_z_basis(qf_to_laurent(qf_scale(g, z)));
            for (int gg = 0; gg <= g_max; ++gg)
                out[{gg, d, w}] = gg % 2 ? zp.coeff(gg) : -zp.coeff(gg);
        }
    return out;
}

std::map<std::pair<int, int>, QRat> lmov_w1(int d_max) {
    check_budget(d_max, 1);
    std::vector<QFrac> z1 =
        series_mul(open_A(Partition{1}, d_max), series_inv(open_A(Partition(), d_max)));
    QLaurent dq = QLaurent::q_half(1) - QLaurent::q_half(-1);
    std::map<std::pair<int, int>, QRat> out;
    for (int d = 0; d <= d_max; ++d) {
        ZPoly zp = to_z_basis(qf_to_laurent(qf_scale(z1[size_t(d)], dq)));
        for (auto& [g, v] : zp.coeffs) out[{g, d}] = v;
    }
    return out;
}

LmovW2 lmov_w2(int d_max, int g_max) {
    check_budget(d_max, 2);
    std::vector<QFrac> zcl_inv = series_inv(open_A(Partition(), d_max));
    std::vector<QFrac> f1 = series_mul(open_A(Partition{1}, d_max), zcl_inv);
    std::vector<QFrac> z2 = series_mul(open_A(Partition{2}, d_max), zcl_inv);
    std::vector<QFrac> z11 = series_mul(open_A(Partition{1, 1}, d_max), zcl_inv);
    // f_(1)(q^2, Q^2): Adams operation on the coefficient at half the degree.
    std::vector<QFrac> f1q2(size_t(d_max) + 1);
    for (int d = 0; d <= d_max; d += 2) f1q2[size_t(d)] = qf_adams(f1[size_t(d) / 2], 2);
    std::vector<QFrac> f1sq = series_mul(f1, f1);
    const QLaurent half(QRat(1, 2));
    LmovW2 out;
    for (int d = 0; d <= d_max; ++d) {
        QFrac f2 = qf_sub(z2[size_t(d)],
                          qf_scale(qf_add(f1q2[size_t(d)], f1sq[size_t(d)]), half));
        QFrac f11 = qf_add(z11[size_t(d)],
                           qf_scale(qf_sub(f1q2[size_t(d)], f1sq[size_t(d)]), half));
        // fhat = (u - 1/u) M^(-1) f with M^(-1) = [[1/u, u], [u, 1/u]] / (1/u^2 - u^2);
        // (u - 1/u)/(1/u^2 - u^2) = -u^3 (u^2 - 1) / ((u^4 - 1) u^2).
        auto convert = [&](const QFrac& x, const QFrac& y, int ex, int ey) {
            QFrac s = qf_add(qf_scale(x, QLaurent::q_half(ex)),
                             qf_scale(y, QLaurent::q_half(ey)));
            QLaurent m = QLaurent::q_half(3, QRat(-1)) + QLaurent::q_half(1);
            return qf_div_factor(qf_scale(s, m), 2);
        };
        QFrac fhat2 = convert(f2, f11, -1, 1);
        QFrac fhat11 = convert(f2, f11, 1, -1);
        ZPoly zp2 = to_z_basis(qf_to_laurent(fhat2));
        ZPoly zp11 = to_z_basis(qf_to_laurent(fhat11));
        for (int g = 0; g <= g_max; ++g) {
            out.rep2[{g, d}] = zp2.coeff(g);
            out.rep11[{g, d}] = zp11.coeff(g);
        }
    }
    return out;
}

}  // namespace qm
