#pragma once
// Standalone series combinatorics kit: Laurent-series Lagrange inversion,
// order/residue calculus, partial ordinary Bell polynomials, and the
// exponentiation identity.
#include <climits>
#include <map>
#include <vector>

#include "qmirror/qlaurent.hpp"

namespace qm {

// ---------------------------------------------------------------------------
// TSeries: power series in one variable t, truncated at a fixed depth
// (coefficients of t^0 .. t^(depth-1) are tracked).
// ---------------------------------------------------------------------------
class TSeries {
public:
    TSeries() : d_(0) {}
    explicit TSeries(int depth) : d_(depth), c_(size_t(depth), QRat(0)) {}
    static TSeries constant(const QRat& v, int depth) {
        TSeries s(depth);
        s.set(0, v);
        return s;
    }

    int depth() const { return d_; }
    bool is_scalar_zero() const { return d_ == 0; }
    QRat coeff(int k) const {
        return (k >= 0 && k < d_) ? c_[size_t(k)] : QRat(0);
    }
    void set(int k, const QRat& v) {
        if (k >= 0 && k < d_) c_[size_t(k)] = rat_canon(v);
    }
    void add_to(int k, const QRat& v) {
        if (k >= 0 && k < d_) c_[size_t(k)] = rat_canon(c_[size_t(k)] + v);
    }
    bool is_zero() const {
        for (auto& v : c_)
            if (v != 0) return false;
        return true;
    }
    // Smallest exponent with nonzero coefficient; depth() when zero.
    int t_order() const {
        for (int k = 0; k < d_; ++k)
            if (c_[size_t(k)] != 0) return k;
        return d_;
    }

    friend TSeries operator+(const TSeries& a, const TSeries& b) {
        if (a.is_scalar_zero()) return b;
        if (b.is_scalar_zero()) return a;
        TSeries r(std::min(a.d_, b.d_));
        for (int k = 0; k < r.d_; ++k) r.set(k, a.coeff(k) + b.coeff(k));
        return r;
    }
    friend TSeries operator-(const TSeries& a, const TSeries& b) { return a + (-b); }
    friend TSeries operator-(const TSeries& a) {
        TSeries r(a.d_);
        for (int k = 0; k < a.d_; ++k) r.set(k, -a.coeff(k));
        return r;
    }
    friend TSeries operator*(const TSeries& a, const TSeries& b) {
        if (a.is_scalar_zero() || b.is_scalar_zero()) return TSeries();
        TSeries r(std::min(a.d_, b.d_));
        for (int i = 0; i < a.d_ && i < r.d_; ++i) {
            if (a.coeff(i) == 0) continue;
            for (int j = 0; j < b.d_ && i + j < r.d_; ++j)
                r.add_to(i + j, a.coeff(i) * b.coeff(j));
        }
        return r;
    }
    friend TSeries operator*(const TSeries& a, const QRat& s) {
        TSeries r(a.d_);
        for (int k = 0; k < a.d_; ++k) r.set(k, a.coeff(k) * s);
        return r;
    }
    friend TSeries operator*(const QRat& s, const TSeries& a) { return a * s; }
    // Equality modulo t^min(depths); a scalar zero equals any zero series.
    friend bool operator==(const TSeries& a, const TSeries& b) {
        int d = std::min(a.d_, b.d_);
        if (a.is_scalar_zero() || b.is_scalar_zero())
            return a.is_zero() && b.is_zero();
        for (int k = 0; k < d; ++k)
            if (a.coeff(k) != b.coeff(k)) return false;
        return true;
    }
    friend bool operator!=(const TSeries& a, const TSeries& b) { return !(a == b); }

    // Multiplicative inverse; requires a unit (nonzero constant term).
    TSeries inverse() const {
        if (coeff(0) == 0) throw ZeroSeries("TSeries::inverse of a non-unit");
        TSeries r(d_);
        QRat u0 = 1 / coeff(0);
        r.set(0, u0);
        for (int k = 1; k < d_; ++k) {
            QRat s(0);
            for (int j = 1; j <= k; ++j) s += coeff(j) * r.coeff(k - j);
            r.set(k, -u0 * s);
        }
        return r;
    }

    // exp of a series with positive t-order (so the result is rational).
    TSeries exp_of() const {
        if (coeff(0) != 0) throw BadShape("exp of a series with constant term");
        TSeries r = TSeries::constant(1, d_);
        TSeries pw = TSeries::constant(1, d_);
        QRat fact(1);
        for (int j = 1; j < d_; ++j) {
            pw = pw * (*this);
            fact *= j;
            if (pw.is_zero()) break;
            r = r + pw * (1 / fact);
        }
        return r;
    }

private:
    int d_;
    std::vector<QRat> c_;
};

// ---------------------------------------------------------------------------
// LSeriesQ: Laurent series over QRat with exponents bounded above and an
// infinite tail downward, truncated at a per-series floor.  floor == EXACT
// marks a series with no unknown tail (a finite Laurent polynomial).
// ---------------------------------------------------------------------------
struct LSeriesQ {
    static constexpr int EXACT = INT_MIN / 4;

    std::map<int, QRat> c;  // exponent -> coefficient
    int floor = EXACT;      // lowest trusted exponent

    LSeriesQ() = default;
    explicit LSeriesQ(int floor_) : floor(floor_) {}

    QRat coeff(int k) const {
        auto it = c.find(k);
        return it == c.end() ? QRat(0) : it->second;
    }
    void set(int k, const QRat& raw) {
        if (k < floor) return;
        QRat v = rat_canon(raw);
        if (v == 0)
            c.erase(k);
        else
            c[k] = v;
    }
    void add_to(int k, const QRat& raw) {
        if (k < floor) return;
        QRat v = rat_canon(raw);
        if (v == 0) return;
        auto [it, fresh] = c.try_emplace(k, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) c.erase(it);
        }
    }
    bool is_zero() const { return c.empty(); }
    int ord() const {
        if (c.empty()) throw ZeroSeries("ord of the zero series");
        return c.rbegin()->first;
    }
    void raise_floor(int f) {
        if (f <= floor) return;
        floor = f;
        c.erase(c.begin(), c.lower_bound(f));
    }
    // Equality on the overlap of trusted ranges.
    friend bool operator==(const LSeriesQ& a, const LSeriesQ& b) {
        int lo = std::max(a.floor, b.floor);
        for (auto& [k, v] : a.c)
            if (k >= lo && b.coeff(k) != v) return false;
        for (auto& [k, v] : b.c)
            if (k >= lo && a.coeff(k) != v) return false;
        return true;
    }
    friend bool operator!=(const LSeriesQ& a, const LSeriesQ& b) { return !(a == b); }

    friend LSeriesQ operator+(const LSeriesQ& a, const LSeriesQ& b) {
        LSeriesQ r(std::max(a.floor, b.floor));
        for (auto& [k, v] : a.c) r.add_to(k, v);
        for (auto& [k, v] : b.c) r.add_to(k, v);
        return r;
    }
    friend LSeriesQ operator-(const LSeriesQ& a, const LSeriesQ& b) {
        LSeriesQ r(std::max(a.floor, b.floor));
        for (auto& [k, v] : a.c) r.add_to(k, v);
        for (auto& [k, v] : b.c) r.add_to(k, -v);
        return r;
    }
    friend LSeriesQ operator*(const LSeriesQ& a, const LSeriesQ& b) {
        if (a.is_zero() || b.is_zero()) return LSeriesQ();
        // The unknown tail of a (below a.floor) meets b's top term at
        // exponents < a.floor + ord(b), and symmetrically.
        int f = EXACT;
        if (a.floor != EXACT) f = std::max(f, a.floor + b.ord());
        if (b.floor != EXACT) f = std::max(f, b.floor + a.ord());
        LSeriesQ r(f);
        for (auto& [i, u] : a.c)
            for (auto& [j, v] : b.c) r.add_to(i + j, u * v);
        return r;
    }
    friend LSeriesQ operator*(const LSeriesQ& a, const QRat& s) {
        LSeriesQ r(a.floor);
        for (auto& [k, v] : a.c) r.set(k, v * s);
        return r;
    }

    LSeriesQ derivative() const {
        LSeriesQ r(floor == EXACT ? EXACT : floor - 1);
        for (auto& [k, v] : c) r.set(k - 1, QRat(k) * v);
        return r;
    }
    // x^s * this
    LSeriesQ shifted(int s) const {
        LSeriesQ r(floor == EXACT ? EXACT : floor + s);
        for (auto& [k, v] : c) r.set(k + s, v);
        return r;
    }
    LSeriesQ pow(int n) const {
        LSeriesQ r;
        r.set(0, 1);
        for (int i = 0; i < n; ++i) r = r * (*this);
        return r;
    }
};

// Multiplicative inverse of f, trusted down to exponent out_floor.
inline LSeriesQ lseries_inverse(const LSeriesQ& f, int out_floor) {
    if (f.is_zero()) throw ZeroSeries("inverse of the zero series");
    int n = f.ord();
    QRat lead = f.coeff(n);
    // f = lead x^n (1 + u) with ord(u) < 0; 1/f = lead^-1 x^-n sum (-u)^j.
    // u has only negative exponents, so truncating it below out_floor + n is
    // safe for a result trusted down to out_floor.
    int uf = out_floor + n;
    if (f.floor != LSeriesQ::EXACT) uf = std::max(uf, f.floor - n);
    LSeriesQ u(uf);
    for (auto& [k, v] : f.c)
        if (k != n) u.set(k - n, -v / lead);
    LSeriesQ geom;
    geom.set(0, 1);
    LSeriesQ pw;
    pw.set(0, 1);
    while (true) {
        pw = pw * u;
        if (pw.is_zero()) break;
        for (auto& [k, v] : pw.c) geom.add_to(k, v);
        if (pw.ord() < out_floor + n) break;
    }
    LSeriesQ r = geom.shifted(-n) * (1 / lead);
    r.raise_floor(out_floor);
    // The unknown tail of f propagates: 1/(f+d) = 1/f - d/f^2 + ...,
    // so coefficients below f.floor - 2n are not trusted either.
    if (f.floor != LSeriesQ::EXACT) r.raise_floor(f.floor - 2 * n);
    return r;
}

// f(g) where f is given by its stored terms (finitely many) and g != 0.
// Negative powers of g are computed via lseries_inverse to out_floor.
inline LSeriesQ compose_finite(const LSeriesQ& f, const LSeriesQ& g, int out_floor) {
    LSeriesQ r(out_floor);
    if (f.c.empty()) return r;
    LSeriesQ ginv;
    bool have_inv = false;
    for (auto& [k, v] : f.c) {
        LSeriesQ p;
        if (k >= 0) {
            p = g.pow(k);
        } else {
            if (!have_inv) {
                int n = g.ord();
                ginv = lseries_inverse(g, out_floor - (-f.c.begin()->first - 1) * std::abs(n) - 1);
                have_inv = true;
            }
            p = ginv.pow(-k);
        }
        p = p * v;
        for (auto& [e, w] : p.c) r.add_to(e, w);
        if (p.floor != LSeriesQ::EXACT && p.floor > out_floor) r.raise_floor(p.floor);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Lagrange inversion: f = sum_{k >= -1} f_k x^k with f_{-1} != 0 (given by
// its finitely many stored terms) has compositional inverse
//   g(z) = sum_{k>0} z^(-k)/k [x^(-1)] f^k,
// computed through z^(-K).
// ---------------------------------------------------------------------------
inline LSeriesQ lagrange_invert(const LSeriesQ& f, int K) {
    if (f.is_zero() || f.c.begin()->first < -1 || f.coeff(-1) == 0)
        throw BadLeadingTerm("lagrange_invert needs f = f_{-1} x^{-1} + f_0 + ... with f_{-1} != 0");
    LSeriesQ g(-K);
    LSeriesQ pw;
    pw.set(0, 1);
    for (int k = 1; k <= K; ++k) {
        pw = pw * f;
        g.set(-k, pw.coeff(-1) / k);
    }
    return g;
}

// Compositional inverse of a Laurent series of order 1, via the explicit
//   g = f_1^{-1} z (1 + sum_{k>=1} z^{-k}/((k+1) f_1) [x^1] f^{k+1})^{-1},
// trusted through z^(1-K).
inline LSeriesQ invert_order1(const LSeriesQ& f, int K) {
    if (f.is_zero() || f.ord() != 1)
        throw WrongOrder("invert_order1 needs ord(f) = 1");
    QRat f1 = f.coeff(1);
    LSeriesQ inner(-K);
    inner.set(0, 1);
    LSeriesQ pw = f;
    for (int k = 1; k <= K; ++k) {
        pw = pw * f;  // f^(k+1)
        inner.set(-k, pw.coeff(1) / (QRat(k + 1) * f1));
    }
    LSeriesQ g = lseries_inverse(inner, -K).shifted(1) * (1 / f1);
    g.raise_floor(1 - K);
    return g;
}

// [x^(-1)](f'/f), which equals ord(f).
inline int logderiv_residue(const LSeriesQ& f) {
    if (f.is_zero()) throw ZeroSeries("logderiv_residue of the zero series");
    int n = f.ord();
    LSeriesQ r = f.derivative() * lseries_inverse(f, -2 - n);
    QRat res = r.coeff(-1);
    if (res.get_den() != 1) throw QmError("non-integral logarithmic residue");
    return int(res.get_num().get_si());
}

// ---------------------------------------------------------------------------
// Bell polynomials and binomial identities.
// ---------------------------------------------------------------------------

// Binomial coefficient with arbitrary rational top argument; 0 for k < 0.
inline QRat binom(const QRat& tau, int k) {
    if (k < 0) return QRat(0);
    QRat r(1);
    for (int i = 0; i < k; ++i) r *= (tau - i) / (i + 1);
    return rat_canon(r);
}

// Partial ordinary Bell polynomial: [x^n] (a_1 x + a_2 x^2 + ...)^k,
// computed both by the closed multinomial sum and by direct expansion.
// a is 1-indexed through a[i-1].
inline QRat bell_partial(int n, int k, const std::vector<QRat>& a) {
    if (n < 0 || k < 0) return QRat(0);
    if (k == 0) return QRat(n == 0 ? 1 : 0);
    if (n < k) return QRat(0);
    auto ai = [&](int i) { return i >= 1 && i <= int(a.size()) ? a[size_t(i - 1)] : QRat(0); };

    // Direct expansion of (a_1 x + ... + a_n x^n)^k, truncated at x^n.
    std::vector<QRat> pw(size_t(n) + 1, QRat(0));
    pw[0] = 1;
    for (int rep = 0; rep < k; ++rep) {
        std::vector<QRat> nxt(size_t(n) + 1, QRat(0));
        for (int d = 0; d <= n; ++d) {
            if (pw[size_t(d)] == 0) continue;
            for (int i = 1; d + i <= n; ++i) nxt[size_t(d + i)] += pw[size_t(d)] * ai(i);
        }
        pw = nxt;
    }
    QRat expansion = rat_canon(pw[size_t(n)]);

    // Closed multinomial sum over (j_1, ..., j_{n-k+1}) with sum j_i = k,
    // sum i j_i = n, weighted by k!/(j_1! ... j_{n-k+1}!).
    QRat kfact(1);
    for (int i = 2; i <= k; ++i) kfact *= i;
    QRat closed(0);
    int top = n - k + 1;
    // Recursive enumeration over i = 1..top.
    auto rec = [&](auto&& self, int i, int jrem, int nrem, QRat partial) -> void {
        if (i > top) {
            if (jrem == 0 && nrem == 0) closed += partial;
            return;
        }
        for (int j = 0; j <= jrem && i * j <= nrem; ++j) {
            QRat term = partial;
            for (int s = 1; s <= j; ++s) term *= ai(i) / s;
            self(self, i + 1, jrem - j, nrem - i * j, term);
        }
    };
    rec(rec, 1, k, n, kfact);
    closed = rat_canon(closed);

    if (closed != expansion)
        throw QmError("bell_partial: closed form disagrees with expansion");
    return expansion;
}

// Affine weight alpha(l, m) = c0 + cl*l + cm*m.
struct AffineAlpha {
    QRat c0, cl, cm;
    QRat operator()(int l, int m) const { return rat_canon(c0 + cl * l + cm * m); }
};

// Binomial-Bell convolution identity
//   binom(tau, k) B^_{n,k}(a) =
//     sum_{m=0}^n sum_{l=0}^m alpha(0,0)/alpha(l,m)
//       binom(tau - alpha(l,m), k - l) binom(alpha(l,m), l)
//       B^_{m,l}(a) B^_{n-m,k-l}(a),
// evaluated on a pseudo-random rational sequence a.
inline bool check_binomial_bell_identity(int n, int k, const QRat& tau,
                                         const AffineAlpha& alpha) {
    for (int l = 0; l <= n; ++l)
        for (int m = 0; m <= n; ++m)
            if (alpha(l, m) == 0)
                throw AlphaVanishes("alpha vanishes on {0..n}^2");

    // Deterministic pseudo-random a-sequence.
    std::vector<QRat> a;
    unsigned long state = 0x9e3779b9ul ^ (unsigned long)(n * 131 + k * 17 + 5);
    for (int i = 0; i < std::max(1, n); ++i) {
        state = state * 6364136223846793005ul + 1442695040888963407ul;
        long num = long(state >> 33 & 15) - 7;
        long den = long(state >> 49 & 7) + 1;
        a.push_back(rat_canon(QRat(num == 0 ? 1 : num, den)));
    }

    QRat lhs = binom(tau, k) * bell_partial(n, k, a);
    QRat rhs(0);
    for (int m = 0; m <= n; ++m)
        for (int l = 0; l <= m; ++l) {
            QRat al = alpha(l, m);
            rhs += alpha(0, 0) / al * binom(tau - al, k - l) * binom(al, l) *
                   bell_partial(m, l, a) * bell_partial(n - m, k - l, a);
        }
    return rat_canon(lhs) == rat_canon(rhs);
}

// exp(sum_{k>0} (1/k) [x^k] f^k z^k) = sum_{k>0} (1/k) [x^(k-1)] f^k z^(k-1)
// for a power series f with f(0) = 1, compared through z^K.
// f is given by its coefficients f[0..] with f[0] == 1.
inline bool check_exp_identity(const std::vector<QRat>& f, int K) {
    if (f.empty() || f[0] != 1) throw BadShape("check_exp_identity needs f(0) = 1");
    int d = K + 2;  // track x-coefficients 0..d-1
    std::vector<QRat> pw(size_t(d), QRat(0));
    pw[0] = 1;
    TSeries lhs_arg(K + 1), rhs(K + 1);
    rhs.set(0, 1);  // k = 1 term: [x^0] f = 1
    for (int k = 1; k <= K + 1; ++k) {
        // pw := f^k truncated at x^(d-1)
        std::vector<QRat> nxt(size_t(d), QRat(0));
        for (int i = 0; i < d; ++i) {
            if (pw[size_t(i)] == 0) continue;
            for (int j = 0; i + j < d && j < int(f.size()); ++j)
                nxt[size_t(i + j)] += pw[size_t(i)] * f[size_t(j)];
        }
        pw = nxt;
        if (k <= K) lhs_arg.set(k, pw[size_t(k)] / k);
        if (k >= 2) rhs.set(k - 1, pw[size_t(k - 1)] / k);
    }
    return lhs_arg.exp_of() == rhs;
}

// ---------------------------------------------------------------------------
// Compositional inverse of a theta-shaped series
//   theta(y) = y + sum_{k>=0} a_k y^(-k),
// where a_k is a power series in t with t-order >= k+1.  The inverse is
//   eta(w) = w exp(- sum_{k>=1} (1/k) [y^0] theta^k w^(-k)),
// and the distinguished value
//   ytilde = -exp(- sum_{k>=1} ((-1)^k/k) [y^0] theta^k)
// satisfies theta(ytilde) = -1.
// ---------------------------------------------------------------------------
struct ThetaShaped {
    // coefficient of y^(-k) for k >= 0; the y^1 coefficient is implicitly 1
    std::map<int, TSeries> a;
    int depth = 0;  // t-truncation depth shared by all coefficients
};

struct EtaResult {
    std::map<int, TSeries> eta;  // w-exponent -> t-series coefficient
    TSeries ytilde;
};

namespace detail {
// Multiply two y-Laurent polynomials with TSeries coefficients, dropping
// y-exponents below lo and zero t-series.
inline std::map<int, TSeries> ymul(const std::map<int, TSeries>& A,
                                   const std::map<int, TSeries>& B, int lo) {
    std::map<int, TSeries> R;
    for (auto& [i, u] : A)
        for (auto& [j, v] : B) {
            if (i + j < lo) continue;
            TSeries p = u * v;
            if (p.is_zero()) continue;
            auto it = R.find(i + j);
            if (it == R.end())
                R.emplace(i + j, p);
            else
                it->second = it->second + p;
        }
    for (auto it = R.begin(); it != R.end();)
        it = it->second.is_zero() ? R.erase(it) : std::next(it);
    return R;
}
}  // namespace detail

inline EtaResult eta_compositional_inverse(const ThetaShaped& theta, int K) {
    const int D = theta.depth;
    if (D <= 0) throw BadShape("theta needs a positive t-depth");
    for (auto& [k, ak] : theta.a) {
        if (k < 0) throw BadShape("theta may only have y^1 and y^(-k), k >= 0");
        if (!ak.is_zero() && ak.t_order() < k + 1)
            throw BadShape("coefficient of y^(-k) must have t-order >= k+1");
    }

    // theta as a y-Laurent polynomial; [y^0] theta^k has t-order >= k, so
    // powers beyond k = D contribute nothing at depth D.
    std::map<int, TSeries> th;
    th.emplace(1, TSeries::constant(1, D));
    for (auto& [k, ak] : theta.a)
        if (!ak.is_zero()) th.emplace(-k, ak);

    int kmax = std::max(K, D);
    std::vector<TSeries> s(size_t(kmax) + 1, TSeries(D));  // s[k] = [y^0] theta^k
    {
        std::map<int, TSeries> pw;
        pw.emplace(0, TSeries::constant(1, D));
        for (int k = 1; k <= kmax; ++k) {
            pw = detail::ymul(pw, th, -(kmax + 1));
            auto it = pw.find(0);
            if (it != pw.end()) s[size_t(k)] = it->second;
        }
    }

    EtaResult out;

    // ytilde = -exp(- sum ((-1)^k / k) s_k); ord_t(s_k) >= k truncates the sum.
    {
        TSeries arg(D);
        for (int k = 1; k <= D; ++k) {
            QRat c = QRat(k % 2 == 0 ? 1 : -1, k);
            arg = arg + s[size_t(k)] * (-c);
        }
        out.ytilde = -arg.exp_of();
    }

    // eta(w) = w exp(-A), A = sum_{k=1}^{K} (1/k) s_k w^(-k).
    {
        std::map<int, TSeries> A;
        for (int k = 1; k <= K; ++k)
            if (!s[size_t(k)].is_zero()) A.emplace(-k, s[size_t(k)] * QRat(-1, k));
        std::map<int, TSeries> ex;
        ex.emplace(0, TSeries::constant(1, D));
        std::map<int, TSeries> pw = ex;
        QRat fact(1);
        for (int j = 1; j <= K; ++j) {
            pw = detail::ymul(pw, A, -K);
            if (pw.empty()) break;
            fact *= j;
            for (auto& [e, v] : pw) {
                TSeries t = v * (1 / fact);
                auto it = ex.find(e);
                if (it == ex.end())
                    ex.emplace(e, t);
                else
                    it->second = it->second + t;
            }
        }
        for (auto& [e, v] : ex)
            if (!v.is_zero()) out.eta.emplace(e + 1, v);
    }

    // Sanity: theta(ytilde) = -1 exactly (within t-depth).
    {
        TSeries val = out.ytilde;
        TSeries yinv = out.ytilde.inverse();
        TSeries ypow = TSeries::constant(1, D);
        int kmax_a = theta.a.empty() ? -1 : theta.a.rbegin()->first;
        for (int k = 0; k <= kmax_a; ++k) {
            auto it = theta.a.find(k);
            if (it != theta.a.end()) val = val + it->second * ypow;
            ypow = ypow * yinv;
        }
        if (val != TSeries::constant(-1, D))
            throw QmError("theta(ytilde) != -1");
    }
    return out;
}

}  // namespace qm
