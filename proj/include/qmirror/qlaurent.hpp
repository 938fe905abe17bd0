#pragma once
#include <gmpxx.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qmirror/errors.hpp"

namespace qm {

using QRat = mpq_class;

inline std::string rat_to_string(const QRat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// mpq_class(num, den) does not reduce to lowest terms; comparisons are only
// reliable on canonical values, so normalize everything entering a container.
inline QRat rat_canon(QRat r) {
    r.canonicalize();
    return r;
}

// Exact Laurent polynomial in q^(1/2).  The key j of the sparse coefficient
// map denotes the monomial q^(j/2), so integer powers of q sit at even keys.
class QLaurent {
public:
    QLaurent() = default;
    QLaurent(long n) {
        if (n != 0) c_[0] = QRat(n);
    }
    QLaurent(const QRat& r) { set(0, r); }

    // q^(j/2) with optional rational coefficient.
    static QLaurent q_half(int j, const QRat& coeff = QRat(1)) {
        QLaurent p;
        p.set(j, coeff);
        return p;
    }

    const std::map<int, QRat>& coeffs() const { return c_; }
    QRat coeff(int j) const {
        auto it = c_.find(j);
        return it == c_.end() ? QRat(0) : it->second;
    }
    bool is_zero() const { return c_.empty(); }
    int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
    int max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    void set(int j, const QRat& raw) {
        QRat v = rat_canon(raw);
        if (v == 0)
            c_.erase(j);
        else
            c_[j] = v;
    }
    void add_to(int j, const QRat& raw) {
        QRat v = rat_canon(raw);
        if (v == 0) return;
        auto [it, fresh] = c_.try_emplace(j, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
    }

    QLaurent& operator+=(const QLaurent& o) {
        for (auto& [j, v] : o.c_) add_to(j, v);
        return *this;
    }
    QLaurent& operator-=(const QLaurent& o) {
        for (auto& [j, v] : o.c_) add_to(j, -v);
        return *this;
    }
    friend QLaurent operator+(QLaurent a, const QLaurent& b) { return a += b; }
    friend QLaurent operator-(QLaurent a, const QLaurent& b) { return a -= b; }
    friend QLaurent operator-(const QLaurent& a) {
        QLaurent r;
        for (auto& [j, v] : a.c_) r.c_[j] = -v;
        return r;
    }
    friend QLaurent operator*(const QLaurent& a, const QLaurent& b) {
        QLaurent r;
        for (auto& [j1, v1] : a.c_)
            for (auto& [j2, v2] : b.c_) r.add_to(j1 + j2, v1 * v2);
        return r;
    }
    QLaurent& operator*=(const QLaurent& o) { return *this = *this * o; }
    friend QLaurent operator*(const QLaurent& a, const QRat& s) {
        QLaurent r;
        if (s != 0)
            for (auto& [j, v] : a.c_) r.c_[j] = v * s;
        return r;
    }
    friend QLaurent operator*(const QRat& s, const QLaurent& a) { return a * s; }

    bool operator==(const QLaurent& o) const { return c_ == o.c_; }
    bool operator!=(const QLaurent& o) const { return c_ != o.c_; }

    QLaurent pow(unsigned n) const {
        QLaurent r(1);
        for (unsigned i = 0; i < n; ++i) r *= *this;
        return r;
    }

    bool is_palindromic() const {
        for (auto& [j, v] : c_)
            if (coeff(-j) != v) return false;
        return true;
    }

    // q^(j/2) -> q^(kj/2)
    QLaurent adams(int k) const {
        QLaurent r;
        for (auto& [j, v] : c_) r.add_to(j * k, v);
        return r;
    }

    // Multiply by q^(dj/2).
    QLaurent shifted(int dj) const {
        QLaurent r;
        for (auto& [j, v] : c_) r.c_[j + dj] = v;
        return r;
    }

    QRat at_q1() const {
        QRat s(0);
        for (auto& [j, v] : c_) s += v;
        return s;
    }

    // Exact division; throws NotInBasis when the remainder is nonzero.
    QLaurent divide_exact(const QLaurent& d) const;

    // Canonical serialization: array of [j, num, den] triples sorted by j.
    std::string to_json() const {
        std::ostringstream os;
        os << "[";
        bool first = true;
        for (auto& [j, v] : c_) {
            if (!first) os << ",";
            first = false;
            os << "[" << j << "," << v.get_num().get_str() << ","
               << v.get_den().get_str() << "]";
        }
        os << "]";
        return os.str();
    }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            const auto& [j, v] = *it;
            if (!first) os << (v > 0 ? " + " : " - ");
            if (first && v < 0) os << "-";
            first = false;
            QRat a = abs(v);
            if (a != 1 || j == 0) os << rat_to_string(a);
            if (j != 0) {
                if (a != 1) os << "*";
                os << "q^";
                if (j % 2 == 0)
                    os << "(" << j / 2 << ")";
                else
                    os << "(" << j << "/2)";
            }
        }
        return os.str();
    }

private:
    std::map<int, QRat> c_;
};

inline QLaurent QLaurent::divide_exact(const QLaurent& d) const {
    if (d.is_zero()) throw ZeroSeries("division by zero Laurent polynomial");
    if (is_zero()) return QLaurent();
    QLaurent rem = *this, quot;
    int dtop = d.max_exp();
    QRat dlead = d.coeff(dtop);
    // An exact quotient has exponents >= min_exp - d.min_exp().
    const int lo = min_exp() - d.min_exp();
    while (!rem.is_zero()) {
        int rtop = rem.max_exp();
        int shift = rtop - dtop;
        if (shift < lo) throw NotInBasis("inexact Laurent division");
        QRat c = rem.coeff(rtop) / dlead;
        quot.add_to(shift, c);
        rem -= d.shifted(shift) * c;
    }
    return quot;
}

// Even hbar-series: coefficients of hbar^(lead), hbar^(lead+2), ...
struct HbarSeries {
    int lead = 0;
    std::vector<QRat> coeffs;

    QRat coeff_h(int pow) const {
        if (pow < lead || (pow - lead) % 2 != 0) return QRat(0);
        size_t i = size_t(pow - lead) / 2;
        return i < coeffs.size() ? coeffs[i] : QRat(0);
    }
};

// Substitute q = e^{i hbar}: pairs q^(j/2)+q^(-j/2) become 2 cos(j hbar / 2).
// Exact rational coefficients through hbar^(2 g_max).
inline HbarSeries hbar_expand(const QLaurent& p, int g_max) {
    for (auto& [j, v] : p.coeffs())
        if (p.coeff(-j) != v)
            throw NonPalindromic("hbar_expand requires a palindromic input: " +
                                 p.to_string());
    HbarSeries h;
    h.lead = 0;
    h.coeffs.assign(size_t(g_max) + 1, QRat(0));
    h.coeffs[0] += p.coeff(0);
    for (auto& [j, v] : p.coeffs()) {
        if (j <= 0) continue;
        // q^(j/2)+q^(-j/2) = 2 cos(j hbar/2)
        //                  = 2 sum_g (-1)^g j^(2g) / (4^g (2g)!) hbar^(2g)
        QRat term(2);  // 2 * j^(2g) / (4^g (2g)!) with alternating sign
        for (int g = 0; g <= g_max; ++g) {
            h.coeffs[size_t(g)] += (g % 2 == 0 ? v : -v) * term;
            // next factor: * j^2 / (4 (2g+1)(2g+2))
            term *= QRat(j) * j;
            term /= QRat(4) * (2 * g + 1) * (2 * g + 2);
        }
    }
    return h;
}

// Polynomial (with a possible simple pole) in z = (q^(1/2)-q^(-1/2))^2.
struct ZPoly {
    std::map<int, QRat> coeffs;  // power of z -> coefficient; power >= -1

    QRat coeff(int k) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? QRat(0) : it->second;
    }
    bool operator==(const ZPoly& o) const { return coeffs == o.coeffs; }
    std::string to_string() const {
        if (coeffs.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, v] : coeffs) {
            if (!first) os << " + ";
            first = false;
            os << rat_to_string(v);
            if (k != 0) os << "*z^(" << k << ")";
        }
        return os.str();
    }
};

// z = q - 2 + q^(-1) as a QLaurent.
inline QLaurent z_of_q() {
    QLaurent z;
    z.set(2, QRat(1));
    z.set(0, QRat(-2));
    z.set(-2, QRat(1));
    return z;
}

// Greedy top-exponent elimination against powers of z (non-negative powers).
inline ZPoly to_z_basis(const QLaurent& p) {
    if (!p.is_palindromic()) throw NotInBasis("input is not palindromic: " + p.to_string());
    ZPoly out;
    QLaurent rem = p;
    const QLaurent z = z_of_q();
    while (!rem.is_zero()) {
        int top = rem.max_exp();
        if (top < 0 || top % 2 != 0)
            throw NotInBasis("remainder not expressible in z: " + rem.to_string());
        int k = top / 2;
        QRat c = rem.coeff(top);
        out.coeffs[k] = c;
        rem -= z.pow(unsigned(k)) * c;
        if (!rem.is_zero() && rem.max_exp() >= top)
            throw NotInBasis("elimination failed: " + rem.to_string());
    }
    return out;
}

inline QLaurent from_z_basis(const ZPoly& zp) {
    QLaurent r;
    const QLaurent z = z_of_q();
    for (auto& [k, v] : zp.coeffs) {
        if (k < 0) throw NotInBasis("negative z-power has no Laurent expansion");
        r += z.pow(unsigned(k)) * v;
    }
    return r;
}

// Exact rational function of q^(1/2).
class RatFun {
public:
    RatFun() : num_(), den_(1) {}
    RatFun(const QLaurent& n) : num_(n), den_(1) {}
    RatFun(long n) : num_(n), den_(1) {}
    RatFun(const QLaurent& n, const QLaurent& d) : num_(n), den_(d) {
        if (den_.is_zero()) throw ZeroSeries("RatFun with zero denominator");
        normalize();
    }

    const QLaurent& num() const { return num_; }
    const QLaurent& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw ZeroSeries("RatFun division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    // Cross-multiplication equality (independent of normalization).
    bool operator==(const RatFun& o) const {
        return (num_ * o.den_) == (o.num_ * den_);
    }
    bool operator!=(const RatFun& o) const { return !(*this == o); }

    RatFun adams(int k) const { return RatFun(num_.adams(k), den_.adams(k)); }

    std::string to_string() const {
        if (den_ == QLaurent(1)) return num_.to_string();
        return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
    }

private:
    // gcd normalization: clear q-powers, divide by polynomial gcd, make the
    // denominator's leading coefficient positive.
    void normalize();
    static QLaurent poly_gcd(QLaurent a, QLaurent b);

    QLaurent num_, den_;
};

inline QLaurent RatFun::poly_gcd(QLaurent a, QLaurent b) {
    // Both inputs shifted to have min_exp 0 by the caller.
    while (!b.is_zero()) {
        // remainder of a by b
        QLaurent rem = a;
        int dtop = b.max_exp();
        QRat dlead = b.coeff(dtop);
        while (!rem.is_zero() && rem.max_exp() >= dtop) {
            int shift = rem.max_exp() - dtop;
            QRat c = rem.coeff(rem.max_exp()) / dlead;
            rem -= b.shifted(shift) * c;
        }
        a = b;
        b = rem.shifted(-rem.min_exp());
        if (b.is_zero()) break;
        // normalize to limit coefficient growth
        b = b * (QRat(1) / b.coeff(b.max_exp()));
    }
    return a;
}

inline void RatFun::normalize() {
    if (num_.is_zero()) {
        den_ = QLaurent(1);
        return;
    }
    int sn = num_.min_exp(), sd = den_.min_exp();
    num_ = num_.shifted(-sn);
    den_ = den_.shifted(-sd);
    int qshift = sn - sd;  // overall q^(qshift/2) carried by the numerator
    QLaurent g = poly_gcd(num_, den_);
    if (g.max_exp() > 0) {
        num_ = num_.divide_exact(g);
        den_ = den_.divide_exact(g);
    }
    // Convention: denominator leading coefficient is +1.
    QRat lead = den_.coeff(den_.max_exp());
    QRat inv = 1 / lead;
    num_ = num_ * inv;
    den_ = den_ * inv;
    num_ = num_.shifted(qshift);
}

}  // namespace qm
