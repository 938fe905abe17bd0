#pragma once
// Topological-vertex engine: partitions, vertex amplitudes, closed partition
// functions of local P2 and local F1, open amplitudes of the outer brane, the
// winding theorem checker, and GV / LMOV extraction.
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qmirror/qlaurent.hpp"

namespace qm {

// --- partitions ------------------------------------------------------------

struct Partition {
    std::vector<int> parts;  // non-increasing, positive

    Partition() = default;
    Partition(std::initializer_list<int> p) : parts(p) { validate(); }
    explicit Partition(std::vector<int> p) : parts(std::move(p)) { validate(); }

    int size() const;
    Partition transpose() const;
    // kappa(lambda) = sum_i lambda_i (lambda_i - 2i + 1), i 1-based.
    long kappa() const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.parts == b.parts;
    }
    friend bool operator<(const Partition& a, const Partition& b) {
        return a.parts < b.parts;
    }

private:
    void validate() const;
};

// All partitions of n.
std::vector<Partition> partitions_of(int n);
// All partitions of size 0..max_size.
std::vector<Partition> partitions_up_to(int max_size);

// --- exact rational functions with factored denominators -------------------

// num / prod_j (u^(2j) - 1)^(den[j]) with u = q^(1/2); num is a Laurent
// polynomial in u (QLaurent key j <-> u^j).  Keeping the denominator in
// factored form avoids polynomial gcds throughout the vertex sums.
struct QFrac {
    QLaurent num;
    std::map<int, int> den;

    QFrac() = default;
    QFrac(const QLaurent& n) : num(n) {}

    bool is_zero() const { return num.is_zero(); }
};

QFrac qf_add(const QFrac& a, const QFrac& b);
QFrac qf_sub(const QFrac& a, const QFrac& b);
QFrac qf_mul(const QFrac& a, const QFrac& b);
QFrac qf_scale(const QFrac& a, const QLaurent& s);
// Multiply by 1 / (u^(2j) - 1).
QFrac qf_div_factor(const QFrac& a, int j);
// u -> u^k (maps every denominator factor to another factor).
QFrac qf_adams(const QFrac& a, int k);
bool qf_eq(const QFrac& a, const QFrac& b);
// Cancel every denominator factor into the numerator; throws NotInBasis if a
// factor does not divide exactly.
QLaurent qf_to_laurent(const QFrac& a);

// --- vertex amplitudes -----------------------------------------------------

// The topological vertex C_{l1 l2 l3} as an exact rational function of
// q^(1/2).  Cyclically symmetric; results are memoized.
QFrac vertex_C(const Partition& l1, const Partition& l2, const Partition& l3);

// --- partition functions ---------------------------------------------------

enum class VertexSurface { P2, F1 };

// Two-variable series: (H-degree, base-degree) -> coefficient.  For P2 the
// base degree is always 0; for F1 the class dH - wC sits at (d, d - w).
struct WeightedZ {
    int d_max = 0;
    int b_max = 0;
    std::map<std::pair<int, int>, QFrac> terms;

    QFrac coeff(int d, int b) const;
};

// log of a series with constant term 1, within the same truncation box.
WeightedZ wz_log(const WeightedZ& z);

// Closed partition function; for F1 both degrees run to their bounds, for P2
// w_max is ignored.  Throws BudgetExceeded beyond the configured desk scale.
WeightedZ closed_Z(VertexSurface surface, int d_max, int w_max);

// Z_nu = Z_P2|_nu / Z_P2 as a Q_H-series (base degree 0).
WeightedZ open_Z_restricted(const Partition& nu, int d_max);

// --- winding theorem -------------------------------------------------------

struct WindingReport {
    bool ok = true;
    int w = 0;
    int first_d = -1;       // first mismatching H-degree, -1 when ok
    std::string detail;
};

// Compare [Q^(dH - wC)] log Z_F1 with the t^w coefficient of
// log(1 + sum_l (-1)^l S_l t^l), S_l = sum_{|nu| = l} Z_nu C_{nu^T (), ()},
// for d <= d_max.  Exact rational-function comparison.
WindingReport check_winding_theorem(int w, int d_max, int g_max);

// --- GV / LMOV extraction --------------------------------------------------

// (g, d, w) -> n_g(dH - wC); integrality is checked downstream by the caller
// via the QRat denominators (always 1 on success).
using GvTable = std::map<std::tuple<int, int, int>, QRat>;

// Multiple-cover subtraction on a free energy (log of closed_Z) followed by
// conversion to the z = (q^(1/2) - q^(-1/2))^2 basis.  Throws NotInBasis if
// a remainder is not polynomial in z.
GvTable gv_extract(const WeightedZ& F, int d_max, int w_max, int g_max);

// LMOV invariants at winding 1: (g, d) -> N_{g,(1)} from
// fhat_(1) = (q^(1/2) - q^(-1/2)) Z_(1).
std::map<std::pair<int, int>, QRat> lmov_w1(int d_max);

// LMOV invariants at winding 2 in representations (2) and (1,1).
struct LmovW2 {
    std::map<std::pair<int, int>, QRat> rep2;   // (g, d) -> N_{g,(2)}
    std::map<std::pair<int, int>, QRat> rep11;  // (g, d) -> N_{g,(1,1)}
};
LmovW2 lmov_w2(int d_max, int g_max);

}  // namespace qm
