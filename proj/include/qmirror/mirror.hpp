#pragma once
// q-refined closed/open mirror maps, the theta function at infinity,
// log-invariant extraction, the theta-function tower, and the equation
// satisfied by the full log potential.
#include <map>
#include <utility>
#include <vector>

#include "qmirror/periods.hpp"
#include "qmirror/serinv.hpp"

namespace qm {

// --- graded-series helpers -------------------------------------------------

GradedSeries gs_one(const ClassLattice& lat, int N);
// z^beta -> (-1)^(beta . E) z^beta
GradedSeries gs_neg_z(const GradedSeries& s);
// Multiplication by z^d.
GradedSeries gs_shift_class(const GradedSeries& s, const MultiDegree& d);
// exp of a series without class-0 part.
GradedSeries gs_exp(const GradedSeries& s);
// Inverse of a series with class-0 part 1.
GradedSeries gs_inverse(const GradedSeries& s);
// Integer power (possibly negative) of a series with class-0 part 1.
GradedSeries gs_unit_pow(const GradedSeries& s, int e);
// (1 + w)^tau by the binomial series, for s = 1 + w with w of positive degree.
GradedSeries gs_binom_pow(const GradedSeries& s, const QRat& tau);

// --- mirror maps -----------------------------------------------------------

// A substitution sending the j-th basis-class monomial to (basis-class
// monomial) * unit[j].  The unit factors are stored unshifted so that they
// stay exact through relative degree N; the shifted component loses its top
// terms to the absolute-degree truncation and is derived on demand.
struct MirrorMap {
    const ClassLattice* lat = nullptr;
    int N = 0;
    std::vector<GradedSeries> unit;

    GradedSeries component(int j) const;
};

// Image of a series under the substitution.
GradedSeries gs_substitute(const GradedSeries& s, const MirrorMap& phi);

// Q^beta(z,q) = z^beta e^(-(beta . E) a(-z,q)), componentwise over the basis.
MirrorMap closed_mirror_map(const GradedSeries& a, const ClassLattice& c, int N);

// z^beta(Q,q) with Q^beta(z(Q,q),q) = Q^beta, by fixed-point iteration on the
// grading filtration.
MirrorMap invert_mirror_map(const MirrorMap& Qmap, const ClassLattice& c, int N);

// M(Q,q) = e^(-a(-z(Q,q),q)); cross-checked against the per-class root
// expressions (z^beta(Q,q)/Q^beta)^(-1/(beta . E)).
GradedSeries open_mirror_map(const MirrorMap& z_of_Q, const GradedSeries& a,
                             const ClassLattice& c, int N);

// --- theta functions -------------------------------------------------------

// Laurent series in y over the graded class ring; exact in q.
struct ThetaSeries {
    const ClassLattice* lat = nullptr;
    int N = 0;
    int lead = 0;  // leading y-exponent
    std::map<int, GradedSeries> terms;

    GradedSeries coeff(int yexp) const;
};

// theta_1 at infinity: y M(Q,q) under Q^beta = z^beta (-1/y)^(beta . E).
ThetaSeries theta1_infinity(const GradedSeries& M, const ClassLattice& c, int N);

// Substitute y -> v (a unit multiple of -1 or any invertible series).
GradedSeries theta_eval(const ThetaSeries& th, const GradedSeries& v);

// ytilde = -exp(a(-z,q)); satisfies theta1(ytilde) = -1.
GradedSeries ytilde_from_a(const GradedSeries& a);

// --- log invariants --------------------------------------------------------

// (g, beta) -> R_{g,(1, beta.E - 1)}; genus-0 entries carry the integer
// open-mirror-map coefficients under the (-1)^(beta.E)/(beta.E-1) weighting.
struct LogInvariantTable {
    int gmax = 0;
    std::map<std::pair<int, MultiDegree>, QRat> entries;

    QRat at(int g, const MultiDegree& beta) const;
};

LogInvariantTable log_invariants_extract(const GradedSeries& M, int g_max, int N);

// --- theta tower and the full log potential --------------------------------

// Theta functions in the hbar-truncated ring: y-exponent -> class -> even
// power series in hbar through hbar^(2 gmax).
struct ThetaHbar {
    const ClassLattice* lat = nullptr;
    int N = 0;
    int gmax = 0;
    int lead = 0;
    std::map<int, std::map<MultiDegree, TSeries>> terms;

    bool is_zero() const { return terms.empty(); }
    void add_term(int yexp, const MultiDegree& c, const TSeries& v);
};

ThetaHbar th_mul(const ThetaHbar& a, const ThetaHbar& b);
ThetaHbar th_add(const ThetaHbar& a, const ThetaHbar& b);
ThetaHbar th_sub(const ThetaHbar& a, const ThetaHbar& b);

// The structure constant alpha_{n,1}^m (m < n; zero when m = n) and
// alpha_{1,n}^0, assembled from the log-invariant table.
ThetaHbar theta_alpha_n1m(const ClassLattice& c, const LogInvariantTable& R, int n,
                          int m, int N);
ThetaHbar theta_alpha_1n0(const ClassLattice& c, const LogInvariantTable& R, int n,
                          int N);

// theta_0 = 1, theta_(n+1) = theta_n theta_1 - sum_m alpha_{n,1}^m theta_m
// - alpha_{1,n}^0; returns theta_0 .. theta_(n_max).
std::vector<ThetaHbar> theta_tower(const ThetaSeries& theta1,
                                   const LogInvariantTable& R, int n_max, int N);

// Residual of the full-log-potential equation per U-power 0 .. n_max-1
// (all zero when the tower is consistent):
//   0 = res_y W + res_y(D_U^(-1) W) - theta_1
//       + (1/U - theta_1 + res_y(D_U^(-1) W)) W,     W = sum_{n>=1} theta_n U^n.
std::vector<ThetaHbar> check_full_log_potential(const std::vector<ThetaHbar>& thetas,
                                                int N);

}  // namespace qm
