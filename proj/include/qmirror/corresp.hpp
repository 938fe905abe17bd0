#pragma once
// Open-log correspondence arithmetic: relative-invariant multiple-cover
// coefficients, the winding-1 open multiple-cover transform, the genus <= 1
// discrepancy term, and the end-to-end identity checks.
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmirror/qlaurent.hpp"

namespace qm {

// hbar^(2g) coefficient of ((-1)^(p+1)/p) * hbar / (2 sin(p hbar/2)).
QRat bp_relative_N(int g, int p);

// Winding-1 open multiple-cover transform O_g = sum_i (-1)^i b_i N(g-i, 1)
// on a genus-indexed open-BPS column; the identity map at genus 0.  Only the
// single-boundary winding profile (1) is supported.
std::map<int, QRat> open_multiple_cover(const std::map<int, QRat>& open_bps,
                                        const std::vector<int>& profile, int g_max);

// A product of supplied one-pointed log invariants with a rational weight.
struct BracketTerm {
    QRat coeff;
    std::vector<std::string> refs;  // keys into supplied_log
};

// Everything the correspondence checks consume.  Computed tables are keyed
// (genus, H-degree d); classes are dH on P2 and pi*dH - C on the blow-up.
struct BpsTables {
    std::map<std::pair<int, int>, QRat> closed_gv;  // n_g(pi*dH - C)
    std::map<std::pair<int, int>, QRat> open_bps;   // N_{g,(1)}(dH)
    std::map<std::pair<int, int>, QRat> log_R;      // R_{g,(1, 3d-1)}(dH)
    std::map<std::string, QRat> supplied_log;       // one-pointed blow-up data
    std::map<int, std::vector<BracketTerm>> brackets;  // degree -> bracket sum
    std::map<std::string, QRat> elliptic;           // stationary data (may be empty)
};

// Read blowup_log_invariants.json and elliptic_stationary.json from dir;
// missing or malformed files throw MissingData.
void load_supplied_data(BpsTables& t, const std::string& dir);

// Discrepancy Delta(g, dH): exactly 0 at genus 0; assembled from the log
// invariants, the blow-up GV number, and the supplied bracket at genus 1.
// Genus >= 2 needs elliptic stationary data and throws MissingData while the
// supplied file is empty.
QRat delta_term(int g, int d, const BpsTables& t);

struct CorrespReport {
    struct Line {
        std::string id;
        bool ok = false;
        std::string detail;
    };
    bool ok = true;
    std::vector<Line> lines;
};

// Identity-by-identity verification: (i) the genus-0 correspondence for
// d <= d_max, (ii) the genus-1 degree-4 identity through the multiple-cover
// transform and the supplied bracket, (iii) the winding-1 GV/LMOV equality
// for g <= g_max, d <= d_max.
CorrespReport check_open_log(int g_max, int d_max, const BpsTables& t);

}  // namespace qm
