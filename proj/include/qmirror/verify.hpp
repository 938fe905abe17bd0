#pragma once
// Identity verification suite: every numeric anchor and structural identity
// the library reproduces, run as independent checks with a deterministic,
// machine-readable report.
#include <string>
#include <vector>

#include "qmirror/errors.hpp"

namespace qm {

struct VerifyLine {
    std::string id;
    std::string expected;
    std::string computed;
    bool ok = false;
};

struct VerifyReport {
    bool ok = true;
    std::vector<VerifyLine> lines;

    std::string to_text() const;  // one PASS/FAIL line per identity
    std::string to_json() const;  // ordered, byte-deterministic
};

struct VerifyOptions {
    std::string only;      // substring filter on check-group ids; empty = all
    int threads = 1;       // worker threads; output is identical for any count
    std::string data_dir;  // supplied-data directory; empty = built-in default
};

// Runs the full identity suite (or the --only subset).  Line order is fixed
// and independent of the thread count.  Throws MissingData if supplied data
// files are absent or malformed.
VerifyReport run_paper_suite(const VerifyOptions& opt);

}  // namespace qm
