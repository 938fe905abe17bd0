// qmirror: exact q-refined periods, mirror maps, theta functions, and
// open/closed BPS invariants of local toric surfaces.
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmirror/corresp.hpp"
#include "qmirror/mirror.hpp"
#include "qmirror/periods.hpp"
#include "qmirror/verify.hpp"
#include "qmirror/vertex.hpp"

using namespace qm;
using nlohmann::ordered_json;

namespace {

constexpr int kExitIdentity = 1;
constexpr int kExitInput = 2;
constexpr int kExitMissingData = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- surface loading -------------------------------------------------------

struct Surface {
    PolygonData p;
    ClassLattice c;
    int unit = 1;  // smallest positive anticanonical degree of a basis class

    Surface(PolygonData poly) : p(std::move(poly)), c(build_classes(p)) {
        int u = 0;
        for (int d : c.basis_degree)
            if (d > 0 && (u == 0 || d < u)) u = d;
        unit = u == 0 ? 1 : u;
    }
};

PolygonData polygon_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open polygon file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed polygon file " + path + ": " + e.what());
    }
    if (!j.contains("points")) throw InputError("polygon file lacks \"points\"");
    std::vector<Vec2> pts;
    for (const auto& pt : j["points"]) {
        if (!pt.is_array() || pt.size() != 2)
            throw InputError("polygon points must be [a, b] pairs");
        pts.push_back({pt[0].get<int>(), pt[1].get<int>()});
    }
    return make_polygon(j.value("name", std::string("polygon")), pts);
}

Surface load_surface(const std::string& preset, const std::string& polygon) {
    if (!polygon.empty()) return Surface(polygon_from_file(polygon));
    try {
        return Surface(polygon_preset(preset));
    } catch (const QmError& e) {
        std::ostringstream names;
        for (const auto& n : polygon_preset_names()) names << " " << n;
        throw InputError(std::string(e.what()) + "; presets:" + names.str());
    }
}

// --- rendering -------------------------------------------------------------

std::string class_label(const ClassLattice& c, const MultiDegree& d) {
    std::ostringstream os;
    bool first = true;
    for (int j = 0; j < c.rank; ++j) {
        int k = d[size_t(j)];
        if (k == 0) continue;
        if (!first) os << "+";
        if (k != 1) os << k << "*";
        os << (c.rank == 1 ? "H" : "C" + std::to_string(j + 1));
        first = false;
    }
    return first ? "0" : os.str();
}

std::string monomial_label(int a, int b) {
    if (a == 1 && b == 0) return "X";
    if (a == 0 && b == 1) return "Y";
    return "zhat(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

std::string render_potential(const Surface& s, const Potential& f) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [ab, coeff] : f.element.terms) {
        if (!first) os << " + ";
        first = false;
        // Coefficient: sum of z^class * (q-Laurent) factors.
        std::vector<std::string> parts;
        for (const auto& [cls, v] : coeff.terms) {
            std::string part;
            if (cls != s.c.zero()) {
                std::string lbl = class_label(s.c, cls);
                if (lbl.find_first_of("+-*") != std::string::npos)
                    lbl = "(" + lbl + ")";
                part = "z^" + lbl;
            }
            if (!(v == QLaurent(1))) {
                std::string vs = v.to_string();
                if (v.coeffs().size() > 1) vs = "(" + vs + ")";
                part += part.empty() ? vs : "*" + vs;
            }
            if (!part.empty()) parts.push_back(part);
        }
        std::string c;
        if (parts.size() == 1)
            c = parts[0];
        else if (parts.size() > 1) {
            c = "(";
            for (size_t i = 0; i < parts.size(); ++i) c += (i ? " + " : "") + parts[i];
            c += ")";
        }
        os << (c.empty() ? "" : c + " * ") << monomial_label(ab.first, ab.second);
    }
    return os.str();
}

ordered_json laurent_json(const QLaurent& v) {
    // [[j, num, den], ...] sorted by descending exponent of q^(j/2).
    ordered_json arr = ordered_json::array();
    const auto& m = v.coeffs();
    for (auto it = m.rbegin(); it != m.rend(); ++it)
        arr.push_back({it->first, it->second.get_num().get_str(),
                       it->second.get_den().get_str()});
    return arr;
}

void laurent_csv(std::ostream& os, const std::string& prefix, const QLaurent& v) {
    const auto& m = v.coeffs();
    for (auto it = m.rbegin(); it != m.rend(); ++it)
        os << prefix << "," << it->first << "," << it->second.get_num().get_str()
           << "," << it->second.get_den().get_str() << "\n";
}

ordered_json graded_json(const ClassLattice& c, const GradedSeries& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& [cls, v] : s.terms)
        arr.push_back({{"class", class_label(c, cls)}, {"coeffs", laurent_json(v)}});
    return arr;
}

void graded_csv(std::ostream& os, const std::string& prefix, const ClassLattice& c,
                const GradedSeries& s) {
    for (const auto& [cls, v] : s.terms)
        laurent_csv(os, prefix + "," + class_label(c, cls), v);
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("cannot write output file: " + out);
    f << text;
}

// --- shared option bundle --------------------------------------------------

struct Options {
    std::string preset = "P2";
    std::string polygon;
    std::string surface;  // for gv/lmov
    int dmax = 3;
    int gmax = 1;
    int wmax = 1;
    std::string method = "const";
    std::string format = "json";
    std::string out;
    std::string suite = "paper";
    std::string only;
    int threads = 1;
    std::string data_dir;
    std::string config;
};

void apply_config(Options& o, const CLI::App& cmd) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw InputError("cannot open config file: " + o.config);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed config file: " + std::string(e.what()));
    }
    // Flags win over config values; config wins over defaults.
    auto unset = [&](const std::string& flag) {
        auto* opt = cmd.get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    if (j.contains("preset") && unset("--preset")) o.preset = j["preset"];
    if (j.contains("polygon") && unset("--polygon")) o.polygon = j["polygon"];
    if (j.contains("surface") && unset("--surface")) o.surface = j["surface"];
    if (j.contains("dmax") && unset("--dmax")) o.dmax = j["dmax"];
    if (j.contains("gmax") && unset("--gmax")) o.gmax = j["gmax"];
    if (j.contains("wmax") && unset("--wmax")) o.wmax = j["wmax"];
    if (j.contains("method") && unset("--method")) o.method = j["method"];
    if (j.contains("format") && unset("--format")) o.format = j["format"];
    if (j.contains("out") && unset("--out")) o.out = j["out"];
    if (j.contains("only") && unset("--only")) o.only = j["only"];
    if (j.contains("threads") && unset("--threads")) o.threads = j["threads"];
    if (j.contains("data_dir") && unset("--data-dir")) o.data_dir = j["data_dir"];
}

void check_bounds(const Options& o, bool is_verify) {
    if (o.dmax < 1 || o.gmax < 0 || o.wmax < 1)
        throw InputError("bounds must be positive (dmax, wmax >= 1; gmax >= 0)");
    if (o.method != "const" && o.method != "wavefunction" && o.method != "both")
        throw InputError("method must be const, wavefunction, or both");
    if (is_verify) {
        if (o.format != "json" && o.format != "text")
            throw InputError("format must be json or text");
    } else if (o.format != "json" && o.format != "csv") {
        throw InputError("format must be json or csv");
    }
}

// --- subcommands -----------------------------------------------------------

int cmd_potential(const Options& o) {
    Surface s = load_surface(o.preset, o.polygon);
    Potential f = build_potential(s.p, s.c, s.unit);
    emit(o.out, render_potential(s, f) + "\n");
    return 0;
}

GradedSeries compute_a_period(const Options& o, const Surface& s, int N, bool* agree) {
    Potential f = build_potential(s.p, s.c, N);
    if (o.method == "const") return a_period_const(f, N);
    if (o.method == "wavefunction") return a_period_wavefunction(f, N);
    GradedSeries a = a_period_const(f, N);
    bool eq = a == a_period_wavefunction(f, N);
    if (agree) *agree = eq;
    return a;
}

int cmd_series(const Options& o, const std::string& which) {
    std::ostringstream csv;
    ordered_json j;
    j["series"] = which;

    if (which == "a-period" || which == "mirror-map" || which == "theta1" ||
        which == "log-invariants") {
        Surface s = load_surface(o.preset, o.polygon);
        int N = o.dmax * s.unit;
        j["surface"] = s.p.name;
        bool agree = true;
        if (which == "a-period") {
            GradedSeries a = compute_a_period(o, s, N, &agree);
            if (!agree) {
                std::cerr << "a-period: the two algorithms disagree\n";
                return kExitIdentity;
            }
            j["method"] = o.method;
            j["terms"] = graded_json(s.c, a);
            csv << "series,class,j,num,den\n";
            graded_csv(csv, "a-period", s.c, a);
        } else {
            Potential f = build_potential(s.p, s.c, N);
            GradedSeries a = a_period_const(f, N);
            MirrorMap Q = closed_mirror_map(a, s.c, N);
            MirrorMap z = invert_mirror_map(Q, s.c, N);
            GradedSeries M = open_mirror_map(z, a, s.c, N);
            if (which == "mirror-map") {
                j["closed"] = ordered_json::array();
                j["inverse"] = ordered_json::array();
                csv << "series,component,class,j,num,den\n";
                for (int k = 0; k < s.c.rank; ++k) {
                    j["closed"].push_back({{"component", k},
                                           {"terms", graded_json(s.c, Q.component(k))}});
                    j["inverse"].push_back({{"component", k},
                                            {"terms", graded_json(s.c, z.component(k))}});
                    graded_csv(csv, "closed," + std::to_string(k), s.c, Q.component(k));
                    graded_csv(csv, "inverse," + std::to_string(k), s.c, z.component(k));
                }
                j["open"] = graded_json(s.c, M);
                for (const auto& [cls, v] : M.terms)
                    laurent_csv(csv, "open,-," + class_label(s.c, cls), v);
            } else if (which == "theta1") {
                ThetaSeries th = theta1_infinity(M, s.c, N);
                j["lead"] = th.lead;
                j["terms"] = ordered_json::array();
                csv << "yexp,class,j,num,den\n";
                for (auto it = th.terms.rbegin(); it != th.terms.rend(); ++it) {
                    j["terms"].push_back(
                        {{"yexp", it->first}, {"coeff", graded_json(s.c, it->second)}});
                    graded_csv(csv, std::to_string(it->first), s.c, it->second);
                }
            } else {  // log-invariants
                LogInvariantTable R = log_invariants_extract(M, o.gmax, N);
                j["rows"] = ordered_json::array();
                csv << "genus,class,num,den\n";
                for (const auto& [key, v] : R.entries) {
                    j["rows"].push_back({key.first, class_label(s.c, key.second),
                                         v.get_num().get_str(), v.get_den().get_str()});
                    csv << key.first << "," << class_label(s.c, key.second) << ","
                        << v.get_num().get_str() << "," << v.get_den().get_str()
                        << "\n";
                }
            }
        }
    } else if (which == "gv") {
        std::string sf = o.surface.empty() ? "f1" : o.surface;
        if (sf != "f1" && sf != "F1")
            throw InputError("gv extraction is implemented for --surface f1");
        GvTable gv =
            gv_extract(wz_log(closed_Z(VertexSurface::F1, o.dmax, o.wmax)), o.dmax,
                       o.wmax, o.gmax);
        j["surface"] = "f1";
        j["rows"] = ordered_json::array();
        csv << "genus,degree,winding,num,den\n";
        for (const auto& [key, v] : gv) {
            auto [g, d, w] = key;
            j["rows"].push_back({g, d, w, v.get_num().get_str(), v.get_den().get_str()});
            csv << g << "," << d << "," << w << "," << v.get_num().get_str() << ","
                << v.get_den().get_str() << "\n";
        }
    } else if (which == "lmov") {
        if (o.wmax != 1 && o.wmax != 2)
            throw InputError("lmov tables are implemented for winding 1 and 2");
        j["rows"] = ordered_json::array();
        csv << "rep,genus,degree,num,den\n";
        auto add = [&](const std::string& rep,
                       const std::map<std::pair<int, int>, QRat>& t) {
            for (const auto& [key, v] : t) {
                j["rows"].push_back({rep, key.first, key.second,
                                     v.get_num().get_str(), v.get_den().get_str()});
                csv << rep << "," << key.first << "," << key.second << ","
                    << v.get_num().get_str() << "," << v.get_den().get_str() << "\n";
            }
        };
        if (o.wmax == 1) {
            add("(1)", lmov_w1(o.dmax));
        } else {
            LmovW2 t = lmov_w2(o.dmax, o.gmax);
            add("(2)", t.rep2);
            add("(1,1)", t.rep11);
        }
    } else {
        throw InputError("unknown series: " + which);
    }

    emit(o.out, o.format == "json" ? j.dump(2) + "\n" : csv.str());
    return 0;
}

int cmd_verify(const Options& o) {
    if (o.suite != "paper") throw InputError("unknown suite: " + o.suite);
    VerifyOptions vo;
    vo.only = o.only;
    vo.threads = o.threads;
    vo.data_dir = o.data_dir;
    VerifyReport rep = run_paper_suite(vo);
    emit(o.out, o.format == "json" ? rep.to_json() : rep.to_text());
    return rep.ok ? 0 : kExitIdentity;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact q-refined periods, mirror maps, and BPS invariants of "
                 "local toric surfaces"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--preset", o.preset, "surface preset name");
        cmd->add_option("--polygon", o.polygon, "polygon JSON file");
        cmd->add_option("--config", o.config, "JSON config file (flags win)");
        cmd->add_option("--out", o.out, "output file (default stdout)");
    };

    CLI::App* pot = app.add_subcommand("potential", "print the superpotential");
    add_common(pot);

    CLI::App* ser = app.add_subcommand("series", "compute and export a series");
    std::string which;
    ser->add_option("which", which, "a-period|mirror-map|theta1|log-invariants|gv|lmov")
        ->required();
    add_common(ser);
    ser->add_option("--surface", o.surface, "vertex surface (gv: f1)");
    ser->add_option("--dmax", o.dmax, "maximum degree");
    ser->add_option("--gmax", o.gmax, "maximum genus");
    ser->add_option("--wmax", o.wmax, "maximum winding");
    ser->add_option("--method", o.method, "a-period algorithm: const|wavefunction|both");
    ser->add_option("--format", o.format, "json|csv");

    CLI::App* ver = app.add_subcommand("verify", "run the identity suite");
    ver->add_option("--suite", o.suite, "suite name (paper)");
    ver->add_option("--only", o.only, "substring filter on check groups");
    ver->add_option("--threads", o.threads, "worker threads");
    ver->add_option("--data-dir", o.data_dir, "supplied-data directory");
    ver->add_option("--format", o.format, "json|text output")
        ->default_str("text");
    ver->add_option("--config", o.config, "JSON config file (flags win)");
    ver->add_option("--out", o.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (ver->parsed() && ver->get_option("--format")->count() == 0)
            o.format = "text";
        CLI::App* active = app.get_subcommands().front();
        apply_config(o, *active);
        check_bounds(o, ver->parsed());
        if (pot->parsed()) return cmd_potential(o);
        if (ser->parsed()) return cmd_series(o, which);
        return cmd_verify(o);
    } catch (const MissingData& e) {
        std::cerr << e.what() << "\n";
        return kExitMissingData;
    } catch (const InputError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const QmError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    }
}
