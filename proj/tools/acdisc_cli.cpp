// Batch front-end: parse a JSON scenario config, run one of the validation /
// levi / normalize / model / kernel / continue scenarios, and emit a
// machine-readable report plus plot-ready disc samples.
//
// Exit codes: 0 all checks pass, 1 validation or check failure, 2 config or
// argument parse error, 3 runtime failure inside a scenario.

#include "acdisc/continuation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace acdisc;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON <-> numeric helpers.  Complex numbers are [re, im] pairs (a bare number
// is accepted as purely real); matrices are row-major nested arrays; rank-3
// tensors are indexed [row][column][variable].

cx parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return cx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cx(j[0].get<double>(), j[1].get<double>());
    throw ConfigError(where + ": expected a number or [re, im] pair");
}

json dump_complex(cx v) { return json::array({v.real(), v.imag()}); }

std::vector<cx> parse_cvector(const json& j, int n, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ConfigError(where + ": expected an array of length " + std::to_string(n));
    std::vector<cx> out(n);
    for (int k = 0; k < n; ++k) out[k] = parse_complex(j[k], where);
    return out;
}

Mat parse_cmatrix(const json& j, int rows, int cols, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw ConfigError(where + ": expected " + std::to_string(rows) + " rows");
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
            throw ConfigError(where + ": expected " + std::to_string(cols) + " columns");
        for (int c = 0; c < cols; ++c) m(r, c) = parse_complex(j[r][c], where);
    }
    return m;
}

void parse_tensor3(const json& j, Tensor3& t, int n, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ConfigError(where + ": expected shape [n][n][n]");
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) t.at(i, r, k) = parse_complex(j[i][r][k], where);
}

// Polynomial terms: {"row": i, "col": j, "p": [..], "q": [..], "value": [re, im]}
// with p/q the powers of (z_0..z_{n-1}) and their conjugates.
void parse_terms(const json& j, MatrixPoly& m, int n, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of terms");
    for (const json& term : j) {
        const int row = term.at("row").get<int>(), col = term.at("col").get<int>();
        if (row < 0 || row >= n || col < 0 || col >= n)
            throw ConfigError(where + ": row/col out of range");
        BiIndex ix{term.at("p").get<std::vector<int>>(), term.at("q").get<std::vector<int>>()};
        if (static_cast<int>(ix.p.size()) != n || static_cast<int>(ix.q.size()) != n)
            throw ConfigError(where + ": p/q must have length n");
        m.at(row, col).add_scalar_term(ix, parse_complex(term.at("value"), where));
    }
}

void parse_scalar_terms(const json& j, PolyMap& p, int n, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of terms");
    for (const json& term : j) {
        BiIndex ix{term.at("p").get<std::vector<int>>(), term.at("q").get<std::vector<int>>()};
        if (static_cast<int>(ix.p.size()) != n || static_cast<int>(ix.q.size()) != n)
            throw ConfigError(where + ": p/q must have length n");
        p.add_scalar_term(ix, parse_complex(term.at("value"), where));
    }
}

AcsModel parse_structure(const json& cfg, int n) {
    if (!cfg.contains("structure")) return AcsModel::standard(n);
    const json& s = cfg["structure"];
    const std::string kind = s.value("kind", std::string("standard"));
    if (kind == "standard") return AcsModel::standard(n);
    if (kind == "model") {
        const Mat a = parse_cmatrix(s.at("A"), n - 1, n - 1, "structure.A");
        if ((a + a.transpose()).cwiseAbs().maxCoeff() >
            1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
            throw ValidationError("structure.A is not antisymmetric");
        return AcsModel::model_structure(n, a);
    }
    if (kind == "graded") {
        AcsModel j(n);
        if (s.contains("L_mixed")) parse_tensor3(s["L_mixed"], j.L_mixed, n, "structure.L_mixed");
        if (s.contains("L_anti")) parse_tensor3(s["L_anti"], j.L_anti, n, "structure.L_anti");
        if (s.contains("higher1")) parse_terms(s["higher1"], j.higher1, n, "structure.higher1");
        if (s.contains("higher2")) parse_terms(s["higher2"], j.higher2, n, "structure.higher2");
        return j;
    }
    throw ConfigError("structure.kind must be standard, model, or graded");
}

HypersurfaceModel parse_hypersurface(const json& cfg, int n) {
    HypersurfaceModel s(n);
    if (!cfg.contains("hypersurface")) return s;
    const json& h = cfg["hypersurface"];
    if (h.contains("K")) s.K = parse_cmatrix(h["K"], n - 1, n - 1, "hypersurface.K");
    if (h.contains("H")) s.H = parse_cmatrix(h["H"], n - 1, n - 1, "hypersurface.H");
    if (h.contains("remainder"))
        parse_scalar_terms(h["remainder"], s.remainder, n, "hypersurface.remainder");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Report assembly.  Every report embeds the fully resolved config so a re-run
// from the report reproduces identical numbers.

struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

json check_json(const Check& c) {
    return json{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
}

struct Scenario {
    json config;       // resolved config (defaults filled in)
    json extra;        // command-specific report fields
    std::vector<Check> checks;
    std::vector<std::string> violations;

    void check(const std::string& name, double value, double threshold) {
        checks.push_back({name, value, threshold, value <= threshold});
    }
    bool all_pass() const {
        if (!violations.empty()) return false;
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

int write_report(const std::string& command, Scenario& sc, const std::string& out_dir) {
    json rep;
    rep["command"] = command;
    rep["config"] = sc.config;
    rep["checks"] = json::array();
    for (const Check& c : sc.checks) rep["checks"].push_back(check_json(c));
    if (!sc.violations.empty()) rep["violations"] = sc.violations;
    for (auto& [k, v] : sc.extra.items()) rep[k] = v;
    const bool ok = sc.all_pass();
    rep["pass"] = ok;

    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/" + command + "_report.json";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << rep.dump(2) << "\n";

    for (const Check& c : sc.checks)
        std::printf("[%s] %s: %.3e (<= %.3e) %s\n", command.c_str(), c.name.c_str(), c.value,
                    c.threshold, c.pass ? "pass" : "FAIL");
    for (const std::string& v : sc.violations)
        std::printf("[%s] violation: %s\n", command.c_str(), v.c_str());
    std::printf("[%s] report: %s\n", command.c_str(), path.c_str());
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Disc sampling: boundary circle plus interior rays.  Fixed column order,
// 17 significant digits.  surface_value is the defining function along the
// disc (the boundary-membership column); stationarity_residual is the
// conormal-alignment norm on the boundary and the interior-system norm inside.

void emit_samples(const AcsModel& j, const HypersurfaceModel& s, const LiftedDisc& fd,
                  int boundary, int rays, int per_ray, const std::string& path,
                  const std::string& format) {
    const int n = fd.dim();
    const detail::DiscSystem sys = detail::effective_system(j);
    const DiscMap res = detail::holo_residual_core(sys.t1, sys.t2, fd.stacked());
    const PolyMap rho = s.defining_function();

    struct Row {
        cx zeta;
        int on_boundary;
        std::vector<cx> f, g;
        double surface, stationarity;
    };
    std::vector<Row> rows;
    auto sample = [&](cx zeta, bool bnd) {
        Row r;
        r.zeta = zeta;
        r.on_boundary = bnd ? 1 : 0;
        r.f = fd.f.eval(zeta);
        r.g = fd.g.eval(zeta);
        r.surface = rho.eval_scalar(r.f).real();
        if (bnd) {
            try {
                r.stationarity = conormal_residual(s, j, fd, zeta).r.lpNorm<Eigen::Infinity>();
            } catch (const std::exception&) {
                r.stationarity = std::numeric_limits<double>::infinity();
            }
        } else {
            double m = 0.0;
            for (cx v : res.eval(zeta)) m = std::max(m, std::abs(v));
            r.stationarity = m;
        }
        rows.push_back(std::move(r));
    };
    for (int k = 0; k < boundary; ++k) sample(std::polar(1.0, 2.0 * M_PI * k / boundary), true);
    for (int a = 0; a < rays; ++a)
        for (int i = 0; i < per_ray; ++i)
            sample(std::polar((i + 1.0) / (per_ray + 1.0), 2.0 * M_PI * a / rays), false);

    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> cols{"on_boundary", "re_zeta", "im_zeta"};
    for (int k = 0; k < n; ++k) {
        cols.push_back("re_f" + std::to_string(k));
        cols.push_back("im_f" + std::to_string(k));
    }
    for (int k = 0; k < n; ++k) {
        cols.push_back("re_g" + std::to_string(k));
        cols.push_back("im_g" + std::to_string(k));
    }
    cols.push_back("surface_value");
    cols.push_back("stationarity_residual");

    auto values = [n](const Row& r) {
        std::vector<double> v{static_cast<double>(r.on_boundary), r.zeta.real(), r.zeta.imag()};
        for (int k = 0; k < n; ++k) {
            v.push_back(r.f[k].real());
            v.push_back(r.f[k].imag());
        }
        for (int k = 0; k < n; ++k) {
            v.push_back(r.g[k].real());
            v.push_back(r.g[k].imag());
        }
        v.push_back(r.surface);
        v.push_back(r.stationarity);
        return v;
    };

    if (format == "json") {
        json out = json::array();
        for (const Row& r : rows) {
            json o;
            const std::vector<double> v = values(r);
            for (size_t c = 0; c < cols.size(); ++c) o[cols[c]] = v[c];
            out.push_back(o);
        }
        os << out.dump(2) << "\n";
        return;
    }
    for (size_t c = 0; c < cols.size(); ++c) os << cols[c] << (c + 1 < cols.size() ? "," : "\n");
    char buf[64];
    for (const Row& r : rows) {
        const std::vector<double> v = values(r);
        for (size_t c = 0; c < v.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", v[c]);
            os << buf << (c + 1 < v.size() ? "," : "\n");
        }
    }
}

// ---------------------------------------------------------------------------
// Scenario bodies.

std::vector<cx> random_tangent(std::mt19937_64& gen, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cx> v(n, cx(0.0));
    double norm = 0.0;
    while (norm < 0.1) {
        norm = 0.0;
        for (int k = 0; k + 1 < n; ++k) {
            v[k] = cx(u(gen), u(gen));
            norm += std::norm(v[k]);
        }
        norm = std::sqrt(norm);
    }
    for (int k = 0; k + 1 < n; ++k) v[k] /= norm;
    return v;
}

void run_validate(const json& cfg, Scenario& sc, std::mt19937_64& gen) {
    const int n = cfg.at("n").get<int>();
    const double tol = sc.config["tolerance"].get<double>();
    const AcsModel j = parse_structure(cfg, n);
    const HypersurfaceModel s = parse_hypersurface(cfg, n);

    // J must square to -Id at sampled points of the chart
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    double sq = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cx> z(n);
        for (int k = 0; k < n; ++k) z[k] = cx(u(gen), u(gen));
        const RealLinearOp op = j.eval(z);
        const RealLinearOp id2 = op.compose(op);
        sq = std::max(sq, (id2.A + Mat::Identity(n, n)).cwiseAbs().maxCoeff());
        sq = std::max(sq, id2.B.cwiseAbs().maxCoeff());
    }
    sc.check("square_residual", sq, tol);

    const StandardFormReport rep = is_standard_form(j, s, tol);
    sc.extra["standard_form"] = rep.ok;
    if (!rep.ok)
        for (const std::string& v : rep.violations) sc.violations.push_back(v);
}

void run_levi(const json& cfg, Scenario& sc, std::mt19937_64& gen) {
    const int n = cfg.at("n").get<int>();
    const double tol = sc.config["tolerance"].get<double>();
    const int count = sc.config["vectors"].get<int>();
    const AcsModel j = parse_structure(cfg, n);
    const AcsModel jst = AcsModel::standard(n);
    const HypersurfaceModel s = parse_hypersurface(cfg, n);
    const std::vector<cx> origin(n, cx(0.0));

    double identity = 0.0, least = std::numeric_limits<double>::infinity(),
           most = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < count; ++trial) {
        const std::vector<cx> v = random_tangent(gen, n);
        Vec ve(n), vt(n - 1);
        for (int k = 0; k < n; ++k) ve(k) = v[k];
        for (int k = 0; k + 1 < n; ++k) vt(k) = v[k];
        const double lj = levi_numeric(j, s, origin, ve);
        const double lst = levi_numeric(jst, s, origin, ve);
        const double corr = levi_correction(j, vt);
        identity = std::max(identity, std::abs(lj - lst - corr));
        least = std::min(least, lj);
        most = std::max(most, lj);
    }
    sc.check("levi_identity_residual", identity, tol);
    sc.extra["levi_range"] = json::array({least, most});
    // strong pseudoconvexity: the form keeps a strict sign on tangent vectors
    if (!(most < 0.0 || least > 0.0))
        sc.violations.push_back("Levi form not sign-definite on sampled vectors");
}

void run_normalize(const json& cfg, Scenario& sc, std::mt19937_64& gen) {
    const int n = cfg.at("n").get<int>();
    const double tol = sc.config["tolerance"].get<double>();
    const AcsModel j = parse_structure(cfg, n);
    const HypersurfaceModel s = parse_hypersurface(cfg, n);
    const NormalizationResult res = normalize_to_standard_form(j, s);

    const StandardFormReport rep = is_standard_form(res.structure, res.surface, 1e-9);
    sc.extra["standard_form"] = rep.ok;
    if (!rep.ok)
        for (const std::string& v : rep.violations) sc.violations.push_back(v);

    // after normalization the Levi form at 0 coincides with the flat one
    const AcsModel jst = AcsModel::standard(n);
    const std::vector<cx> origin(n, cx(0.0));
    double coincide = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<cx> v = random_tangent(gen, n);
        Vec ve(n);
        for (int k = 0; k < n; ++k) ve(k) = v[k];
        coincide = std::max(coincide, std::abs(levi_numeric(res.structure, res.surface, origin, ve) -
                                               levi_numeric(jst, res.surface, origin, ve)));
    }
    sc.check("levi_coincidence_at_origin", coincide, tol);
    sc.extra["chart_degree"] = [&] {
        int d = 0;
        for (const PolyMap& c : res.chart) d = std::max(d, c.max_total_degree());
        return d;
    }();
}

void run_model(const json& cfg, Scenario& sc, const std::string& out_dir,
               const std::string& format) {
    const int n = cfg.at("n").get<int>();
    const int cap = sc.config["N"].get<int>();
    const double tol = sc.config["tolerance"].get<double>();
    Mat a = Mat::Zero(n - 1, n - 1);
    if (cfg.contains("A")) a = parse_cmatrix(cfg["A"], n - 1, n - 1, "A");
    if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
        throw ValidationError("A is not antisymmetric");
    const cx dir = cfg.contains("a") ? parse_complex(cfg["a"], "a") : cx(1.0, 0.0);
    const double lambda = sc.config["lambda"].get<double>();

    const ModelProblem p(n, a, cap);
    const LiftedDisc fd = explicit_disc(p, BasePoint(dir, lambda));
    const StationarityReport rep = verify_stationary(p.structure(), p.surface(), fd, tol);
    sc.check("projection_residual", rep.projection.residual, tol);
    sc.check("interior_residual", rep.interior.residual, tol);
    sc.check("boundary_residual", rep.boundary.residual, tol);

    const json grid = sc.config["samples"];
    const std::string spath =
        out_dir + "/model_samples." + (format == "json" ? "json" : "csv");
    std::filesystem::create_directories(out_dir);
    emit_samples(p.structure(), p.surface(), fd, grid["boundary"].get<int>(),
                 grid["rays"].get<int>(), grid["per_ray"].get<int>(), spath, format);
    sc.extra["samples"] = spath;
}

void run_kernel(const json& cfg, Scenario& sc) {
    const int n = cfg.at("n").get<int>();
    const int cap = sc.config["N"].get<int>();
    Mat a = Mat::Zero(n - 1, n - 1);
    if (cfg.contains("A")) a = parse_cmatrix(cfg["A"], n - 1, n - 1, "A");
    const cx dir = cfg.contains("a") ? parse_complex(cfg["a"], "a") : cx(1.0, 0.0);
    const double lambda = sc.config["lambda"].get<double>();

    const ModelProblem p(n, a, cap);
    const std::vector<LiftedDisc> basis = kernel_basis(p, BasePoint(dir, lambda), cap);
    const detail::CoeffLayout layout{n, cap};
    RMat m(layout.real_count(), static_cast<int>(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c) m.col(static_cast<int>(c)) = layout.pack(basis[c]);
    Eigen::BDCSVD<RMat> svd(m);
    const RVec sv = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-8 * sv(0)) ++rank;
    sc.extra["rank"] = rank;
    sc.extra["basis_size"] = basis.size();
    sc.extra["expected_rank"] = 4 * n;
    sc.extra["sigma_min_over_max"] = sv(sv.size() - 1) / sv(0);
    if (rank < sv.size()) sc.extra["rank_gap"] = sv(rank - 1) / sv(rank);
    std::printf("[kernel] rank %d (expected %d), sigma_min/sigma_max = %.3e\n", rank, 4 * n,
                sv(sv.size() - 1) / sv(0));
    if (rank != 4 * n)
        sc.violations.push_back("kernel rank " + std::to_string(rank) + ", expected " +
                                std::to_string(4 * n));
}

void run_continue(const json& cfg, Scenario& sc, const std::string& out_dir,
                  const std::string& format) {
    const int n = cfg.at("n").get<int>();
    AcsModel j = parse_structure(cfg, n);
    HypersurfaceModel s = parse_hypersurface(cfg, n);
    ContinuationProblem prob(std::move(j), std::move(s),
                             parse_cvector(cfg.at("centre"), n, "centre"),
                             parse_cvector(cfg.at("direction"), n, "direction"));
    prob.N = sc.config["N"].get<int>();
    prob.lambda_target = sc.config["lambda"].get<double>();
    prob.newton_tol = sc.config["newton_tol"].get<double>();
    prob.residual_tol = sc.config["residual_tol"].get<double>();
    prob.max_newton = sc.config["max_newton"].get<int>();
    prob.min_step = sc.config["min_step"].get<double>();
    prob.schedule = sc.config["schedule"].get<std::vector<double>>();
    try {
        prob.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }

    const auto [disc, trace] = continue_disc(prob);
    json steps = json::array();
    for (const ContinuationStep& st : trace.steps)
        steps.push_back(json{{"t", st.t},
                             {"iterations", st.iterations},
                             {"residual", st.residual},
                             {"accepted", st.accepted},
                             {"note", st.note}});
    sc.extra["trace"] = steps;
    sc.extra["converged"] = trace.converged;
    sc.extra["message"] = trace.message;
    if (!trace.converged) sc.violations.push_back(trace.message);

    const StationarityReport rep =
        verify_stationary(prob.structure, prob.surface, disc, prob.residual_tol);
    sc.check("projection_residual", rep.projection.residual, prob.residual_tol);
    sc.check("interior_residual", rep.interior.residual, prob.residual_tol);
    sc.check("boundary_residual", rep.boundary.residual, prob.residual_tol);

    const std::vector<cx> f0 = disc.f.eval(cx(0.0));
    double centre = 0.0;
    for (int k = 0; k < n; ++k) centre = std::max(centre, std::abs(f0[k] - prob.target_point[k]));
    sc.check("centre_error", centre, 1e-8);

    const cx ar(std::sqrt(2.0 * prob.target_point[n - 1].real()), 0.0);
    const std::vector<cx> dm = disc.f.wirtinger(false).eval(cx(0.0));
    const std::vector<cx> dp = disc.f.wirtinger(true).eval(cx(0.0));
    Vec dx(n), v(n);
    for (int k = 0; k < n; ++k) {
        dx(k) = dm[k] + dp[k];
        v(k) = prob.target_direction[k];
    }
    const Vec w = complex_action(cx(1.0) / ar, dx, prob.structure, f0);
    const Vec u = complex_action(cx(1.0) / ar, v, prob.structure, prob.target_point);
    RVec wr(2 * n), ur(2 * n);
    for (int k = 0; k < n; ++k) {
        wr(k) = w(k).real();
        wr(n + k) = w(k).imag();
        ur(k) = u(k).real();
        ur(n + k) = u(k).imag();
    }
    ur /= ur.norm();
    sc.check("tangency_defect", (wr - ur.dot(wr) * ur).norm() / wr.norm(), 1e-6);

    const json grid = sc.config["samples"];
    const std::string spath =
        out_dir + "/continue_samples." + (format == "json" ? "json" : "csv");
    std::filesystem::create_directories(out_dir);
    emit_samples(prob.structure, prob.surface, disc, grid["boundary"].get<int>(),
                 grid["rays"].get<int>(), grid["per_ray"].get<int>(), spath, format);
    sc.extra["samples"] = spath;
}

// fill defaults so the echoed config is complete and re-runnable
json resolve_config(const json& cfg, const std::string& command, long seed_flag) {
    json r = cfg;
    if (!r.contains("n")) throw ConfigError("config: missing n");
    r["command"] = command;
    if (seed_flag >= 0) r["seed"] = seed_flag;
    if (!r.contains("seed")) r["seed"] = 0;
    if (!r.contains("N")) r["N"] = 8;
    if (!r.contains("lambda")) r["lambda"] = 1.0;
    if (!r.contains("tolerance")) r["tolerance"] = command == "model" ? 1e-12 : 1e-10;
    if (!r.contains("vectors")) r["vectors"] = 50;
    if (!r.contains("newton_tol")) r["newton_tol"] = 1e-10;
    if (!r.contains("residual_tol")) r["residual_tol"] = 1e-8;
    if (!r.contains("max_newton")) r["max_newton"] = 25;
    if (!r.contains("min_step")) r["min_step"] = 1e-3;
    if (!r.contains("schedule")) r["schedule"] = std::vector<double>{0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
    if (!r.contains("samples")) r["samples"] = json::object();
    if (!r["samples"].contains("boundary")) r["samples"]["boundary"] = 64;
    if (!r["samples"].contains("rays")) r["samples"]["rays"] = 8;
    if (!r["samples"].contains("per_ray")) r["samples"]["per_ray"] = 8;
    return r;
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, long seed_flag, const std::string& format) {
    json cfg;
    {
        std::ifstream is(config_path);
        if (!is) {
            std::fprintf(stderr, "error: cannot read config %s\n", config_path.c_str());
            return 2;
        }
        try {
            is >> cfg;
        } catch (const json::exception& e) {
            std::fprintf(stderr, "error: config parse failure: %s\n", e.what());
            return 2;
        }
    }

    Scenario sc;
    try {
        sc.config = resolve_config(cfg, command, seed_flag);
        std::mt19937_64 gen(sc.config["seed"].get<uint64_t>());
        if (command == "validate")
            run_validate(cfg, sc, gen);
        else if (command == "levi")
            run_levi(cfg, sc, gen);
        else if (command == "normalize")
            run_normalize(cfg, sc, gen);
        else if (command == "model")
            run_model(cfg, sc, out_dir, format);
        else if (command == "kernel")
            run_kernel(cfg, sc);
        else
            run_continue(cfg, sc, out_dir, format);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: config parse failure: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        sc.violations.push_back(e.what());
        write_report(command, sc, out_dir);
        return 1;
    } catch (const std::invalid_argument& e) {
        sc.violations.push_back(e.what());
        write_report(command, sc, out_dir);
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: runtime failure: %s\n", e.what());
        return 3;
    }
    return write_report(command, sc, out_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stationary-disc laboratory batch front-end"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "csv";
    long seed = -1;
    app.add_option("--config", config_path, "path to the JSON scenario config")->required();
    app.add_option("--out", out_dir, "output directory for reports and samples");
    app.add_option("--seed", seed, "seed for randomized subcommands (overrides config)");
    app.add_option("--format", format, "sample file format")
        ->check(CLI::IsMember({"csv", "json"}));

    const std::vector<std::string> commands{"validate", "levi",   "normalize",
                                            "model",    "kernel", "continue"};
    for (const std::string& c : commands) app.add_subcommand(c)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return run_command(app.get_subcommands().front()->get_name(), config_path, out_dir, seed,
                       format);
}
