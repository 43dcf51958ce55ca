// Command-line front end: wires configuration, experiment pipelines,
// persistence and reporting. Exit codes: 0 success, 1 numeric failure,
// 2 bad arguments, 3 budget exhaustion.
#include "rdlab/acceptance.hpp"
#include "rdlab/applications.hpp"
#include "rdlab/csvio.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/indicator.hpp"
#include "rdlab/pipelines.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

using namespace rdlab;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 1;
    std::vector<std::string> overrides; // key=value
};

Config resolve_config(const GlobalOpts& g) {
    Config cfg = Config::defaults();
    if (!g.config_path.empty()) cfg.load_file(g.config_path);
    for (const std::string& kv : g.overrides) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
    std::filesystem::create_directories(g.out_dir);
    return (std::filesystem::path(g.out_dir) / name).string();
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + s);
    return out;
}

Field datum_from_spec(const Lab& lab, const std::string& spec) {
    auto split_args = [](const std::string& s) { return parse_list(s); };
    if (spec == "zero") return Field::zeros(lab.grid);
    if (spec.rfind("const:", 0) == 0) {
        double v = std::stod(spec.substr(6));
        return Field::constant(lab.grid, v);
    }
    if (spec.rfind("block:", 0) == 0) {
        double L = std::stod(spec.substr(6));
        return Family::single_block().datum(lab.grid, L);
    }
    if (spec.rfind("two_bump:", 0) == 0) {
        auto args = split_args(spec.substr(9));
        if (args.size() != 2)
            throw std::invalid_argument("two_bump:<r>,<L> expects two numbers");
        return Family::two_bump(args[0]).datum(lab.grid, args[1]);
    }
    if (spec.rfind("box:", 0) == 0) {
        auto args = split_args(spec.substr(4));
        if (args.size() != 2) throw std::invalid_argument("box:<alpha>,<R> expects two numbers");
        return box_datum(lab.grid, args[0], args[1]);
    }
    if (spec.rfind("gauss:", 0) == 0) {
        auto args = split_args(spec.substr(6));
        if (args.size() != 2)
            throw std::invalid_argument("gauss:<amp>,<sigma> expects two numbers");
        Field f = Field::zeros(lab.grid);
        for (int i = 0; i < f.size(); ++i) {
            double z = lab.grid->node(i) / args[1];
            f[i] = args[0] * std::exp(-0.5 * z * z);
        }
        f[0] = 0.0;
        f[f.size() - 1] = 0.0;
        return f;
    }
    if (spec.rfind("file:", 0) == 0) return read_field_csv(spec.substr(5));
    throw std::invalid_argument("unknown datum spec: " + spec);
}

Family family_from_name(const std::string& name, double r) {
    if (name == "single_block") return Family::single_block();
    if (name == "two_bump") return Family::two_bump(r);
    throw std::invalid_argument("unknown family: " + name);
}

// Context rebuilt around a trajectory file (its own grid and steady state).
struct TrajContext {
    Lab lab;
    Trajectory traj;
    FloquetBundle bundle;
};

TrajContext context_from_trajectory(const Config& cfg, const std::string& path) {
    TrajContext out;
    out.traj = read_trajectory_csv(path);
    if (!out.traj.spliced())
        throw std::invalid_argument(
            "trajectory file lacks splice metadata; produce it with `threshold --emit-traj`");
    Config adjusted = cfg;
    const Grid& g = *out.traj.grid;
    adjusted.set("grid.x_max", fmt_double(g.x_max()));
    adjusted.set("grid.n", std::to_string(g.n()));
    adjusted.set("grid.bc", to_string(g.bc()));
    out.lab = Lab::make(adjusted);
    out.bundle = compute_bundle(out.traj, out.lab.nl, out.lab.eig, out.lab.lin);
    return out;
}

int cmd_steady(const GlobalOpts& g) {
    Config cfg = resolve_config(g);
    Lab lab = Lab::make(cfg);
    Manifest m = lab.manifest();
    write_field_csv(out_path(g, "W.csv"), lab.gs.W, m);
    write_field_csv(out_path(g, "phi.csv"), lab.eig.phi, m);
    double resid = pde_residual_sup(lab.nl, lab.gs.W);
    std::FILE* rep = std::fopen(out_path(g, "steady_report.txt").c_str(), "w");
    if (rep) {
        std::fprintf(rep, "{\"beta_star\": %s, \"lambda\": %s, \"residual\": %s}\n",
                     fmt_double(lab.gs.beta_star).c_str(), fmt_double(lab.eig.lambda).c_str(),
                     fmt_double(resid).c_str());
        std::fclose(rep);
    }
    std::printf("steady: beta*=%.8f lambda=%.8f residual=%.3e -> W.csv phi.csv\n",
                lab.gs.beta_star, lab.eig.lambda, resid);
    return 0;
}

int cmd_eigen(const GlobalOpts& g) {
    Config cfg = resolve_config(g);
    Lab lab = Lab::make(cfg);
    double rq = rayleigh_quotient(lab.nl, lab.gs.W, lab.eig.phi);
    auto [lam2, psi2] = second_eigenpair(lab.nl, lab.gs.W, lab.eig);
    write_field_csv(out_path(g, "phi.csv"), lab.eig.phi, lab.manifest());
    std::printf("eigen: lambda=%.12f rayleigh=%.12f lambda2=%.12f gap=%.6f\n",
                lab.eig.lambda, rq, lam2, lam2 - lab.eig.lambda);
    return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& u0spec, bool no_traj) {
    Config cfg = resolve_config(g);
    Lab lab = Lab::make(cfg);
    Field u0 = datum_from_spec(lab, u0spec);

    Fate observed = Undecided{0.0, 0.0};
    auto certificate = [&](double t, const Field& u) {
        Fate f = classify_sample(t, u, lab.nl, lab.fate);
        if (!is_undecided(f)) {
            observed = f;
            return true;
        }
        return false;
    };
    Trajectory traj = evolve(lab.nl, u0, lab.solver, certificate);
    Fate fate = is_undecided(observed)
                    ? classify_fate(traj, lab.nl, lab.fate)
                    : observed;
    if (!no_traj) {
        Manifest m = lab.manifest();
        m.add("simulate.u0", u0spec);
        write_trajectory_csv(out_path(g, "trajectory.csv"), traj, m);
    }
    std::printf("simulate: u0=%s fate=%s stored=%d t_end=%s\n", u0spec.c_str(),
                to_string(fate).c_str(), traj.size(), fmt_double(traj.t_last()).c_str());
    return 0;
}

int cmd_threshold(const GlobalOpts& g, const std::string& family, double r, double tol,
                  bool emit_traj) {
    Config cfg = resolve_config(g);
    if (tol > 0.0) cfg.set("threshold.tol_L", fmt_double(tol));
    Lab lab = Lab::make(cfg);
    Family fam = family_from_name(family, r);
    ThresholdResult res = find_critical_length(fam, lab.nl, lab.grid, lab.thr, lab.gs);

    Manifest m = lab.manifest();
    m.add("threshold.family", fam.name());
    std::FILE* f = std::fopen(out_path(g, "threshold.csv").c_str(), "w");
    if (f) {
        m.write_header(f);
        std::fprintf(f, "# columns: r,L_lo,L_hi,L_star,dist_to_W,T_c\n");
        std::fprintf(f, "%s,%s,%s,%s,%s,%s\n", fmt_double(r).c_str(),
                     fmt_double(res.L_lo).c_str(), fmt_double(res.L_hi).c_str(),
                     fmt_double(res.L_star).c_str(), fmt_double(res.dist_to_W).c_str(),
                     fmt_double(res.T_c).c_str());
        std::fclose(f);
    }
    if (emit_traj) {
        Trajectory spliced = threshold_trajectory(res, lab.gs, lab.thr.tol_W);
        write_trajectory_csv(out_path(g, "threshold_trajectory.csv"), spliced, m);
    }
    std::printf("threshold %s: L*=%.8f bracket=[%.8f, %.8f] dist_W=%.3e T_c=%.2f probes=%d%s\n",
                fam.name().c_str(), res.L_star, res.L_lo, res.L_hi, res.dist_to_W, res.T_c,
                res.probes, res.bracket_converged ? "" : " (bracket NOT at tolerance)");
    return res.bracket_converged ? 0 : 3;
}

int cmd_adjoint(const GlobalOpts& g, const std::string& traj_path) {
    Config cfg = resolve_config(g);
    TrajContext ctx = context_from_trajectory(cfg, traj_path);
    const Lab& lab = ctx.lab;

    // uniqueness probe: interior-ones terminal condition
    Field ones = Field::zeros(lab.grid);
    for (int i = 1; i + 1 < lab.grid->n(); ++i) ones[i] = 1.0;
    BundleLeg p_ones =
        solve_adjoint(ctx.traj, lab.nl, lab.eig, lab.lin, ctx.bundle.T_end, &ones);
    const Field& a = ctx.bundle.p.fields.front();
    const Field& b = p_ones.fields.front();
    double sa = sup_norm(a), sb = sup_norm(b), gap = 0.0;
    for (int i = 0; i < a.size(); ++i)
        gap = std::max(gap, std::abs(a[i] / sa - b[i] / sb));

    Field h = Field::zeros(lab.grid);
    for (int i = 0; i < h.size(); ++i) {
        double x = lab.grid->node(i);
        h[i] = std::exp(-0.5 * (x - 1.0) * (x - 1.0)) - 0.5 * std::exp(-0.25 * x * x);
    }
    SeparationResult sep = separation_rate(ctx.traj, lab.nl, ctx.bundle, h, lab.lin);

    Manifest m = lab.manifest();
    m.add("adjoint.input", traj_path);
    m.add("adjoint.input_digest", file_digest(traj_path));
    write_field_csv(out_path(g, "p0.csv"), ctx.bundle.p.field_at(0), m);
    write_field_csv(out_path(g, "v0.csv"), ctx.bundle.v.field_at(0), m);
    std::FILE* f = std::fopen(out_path(g, "adjoint_report.csv").c_str(), "w");
    if (f) {
        m.write_header(f);
        std::fprintf(f, "# columns: lambda,T_splice,T_end,pairing_drift,uniqueness_gap,gamma_fit\n");
        std::fprintf(f, "%s,%s,%s,%s,%s,%s\n", fmt_double(lab.eig.lambda).c_str(),
                     fmt_double(ctx.bundle.T_splice).c_str(),
                     fmt_double(ctx.bundle.T_end).c_str(),
                     fmt_double(ctx.bundle.pairing_drift).c_str(), fmt_double(gap).c_str(),
                     fmt_double(sep.gamma_fit).c_str());
        std::fclose(f);
    }
    std::printf("adjoint: lambda=%.6f T_splice=%.2f T_end=%.2f pairing_drift=%.2e "
                "uniqueness_gap=%.2e gamma_fit=%.4f -> p0.csv v0.csv\n",
                lab.eig.lambda, ctx.bundle.T_splice, ctx.bundle.T_end,
                ctx.bundle.pairing_drift, gap, sep.gamma_fit);
    return 0;
}

int cmd_perturb(const GlobalOpts& g, const std::string& traj_path, const std::string& h_path,
                const std::string& eps_csv) {
    Config cfg = resolve_config(g);
    TrajContext ctx = context_from_trajectory(cfg, traj_path);
    Field h = read_field_csv(h_path);
    if (!h.grid()->same_mesh(*ctx.traj.grid))
        throw std::invalid_argument("perturbation grid does not match the trajectory grid");
    std::vector<double> eps_list = parse_list(eps_csv);

    AppContext app = ctx.lab.app();
    PerturbationReport rep = perturbation_fate(app, ctx.traj, ctx.bundle, h, eps_list);

    Manifest m = ctx.lab.manifest();
    m.add("perturb.traj", traj_path);
    m.add("perturb.traj_digest", file_digest(traj_path));
    m.add("perturb.h", h_path);
    m.add("perturb.h_digest", file_digest(h_path));
    std::FILE* f = std::fopen(out_path(g, "perturb.csv").c_str(), "w");
    if (f) {
        m.write_header(f);
        std::fprintf(f, "# S=%s predicted=%d observed=%d eps_stabilized=%s agree=%d\n",
                     fmt_double(rep.S).c_str(), rep.predicted, rep.observed,
                     fmt_double(rep.eps_stabilized).c_str(), rep.agree ? 1 : 0);
        std::fprintf(f, "# columns: eps,fate\n");
        for (const auto& row : rep.rows)
            std::fprintf(f, "%s,%s\n", fmt_double(row.eps).c_str(),
                         to_string(row.fate).c_str());
        std::fclose(f);
    }
    std::printf("perturb: S=%.6e predicted=%+d observed=%+d agree=%s eps*=%g\n", rep.S,
                rep.predicted, rep.observed, rep.agree ? "yes" : "no", rep.eps_stabilized);
    return 0;
}

int cmd_orthogonality(const GlobalOpts& g, double tol) {
    Config cfg = resolve_config(g);
    if (tol > 0.0) cfg.set("threshold.tol_L", fmt_double(tol));
    Lab lab = Lab::make(cfg);
    ThresholdResult res =
        find_critical_length(Family::single_block(), lab.nl, lab.grid, lab.thr, lab.gs);
    Trajectory spliced = threshold_trajectory(res, lab.gs, lab.thr.tol_W);
    FloquetBundle bundle = compute_bundle(spliced, lab.nl, lab.eig, lab.lin);
    OrthogonalityReport rep = orthogonality_residual(spliced, bundle);

    Manifest m = lab.manifest();
    std::FILE* f = std::fopen(out_path(g, "orthogonality.csv").c_str(), "w");
    if (f) {
        m.write_header(f);
        std::fprintf(f, "# median_rho=%s max_rho=%s degenerate=%d\n",
                     fmt_double(rep.median_rho).c_str(), fmt_double(rep.max_rho).c_str(),
                     rep.degenerate ? 1 : 0);
        std::fprintf(f, "# columns: t,rho\n");
        for (size_t i = 0; i < rep.t.size(); ++i)
            std::fprintf(f, "%s,%s\n", fmt_double(rep.t[i]).c_str(),
                         fmt_double(rep.rho[i]).c_str());
        std::fclose(f);
    }
    std::printf("orthogonality: median=%.4f max=%.4f samples=%zu\n", rep.median_rho,
                rep.max_rho, rep.rho.size());
    return 0;
}

int cmd_dldr(const GlobalOpts& g, const std::string& r_grid_csv, double fd_step) {
    Config cfg = resolve_config(g);
    Lab lab = Lab::make(cfg);
    AppContext ctx = lab.app();
    std::vector<double> r_grid = parse_list(r_grid_csv);

    std::vector<DerivativeReport> reports(r_grid.size());
    std::vector<std::string> errors(r_grid.size());
    int workers = std::max(1, g.workers);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < r_grid.size(); i = next.fetch_add(1)) {
            try {
                reports[i] = lstar_derivative(ctx, r_grid[i], fd_step);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min<int>(workers, static_cast<int>(r_grid.size())); ++w)
        pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (const std::string& e : errors)
        if (!e.empty()) throw NumericError("dldr worker failed: " + e);

    Manifest m = lab.manifest();
    m.add_double("dldr.fd_step", fd_step);
    std::FILE* f = std::fopen(out_path(g, "dldr.csv").c_str(), "w");
    if (f) {
        m.write_header(f);
        std::fprintf(f, "# columns: r,L_star,p_at_r,p_at_Lr,formula_value,fd_value,rel_gap\n");
        for (const auto& rep : reports)
            std::fprintf(f, "%s,%s,%s,%s,%s,%s,%s\n", fmt_double(rep.r).c_str(),
                         fmt_double(rep.L_star).c_str(), fmt_double(rep.p_at_r).c_str(),
                         fmt_double(rep.p_at_Lr).c_str(),
                         fmt_double(rep.formula_value).c_str(),
                         fmt_double(rep.fd_value).c_str(), fmt_double(rep.rel_gap).c_str());
        std::fclose(f);
    }
    for (const auto& rep : reports)
        std::printf("dldr r=%.3f: L*=%.6f formula=%.6f fd=%.6f rel_gap=%.4f\n", rep.r,
                    rep.L_star, rep.formula_value, rep.fd_value, rep.rel_gap);
    return 0;
}

int cmd_optimize(const GlobalOpts& g, const std::string& j_name, const std::string& seed) {
    if (j_name != "linear")
        throw std::invalid_argument("optimize: only --j linear is wired in this build");
    Config cfg = resolve_config(g);
    Lab lab = Lab::make(cfg);
    AppContext ctx = lab.app();

    Family init = Family::single_block();
    if (seed == "block" || seed.empty()) {
        init = Family::single_block();
    } else if (seed.rfind("two_bump:", 0) == 0) {
        init = Family::two_bump(std::stod(seed.substr(9)));
    } else if (seed.rfind("file:", 0) == 0) {
        Field shape = read_field_csv(seed.substr(5));
        init = Family::scaled_profile(shape);
    } else {
        throw std::invalid_argument("optimize: seed must be block, two_bump:<r> or file:<csv>");
    }

    BathtubParams bp;
    bp.fp_tol = cfg.get_double("bathtub.fp_tol");
    bp.kkt_tol = cfg.get_double("bathtub.kkt_tol");
    bp.max_outer = cfg.get_int("bathtub.max_outer");
    BathtubResult res = bathtub_optimize(ctx, init, bp);

    Manifest m = lab.manifest();
    m.add("optimize.seed", seed.empty() ? "block" : seed);
    m.add_double("optimize.c", res.c);
    m.add_double("optimize.mass", res.mass);
    m.add("optimize.converged", res.converged ? "1" : "0");
    write_field_csv(out_path(g, "optimize_u0.csv"), res.u0_opt, m);
    std::printf("optimize: converged=%d iters=%d mass=%.6f c=%.6f kkt_violation=%.2e "
                "mass(W)=%.6f%s%s\n",
                res.converged ? 1 : 0, res.iterations, res.mass, res.c, res.kkt_violation,
                mass_of_ground_state(lab.gs), res.diagnostics.empty() ? "" : " note: ",
                res.diagnostics.c_str());
    return res.converged ? 0 : 1;
}

int cmd_verify(const GlobalOpts& g, const std::string& criteria_csv) {
    Config cfg = resolve_config(g);
    std::vector<int> ids;
    if (criteria_csv.empty()) {
        ids = acceptance::all_ids();
    } else {
        for (double v : parse_list(criteria_csv)) ids.push_back(static_cast<int>(v));
    }
    int failures = acceptance::run(ids, cfg, stdout);
    std::printf("verify: %zu criteria, %d failure(s)\n", ids.size(), failures);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rdlab: threshold phenomena laboratory for 1D bistable reaction-diffusion"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key=value configuration file");
    app.add_option("--out", g.out_dir, "output directory (default .)");
    app.add_option("--workers", g.workers, "worker threads for sweep subcommands");
    app.add_option("--set", g.overrides, "override config entries (key=value, repeatable)");

    auto* steady = app.add_subcommand("steady", "ground state W and principal eigenpair");
    double a_flag = 0.0;
    steady->add_option("--a", a_flag, "cubic parameter a in (0, 1/2)");

    auto* eigen = app.add_subcommand("eigen", "eigenpair report (lambda, lambda2)");
    eigen->add_option("--a", a_flag, "cubic parameter a in (0, 1/2)");

    auto* simulate = app.add_subcommand("simulate", "evolve a datum and certify its fate");
    std::string u0spec = "zero";
    bool no_traj = false;
    simulate->add_option("--u0", u0spec,
                         "datum: zero|const:v|block:L|two_bump:r,L|box:a,R|gauss:A,s|file:p");
    simulate->add_flag("--no-traj", no_traj, "skip writing trajectory.csv");

    auto* threshold = app.add_subcommand("threshold", "sharp-threshold bisection");
    std::string family = "two_bump";
    double r_flag = 0.5, tol_flag = 0.0;
    bool emit_traj = false;
    threshold->add_option("--family", family, "single_block or two_bump");
    threshold->add_option("--r", r_flag, "two-bump half-gap r >= 0");
    threshold->add_option("--tol", tol_flag, "bracket tolerance on L");
    threshold->add_flag("--emit-traj", emit_traj, "write the spliced threshold trajectory");

    auto* adjoint = app.add_subcommand("adjoint", "Floquet bundle along a trajectory file");
    std::string traj_path;
    adjoint->add_option("--traj", traj_path, "spliced trajectory CSV")->required();

    auto* perturb = app.add_subcommand("perturb", "fate prediction vs observation for a direction");
    std::string h_path, eps_csv = "0.1,0.05,0.02,0.01,0.005,0.002";
    perturb->add_option("--traj", traj_path, "spliced trajectory CSV")->required();
    perturb->add_option("--h-file", h_path, "perturbation direction CSV")->required();
    perturb->add_option("--eps", eps_csv, "comma-separated eps ladder");

    auto* orth = app.add_subcommand("orthogonality", "adjoint/time-derivative residual series");
    double orth_tol = 0.0;
    orth->add_option("--tol", orth_tol, "threshold bracket tolerance");

    auto* dldr = app.add_subcommand("dldr", "derivative of the critical length vs r");
    std::string r_grid = "0.25,0.5,1.0";
    double fd_step = 0.05;
    dldr->add_option("--r-grid", r_grid, "comma-separated r values");
    dldr->add_option("--fd-step", fd_step, "finite-difference step");

    auto* optimize = app.add_subcommand("optimize", "minimal-mass bathtub optimizer");
    std::string j_name = "linear", seed = "block";
    optimize->add_option("--j", j_name, "cost (linear)");
    optimize->add_option("--seed", seed, "block | two_bump:<r> | file:<csv>");

    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    std::string criteria;
    verify->add_option("--criteria", criteria, "comma-separated ids (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (a_flag > 0.0) g.overrides.push_back("nonlinearity.a=" + fmt_double(a_flag));
        if (steady->parsed()) return cmd_steady(g);
        if (eigen->parsed()) return cmd_eigen(g);
        if (simulate->parsed()) return cmd_simulate(g, u0spec, no_traj);
        if (threshold->parsed()) return cmd_threshold(g, family, r_flag, tol_flag, emit_traj);
        if (adjoint->parsed()) return cmd_adjoint(g, traj_path);
        if (perturb->parsed()) return cmd_perturb(g, traj_path, h_path, eps_csv);
        if (orth->parsed()) return cmd_orthogonality(g, orth_tol);
        if (dldr->parsed()) return cmd_dldr(g, r_grid, fd_step);
        if (optimize->parsed()) return cmd_optimize(g, j_name, seed);
        if (verify->parsed()) return cmd_verify(g, criteria);
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "budget exhausted: %s\n", e.what());
        return 3;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "bad arguments: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
