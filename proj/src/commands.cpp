#include "pensiondc/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "pensiondc/numerics.hpp"

namespace pensiondc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string alpha_tag(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", alpha);
    std::string s(buf);
    for (auto& c : s) {
        if (c == '-') c = 'm';
        if (c == '.') c = 'p';
    }
    return s;
}

std::string variant_name(StrategyVariant v) {
    return v == StrategyVariant::FocOracle ? "foc" : "paper";
}

// Everything a strategy evaluation needs, with stable addresses for the
// policies that point into it.
struct ModelBundle {
    MarketParams market;
    PlanConfig plan;
    MortalityLaw law;
    SimulationGrid grid;
    StrategyVariant variant = StrategyVariant::FocOracle;
    SimOptions sim;
    AuxTables aux;
};

ModelBundle make_bundle(const Config& cfg, std::optional<double> alpha_override = {},
                        std::optional<StrategyVariant> variant_override = {}) {
    ModelBundle b;
    b.market = cfg.market();
    b.plan = cfg.plan();
    if (alpha_override) b.plan.alpha = *alpha_override;
    b.plan.validate();
    b.law = cfg.mortality();
    b.grid = cfg.grid();
    b.variant = variant_override ? *variant_override : cfg.variant();
    b.sim = cfg.sim_options();

    b.aux.grid = b.grid;
    b.aux.phi = build_phi_table(b.market, b.plan, b.grid, b.variant);
    b.aux.varphi.assign(b.aux.phi.size(), 0.0);

    // varphi needs the relative-wealth proxy, which needs the strategy; the
    // strategy itself only reads phi, so a pilot with zero varphi is exact.
    StrategyPolicy pilot(b.market, b.plan, b.variant, b.aux);
    StrategyFn pilot_fn = [&pilot](double t, const PathState& obs) { return pilot.at(t, obs); };
    const auto y_proxy =
        build_y_proxy(b.market, b.plan, b.law, pilot_fn, b.grid, 1000, b.sim.seed);
    b.aux.varphi =
        build_varphi_table(b.market, b.plan, b.law, b.grid, b.variant, b.aux.phi, y_proxy);
    return b;
}

StrategyFn policy_fn(const StrategyPolicy& policy) {
    return [&policy](double t, const PathState& obs) { return policy.at(t, obs); };
}

}  // namespace

std::string run_strategies(const Config& cfg, const std::string& out_dir,
                           const std::vector<double>& alphas) {
    const auto t0 = Clock::now();
    ensure_directory(out_dir);
    RunManifest manifest;
    manifest.config_hash = cfg.hash();
    manifest.seed = cfg.get_u64("sim.seed");
    const SimulationGrid grid = cfg.grid();
    manifest.T = grid.T;
    manifest.n_steps = grid.n_steps;
    manifest.n_paths = cfg.get_int("sim.n_paths");
    manifest.variant = cfg.get_string("strategy.variant");

    const std::vector<double> alpha_list = alphas.empty() ? cfg.get_double_list("strategies.alphas")
                                                          : alphas;
    for (double alpha : alpha_list) {
        for (StrategyVariant variant : {StrategyVariant::FocOracle, StrategyVariant::PaperVerbatim}) {
            ModelBundle b = make_bundle(cfg, alpha, variant);
            StrategyPolicy policy(b.market, b.plan, b.variant, b.aux);
            const std::string name = "strategies_" + variant_name(variant) + "_alpha_" +
                                     alpha_tag(alpha) + ".csv";
            CsvWriter csv(out_dir + "/" + name);
            const std::string cols[] = {"t", "pi1", "pi2", "pi3", "safe_weight", "phi", "varphi"};
            csv.header(cols);
            // Profiles are evaluated along the deterministic mean-rate path;
            // the last grid node is excluded (pi2 is singular at maturity).
            for (int k = 0; k < b.grid.n_steps; ++k) {
                const double t = b.grid.time(k);
                const StrategyVector sv = policy.at(t, vasicek_mean(b.market, t));
                const double row[] = {t,
                                      sv.pi1,
                                      sv.pi2,
                                      sv.pi3,
                                      safe_weight(sv, b.plan.kappa),
                                      b.aux.phi[static_cast<std::size_t>(k)],
                                      b.aux.varphi[static_cast<std::size_t>(k)]};
                csv.row(row);
            }
            manifest.outputs.push_back(name);
        }
    }
    manifest.duration_ms = ms_since(t0);
    const std::string mpath = out_dir + "/manifest_strategies.json";
    write_manifest(manifest, mpath);
    return mpath;
}

std::string run_simulate(const Config& cfg, const std::string& out_dir) {
    const auto t0 = Clock::now();
    ensure_directory(out_dir);
    ModelBundle b = make_bundle(cfg);
    StrategyPolicy policy(b.market, b.plan, b.variant, b.aux);

    FanChart fan;
    const UtilityEstimate est = simulate_fan(b.market, b.plan, b.law, policy_fn(policy), b.sim, fan);

    RunManifest manifest;
    manifest.config_hash = cfg.hash();
    manifest.seed = b.sim.seed;
    manifest.T = b.grid.T;
    manifest.n_steps = b.grid.n_steps;
    manifest.n_paths = b.sim.n_paths;
    manifest.variant = variant_name(b.variant);

    const std::string name = "fan_" + variant_name(b.variant) + "_alpha_" +
                             alpha_tag(b.plan.alpha) + ".csv";
    {
        CsvWriter csv(out_dir + "/" + name);
        const std::string cols[] = {"t", "mean", "q05", "q95"};
        csv.header(cols);
        for (std::size_t i = 0; i < fan.t.size(); ++i) {
            const double row[] = {fan.t[i], fan.mean[i], fan.q05[i], fan.q95[i]};
            csv.row(row);
        }
    }
    manifest.outputs.push_back(name);
    manifest.checks.push_back({"utility.mean", est.mean, 0.0, true, true});
    manifest.checks.push_back({"utility.std_error", est.std_error, 0.0, true, true});
    manifest.checks.push_back({"utility.n_failed", static_cast<double>(est.n_failed), 0.0, true, true});
    manifest.duration_ms = ms_since(t0);
    const std::string mpath = out_dir + "/manifest_simulate.json";
    write_manifest(manifest, mpath);
    return mpath;
}

std::string run_compare(const Config& cfg, const std::string& out_dir) {
    const auto t0 = Clock::now();
    ensure_directory(out_dir);
    ModelBundle b = make_bundle(cfg);
    StrategyPolicy candidate(b.market, b.plan, b.variant, b.aux);
    const StrategyFn cand_fn = policy_fn(candidate);

    // The paper-variant rival needs its own tables; keep the bundle alive.
    std::optional<ModelBundle> paper_bundle;
    std::optional<StrategyPolicy> paper_policy;

    std::vector<std::pair<std::string, StrategyFn>> rivals;
    std::istringstream spec(cfg.get_string("compare.rivals"));
    std::string token;
    while (std::getline(spec, token, ',')) {
        if (token.empty()) continue;
        if (token.rfind("scale:", 0) == 0) {
            const double s = std::stod(token.substr(6));
            rivals.emplace_back(token, [cand_fn, s](double t, const PathState& obs) {
                StrategyVector v = cand_fn(t, obs);
                return StrategyVector{s * v.pi1, s * v.pi2, s * v.pi3};
            });
        } else if (token == "all_safe") {
            rivals.emplace_back(token, [](double, const PathState&) { return StrategyVector{}; });
        } else if (token.rfind("mix:", 0) == 0) {
            double p1 = 0, p2 = 0, p3 = 0;
            if (std::sscanf(token.c_str(), "mix:%lf:%lf:%lf", &p1, &p2, &p3) != 3) {
                throw ConfigError("config: compare.rivals mix entry must be mix:p1:p2:p3");
            }
            rivals.emplace_back(token, [p1, p2, p3](double, const PathState&) {
                return StrategyVector{p1, p2, p3};
            });
        } else if (token == "paper") {
            paper_bundle = make_bundle(cfg, b.plan.alpha, StrategyVariant::PaperVerbatim);
            paper_policy.emplace(paper_bundle->market, paper_bundle->plan, paper_bundle->variant,
                                 paper_bundle->aux);
            const StrategyPolicy* pp = &*paper_policy;
            rivals.emplace_back(token,
                                [pp](double t, const PathState& obs) { return pp->at(t, obs); });
        } else {
            throw ConfigError("config: unknown rival '" + token + "' in compare.rivals");
        }
    }

    const auto results = compare_strategies(b.market, b.plan, b.law, cand_fn, rivals, b.sim);

    const std::string name = "compare_" + variant_name(b.variant) + "_alpha_" +
                             alpha_tag(b.plan.alpha) + ".csv";
    {
        std::ofstream out(out_dir + "/" + name, std::ios::binary | std::ios::trunc);
        out << "rival,mean_diff,std_error,lower95,n_failed_candidate,n_failed_rival,"
               "mean_candidate,mean_rival\n";
        for (const auto& r : results) {
            out << r.label << ',' << CsvWriter::format(r.mean_diff) << ','
                << CsvWriter::format(r.std_error) << ',' << CsvWriter::format(r.lower95) << ','
                << r.n_failed_candidate << ',' << r.n_failed_rival << ','
                << CsvWriter::format(r.mean_candidate) << ',' << CsvWriter::format(r.mean_rival)
                << '\n';
        }
    }

    RunManifest manifest;
    manifest.config_hash = cfg.hash();
    manifest.seed = b.sim.seed;
    manifest.T = b.grid.T;
    manifest.n_steps = b.grid.n_steps;
    manifest.n_paths = b.sim.n_paths;
    manifest.variant = variant_name(b.variant);
    manifest.outputs.push_back(name);
    for (const auto& r : results) {
        manifest.checks.push_back({"compare." + r.label + ".lower95", r.lower95, 0.0, true, true});
    }
    manifest.duration_ms = ms_since(t0);
    const std::string mpath = out_dir + "/manifest_compare.json";
    write_manifest(manifest, mpath);
    return mpath;
}

namespace {

struct XorShiftLite {
    std::uint64_t s;
    double uniform(double lo, double hi) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return lo + (hi - lo) * (static_cast<double>(s >> 11) * 0x1.0p-53);
    }
};

}  // namespace

VerifyResult run_verify(const Config& cfg, const std::string& out_dir) {
    VerifyResult vr;
    auto add = [&vr](const std::string& name, double value, double tol, bool pass,
                     bool info = false) {
        vr.rows.push_back({name, value, tol, pass, info});
    };

    ModelBundle b = make_bundle(cfg);
    StrategyPolicy policy(b.market, b.plan, b.variant, b.aux);
    XorShiftLite rnd{0x2545F4914F6CDD1DULL};

    // --- mortality: semigroup and quadrature against the closed form ---
    {
        double max_semi = 0.0, max_quad = 0.0;
        const double hi = std::min(b.market.T, b.law.validity_bound() - 1e-6);
        for (int i = 0; i < 100; ++i) {
            const double t = rnd.uniform(0.0, hi);
            const double s = rnd.uniform(t, hi);
            const double u = rnd.uniform(t, s);
            const double chain = survival_probability(b.law, t, u) * survival_probability(b.law, u, s);
            max_semi = std::max(max_semi, std::abs(chain - survival_probability(b.law, t, s)));
            const double quad = std::exp(
                -integrate([&](double x) { return force_of_mortality(b.law, x); }, t, s, 1e-13));
            max_quad = std::max(max_quad, std::abs(quad - survival_probability(b.law, t, s)));
        }
        add("mortality.semigroup_max_err", max_semi, 1e-12, max_semi <= 1e-12);
        add("mortality.quadrature_max_err", max_quad, 1e-10, max_quad <= 1e-10);
    }

    // --- market: Monte Carlo moments of r(T) vs the closed forms ---
    {
        const std::int64_t n = 100000;
        std::vector<double> terminal(static_cast<std::size_t>(n));
        const double dt = b.grid.dt();
        for (std::int64_t i = 0; i < n; ++i) {
            NormalStream stream(b.sim.seed, static_cast<std::uint64_t>(i));
            double r = b.market.r0;
            for (int k = 0; k < b.grid.n_steps; ++k) {
                const double z = stream.next_normal();
                stream.next_normal();
                stream.next_normal();
                r = step_rate_exact(b.market, r, dt, z);
            }
            terminal[static_cast<std::size_t>(i)] = r;
        }
        const double m = mean_of(terminal);
        const double v = sample_variance(terminal);
        const double se_mean = std::sqrt(v / static_cast<double>(n));
        const double se_var = v * std::sqrt(2.0 / static_cast<double>(n));
        const double dm = std::abs(m - vasicek_mean(b.market, b.market.T));
        const double dv = std::abs(v - vasicek_variance(b.market, b.market.T));
        add("market.vasicek_mean_mc", dm, 3.0 * se_mean, dm <= 3.0 * se_mean);
        add("market.vasicek_var_mc", dv, 3.0 * se_var, dv <= 3.0 * se_var);
        add("market.bond_exposure_at_T", std::abs(bond_exposure(b.market, b.market.T)), 0.0,
            bond_exposure(b.market, b.market.T) == 0.0);
        int mono_violations = 0;
        double prev = bond_exposure(b.market, 0.0);
        for (int k = 1; k <= b.grid.n_steps; ++k) {
            const double cur = bond_exposure(b.market, b.grid.time(k));
            if (cur > prev) ++mono_violations;
            prev = cur;
        }
        add("market.bond_exposure_monotone", mono_violations, 0.0, mono_violations == 0);
    }

    // --- strategy: solver identities and residuals ---
    {
        double max_pi1 = 0.0, max_pi3 = 0.0;
        for (int i = 0; i < 100; ++i) {
            MarketParams mp = b.market;
            PlanConfig pc = b.plan;
            mp.xi = rnd.uniform(-0.3, 0.3);
            mp.mu_I = StepFunction(rnd.uniform(-0.05, 0.05));
            mp.sigma_I = StepFunction(rnd.uniform(0.005, 0.2));
            mp.mu = StepFunction(rnd.uniform(-0.05, 0.1));
            mp.sigma = StepFunction(rnd.uniform(0.05, 0.5));
            mp.sigma_S = StepFunction(rnd.uniform(0.01, 0.3));
            mp.sigma1 = StepFunction(rnd.uniform(-0.1, 0.1));
            mp.sigma2 = StepFunction(rnd.uniform(-0.3, 0.3));
            pc.alpha = rnd.uniform(-6.0, 0.9);
            if (pc.alpha == 0.0) pc.alpha = -1.0;
            const double t = rnd.uniform(0.0, 0.95 * mp.T);
            const double r = rnd.uniform(-0.02, 0.10);
            const double phi_t = rnd.uniform(-0.5, 0.5);
            const StrategyVector sv = foc_solve(mp, pc, t, r, phi_t);
            max_pi1 = std::max(max_pi1, std::abs(sv.pi1 - pi1_star(mp, pc, t)));
            MarketParams mp_eq = mp;
            mp_eq.sigma_S = mp_eq.sigma;
            const StrategyVector sv_eq = foc_solve(mp_eq, pc, t, r, phi_t);
            max_pi3 = std::max(max_pi3, std::abs(sv_eq.pi3 - pi3_star(mp_eq, pc, t, r)));
        }
        add("strategy.foc_pi1_identity", max_pi1, 1e-12, max_pi1 <= 1e-12);
        add("strategy.foc_pi3_sigma_match", max_pi3, 1e-10, max_pi3 <= 1e-10);

        const bool inject = cfg.get_string("verify.inject_fault") == "pi2";
        double max_res = 0.0;
        for (int k = 0; k < b.grid.n_steps; ++k) {
            const double t = b.grid.time(k);
            const double r = vasicek_mean(b.market, t);
            StrategyVector sv = policy.at(t, r);
            if (inject) sv.pi2 += 0.1;
            const auto res = foc_residual(b.market, b.plan, t, r, sv, b.aux.phi_at(t));
            for (double x : res) max_res = std::max(max_res, std::abs(x));
        }
        add("strategy.foc_residual_max", max_res, 1e-10, max_res <= 1e-10);
        const double term = std::abs(b.aux.phi.back()) + std::abs(b.aux.varphi.back());
        add("strategy.terminal_conditions", term, 0.0, term == 0.0);

        const auto oracle = ode_oracle(b.market, b.plan, b.grid, b.variant, 0.0);
        double max_oracle = 0.0;
        for (double x : oracle) max_oracle = std::max(max_oracle, std::abs(x));
        add("strategy.ode_oracle_zero", max_oracle, 1e-12, max_oracle <= 1e-12);

        double max_phi = 0.0;
        for (double x : b.aux.phi) max_phi = std::max(max_phi, std::abs(x));
        add("strategy.phi_vs_ode_gap", max_phi, 0.0, true, true);

        // Riccati residual of the displayed phi formula (reported only).
        double max_ric = 0.0;
        for (int k = 1; k + 1 < b.grid.n_steps; ++k) {
            const double t = b.grid.time(k);
            const double dphi = (b.aux.phi[static_cast<std::size_t>(k) + 1] -
                                 b.aux.phi[static_cast<std::size_t>(k) - 1]) /
                                (2.0 * b.grid.dt());
            const double phv = b.aux.phi[static_cast<std::size_t>(k)];
            const double res = vasicek_mean(b.market, t) * dphi +
                               M_fn(b.market, b.plan, b.variant, t, phv) * phv +
                               0.5 * b.market.sigma_r * b.market.sigma_r * phv * phv;
            max_ric = std::max(max_ric, std::abs(res));
        }
        add("strategy.riccati_residual_of_phi", max_ric, 0.0, true, true);

        const double t_probe = 0.0;
        const double r_probe = b.market.r0;
        add("strategy.paper_vs_foc_pi3_gap",
            std::abs(pi3_star(b.market, b.plan, t_probe, r_probe) -
                     pi3_foc(b.market, b.plan, t_probe, r_probe)),
            0.0, true, true);
        add("strategy.paper_vs_foc_pi2_gap",
            std::abs(pi2_star(b.market, b.plan, t_probe, r_probe, b.aux.phi_at(0.0),
                              StrategyVariant::PaperVerbatim) -
                     pi2_star(b.market, b.plan, t_probe, r_probe, b.aux.phi_at(0.0),
                              StrategyVariant::FocOracle)),
            0.0, true, true);
    }

    // --- Hamiltonian: affinity and gradient-vs-condition coefficients ---
    {
        const double t = 0.25 * b.market.T;
        const double r = vasicek_mean(b.market, t);
        const StrategyVector sv = policy.at(t, r);
        const AdjointState adj{1.3, -0.4, 0.7, -0.2, 0.5, 0.9};
        const auto rep = affinity_check(b.market, b.plan, b.law, t, r, b.plan.Y0, sv, adj);
        add("hamiltonian.affinity_max", rep.max_abs, 1e-10, rep.pass);

        const auto grad = hamiltonian_control_gradient(b.market, b.plan, t, r, b.plan.Y0, adj);
        double max_gap = 0.0;
        const double h = 0.5;
        for (int d = 0; d < 3; ++d) {
            StrategyVector up = sv, dn = sv;
            (d == 0 ? up.pi1 : d == 1 ? up.pi2 : up.pi3) += h;
            (d == 0 ? dn.pi1 : d == 1 ? dn.pi2 : dn.pi3) -= h;
            const double fd = (hamiltonian(b.market, b.plan, b.law, t, r, b.plan.Y0, up, adj) -
                               hamiltonian(b.market, b.plan, b.law, t, r, b.plan.Y0, dn, adj)) /
                              (2.0 * h);
            max_gap = std::max(max_gap, std::abs(fd - grad[static_cast<std::size_t>(d)]));
        }
        add("hamiltonian.gradient_fd_max", max_gap, 1e-8, max_gap <= 1e-8);

        double max_u2 = -1e300;
        for (double alpha : {-3.0, 0.5}) {
            for (int i = 0; i < 100; ++i) {
                const double y = rnd.uniform(0.05, 50.0);
                max_u2 = std::max(max_u2, alpha * (alpha - 1.0) * std::pow(y, alpha - 2.0));
            }
        }
        add("utility.concavity_max_U2", max_u2, 0.0, max_u2 < 0.0);
    }

    // --- BSDE residual, terminal identity, A2 ---
    {
        SimOptions opt = b.sim;
        opt.n_paths = std::max<std::int64_t>(cfg.get_int("verify.n_paths"), 200);
        const auto paths = simulate_paths_full(b.market, b.plan, b.law, policy_fn(policy), opt);
        const auto stats = bsde_residual_A1(b.market, b.plan, b.law, paths, policy);
        add("bsde.terminal_identity_max", stats.max_terminal_err, 0.0,
            stats.max_terminal_err == 0.0);

        SimOptions opt2 = opt;
        opt2.grid = SimulationGrid(b.grid.T, 2 * b.grid.n_steps);
        ModelBundle b2 = make_bundle(cfg);
        b2.grid = opt2.grid;
        b2.aux.grid = opt2.grid;
        b2.aux.phi = build_phi_table(b2.market, b2.plan, opt2.grid, b2.variant);
        {
            StrategyPolicy pilot2(b2.market, b2.plan, b2.variant, b2.aux);
            b2.aux.varphi.assign(b2.aux.phi.size(), 0.0);
            const auto yp2 = build_y_proxy(b2.market, b2.plan, b2.law, policy_fn(pilot2),
                                           opt2.grid, 1000, b2.sim.seed);
            b2.aux.varphi = build_varphi_table(b2.market, b2.plan, b2.law, opt2.grid, b2.variant,
                                               b2.aux.phi, yp2);
        }
        StrategyPolicy policy2(b2.market, b2.plan, b2.variant, b2.aux);
        const auto paths2 = simulate_paths_full(b2.market, b2.plan, b2.law, policy_fn(policy2), opt2);
        const auto stats2 = bsde_residual_A1(b2.market, b2.plan, b2.law, paths2, policy2);
        const double ratio = stats.mean_abs / stats2.mean_abs;
        add("bsde.residual_halving_ratio", ratio, 0.0, ratio >= 1.7 && ratio <= 2.3);

        const double t_mid = 0.5 * b.market.T;
        const auto a2 = estimate_A2(b.market, b.plan, b.law, paths, t_mid, b.aux,
                                    cfg.get_string("verify.a2_discount") == "paper"
                                        ? A2Discount::PaperForm
                                        : A2Discount::Discounted,
                                    static_cast<int>(cfg.get_int("verify.a2_degree")));
        add("a2.value_mid_horizon", a2.value, 0.0, true, true);
        add("a2.std_error_mid_horizon", a2.std_error, 0.0, true, true);

        PlanConfig plan0 = b.plan;
        plan0.kappa = 0.0;
        const auto a2_zero = estimate_A2(b.market, plan0, b.law, paths, t_mid, b.aux);
        add("a2.kappa0_exact_zero", std::abs(a2_zero.value), 0.0, a2_zero.value == 0.0);

        double frac = 0.0;
        for (const auto& path : paths) {
            if (!(path.back().Y > 0.0)) frac += 1.0;
        }
        frac /= static_cast<double>(paths.size());
        add("wealth.admissibility_failed_fraction", frac, 0.0, true, true);

        for (const auto& row : integrability_report(b.market, b.plan, b.law, paths, policy)) {
            vr.rows.push_back(row);
        }
    }

    vr.exit_code = 0;
    for (const auto& row : vr.rows) {
        if (!row.informational && !row.pass) vr.exit_code = 1;
    }

    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        std::ofstream csv(out_dir + "/verify_report.csv", std::ios::binary | std::ios::trunc);
        csv << "check,value,tolerance,pass,informational\n";
        for (const auto& row : vr.rows) {
            csv << row.name << ',' << CsvWriter::format(row.value) << ','
                << CsvWriter::format(row.tolerance) << ',' << (row.pass ? 1 : 0) << ','
                << (row.informational ? 1 : 0) << '\n';
        }
        RunManifest manifest;
        manifest.config_hash = cfg.hash();
        manifest.seed = cfg.get_u64("sim.seed");
        const SimulationGrid grid = cfg.grid();
        manifest.T = grid.T;
        manifest.n_steps = grid.n_steps;
        manifest.n_paths = cfg.get_int("verify.n_paths");
        manifest.variant = cfg.get_string("strategy.variant");
        manifest.outputs.push_back("verify_report.csv");
        for (const auto& row : vr.rows) {
            manifest.checks.push_back({row.name, row.value, row.tolerance, row.pass,
                                       row.informational});
        }
        write_manifest(manifest, out_dir + "/manifest_verify.json");
    }
    return vr;
}

}  // namespace pensiondc
