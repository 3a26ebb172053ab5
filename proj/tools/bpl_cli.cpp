#include <complex>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpl/bench/config.hpp"
#include "bpl/bench/metrics.hpp"
#include "bpl/bench/scenario.hpp"
#include "bpl/bpl.hpp"

namespace {

int run_stability(const std::string& method, std::size_t K, long ka_opt, long kb_opt,
                  std::size_t NG, double re_min, double re_max, double im_min, double im_max,
                  std::size_t res, long k_max_opt, bool size_only, const std::string& out) {
    std::size_t ka = 0, kb = 0;
    if (ka_opt >= 0 && kb_opt >= 0) {
        ka = static_cast<std::size_t>(ka_opt);
        kb = static_cast<std::size_t>(kb_opt);
    } else {
        const bpl::SweepDegrees d = bpl::stability_sweep_degrees(K);
        ka = d.ka;
        kb = d.kb;
    }
    const bpl::QuadratureRule rule = bpl::gauss_laguerre_rule(NG);

    const auto amplification = [&](std::size_t order) {
        if (method == "anm")
            return std::function<double(std::complex<double>)>(
                [order](std::complex<double> z) { return bpl::amplification_anm(z, order); });
        const bpl::SweepDegrees d = bpl::stability_sweep_degrees(order);
        const std::size_t a = order == K ? ka : d.ka;
        const std::size_t b = order == K ? kb : d.kb;
        auto amp = std::make_shared<bpl::BplAmplification>(order, a, b, rule);
        return std::function<double(std::complex<double>)>(
            [amp](std::complex<double> z) { return (*amp)(z); });
    };

    if (size_only) {
        std::vector<bpl::bench::SizeRow> rows;
        const std::size_t k_hi = k_max_opt > 0 ? static_cast<std::size_t>(k_max_opt) : K;
        for (std::size_t k = K; k <= k_hi; ++k) {
            const bpl::SweepDegrees d =
                (k == K && ka_opt >= 0) ? bpl::SweepDegrees{ka, kb} : bpl::stability_sweep_degrees(k);
            const double size = bpl::region_size(amplification(k));
            rows.push_back({k, method == "anm" ? 0 : d.ka, method == "anm" ? 0 : d.kb, size});
            std::printf("%.4f\n", size);
        }
        if (!out.empty()) bpl::bench::write_sizes_csv(out, rows);
        return 0;
    }

    const bpl::StabilityGrid grid =
        bpl::region_mask(amplification(K), re_min, re_max, im_min, im_max, res);
    if (!out.empty()) {
        bpl::bench::write_region_csv(out, grid);
    } else {
        std::size_t inside = 0;
        for (const auto& row : grid.mask)
            for (const bool b : row) inside += b ? 1 : 0;
        std::printf("inside fraction: %.6f\n",
                    static_cast<double>(inside) / static_cast<double>(res * res));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Borel-Padé-Laplace time integration benchmarks"};
    app.require_subcommand(1);

    // ---- stability ----
    auto* stab = app.add_subcommand("stability", "stability regions and |D| sizes");
    std::string method = "anm";
    std::size_t K = 4, NG = 100, res = 200;
    long ka_opt = -1, kb_opt = -1, k_max = -1;
    double re_min = -15, re_max = 1, im_min = -8, im_max = 8;
    bool size_only = false;
    std::string stab_out;
    stab->add_option("--method", method, "anm | bpl")->check(CLI::IsMember({"anm", "bpl"}));
    stab->add_option("--K", K, "series order");
    stab->add_option("--Ka", ka_opt, "Padé numerator degree");
    stab->add_option("--Kb", kb_opt, "Padé denominator degree");
    stab->add_option("--NG", NG, "Gauss-Laguerre points");
    stab->add_option("--re-min", re_min);
    stab->add_option("--re-max", re_max);
    stab->add_option("--im-min", im_min);
    stab->add_option("--im-max", im_max);
    stab->add_option("--res", res, "grid resolution per axis");
    stab->add_option("--K-max", k_max, "sweep K..K-max (size table)");
    stab->add_flag("--size-only", size_only, "print |D| instead of writing a mask");
    stab->add_option("--out", stab_out, "output CSV path");

    // ---- integrate ----
    auto* integ = app.add_subcommand("integrate", "run one problem/scheme scenario");
    bpl::bench::Config icfg;
    std::string problem = "lotka", scheme = "bpl", norm = "global", out, metrics_out;
    double eps = -1, tol = -1, T = -1, periods = -1, lambda = 0, alpha = -1, beta = -1,
           delta = -1, gamma = -1, u0v = -1, v0v = -1, ratio = -1, dt_init = -1, dt_min = -1;
    long D = -1, iK = -1, iKa = -1, iKb = -1, iNG = -1, sps = -1, msamp = -1;
    integ->add_option("--problem", problem)->check(CLI::IsMember({"dahlquist", "lotka", "kdv"}));
    integ->add_option("--scheme", scheme)
        ->check(CLI::IsMember({"bpl", "anm", "rk4", "gau", "bdf", "etd"}));
    integ->add_option("--eps", eps, "residue tolerance (bpl/anm)");
    integ->add_option("--tol", tol, "error tolerance (reference schemes)");
    integ->add_option("--T", T, "horizon (s)");
    integ->add_option("--periods", periods, "kdv horizon in soliton periods");
    integ->add_option("--lambda", lambda, "dahlquist rate")->default_val(-1.0);
    integ->add_option("--alpha", alpha);
    integ->add_option("--beta", beta);
    integ->add_option("--delta", delta);
    integ->add_option("--gamma", gamma);
    integ->add_option("--u0", u0v);
    integ->add_option("--v0", v0v);
    integ->add_option("--ratio", ratio, "lotka stiffness ratio (sets delta = r*alpha)");
    integ->add_option("--D", D, "kdv system size (2M)");
    integ->add_option("--K", iK);
    integ->add_option("--Ka", iKa);
    integ->add_option("--Kb", iKb);
    integ->add_option("--NG", iNG);
    integ->add_option("--residue-norm", norm)->check(CLI::IsMember({"global", "component"}));
    integ->add_option("--dt-init", dt_init);
    integ->add_option("--dt-min", dt_min);
    integ->add_option("--out", out, "trajectory CSV path");
    integ->add_option("--metrics-out", metrics_out, "metrics CSV path");
    integ->add_option("--samples-per-step", sps);
    integ->add_option("--metric-samples", msamp);

    // ---- sweep ----
    auto* swp = app.add_subcommand("sweep", "run a sweep from a config file");
    std::string sweep_config;
    std::vector<std::string> overrides;
    swp->add_option("config", sweep_config, "key=value config file")->required();
    swp->add_option("--set", overrides, "override key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (stab->parsed())
            return run_stability(method, K, ka_opt, kb_opt, NG, re_min, re_max, im_min, im_max,
                                 res, k_max, size_only, stab_out);

        if (integ->parsed()) {
            icfg.set("problem", problem);
            icfg.set("scheme", scheme);
            const double tolerance = eps > 0 ? eps : tol;
            if (tolerance > 0) icfg.set("tolerance", bpl::bench::format_full(tolerance));
            if (T > 0) icfg.set("T", bpl::bench::format_full(T));
            if (periods > 0) icfg.set("periods", bpl::bench::format_full(periods));
            icfg.set("lambda", bpl::bench::format_full(lambda));
            if (alpha > 0) icfg.set("alpha", bpl::bench::format_full(alpha));
            if (beta > 0) icfg.set("beta", bpl::bench::format_full(beta));
            if (delta > 0) icfg.set("delta", bpl::bench::format_full(delta));
            if (gamma > 0) icfg.set("gamma", bpl::bench::format_full(gamma));
            if (u0v > 0) icfg.set("u0", bpl::bench::format_full(u0v));
            if (v0v > 0) icfg.set("v0", bpl::bench::format_full(v0v));
            if (ratio > 0) icfg.set("ratio", bpl::bench::format_full(ratio));
            if (D > 0) icfg.set("D", std::to_string(D));
            if (iK > 0) icfg.set("K", std::to_string(iK));
            if (iKa >= 0) icfg.set("Ka", std::to_string(iKa));
            if (iKb >= 0) icfg.set("Kb", std::to_string(iKb));
            if (iNG > 0) icfg.set("NG", std::to_string(iNG));
            icfg.set("residue_norm", norm);
            if (dt_init > 0) icfg.set("dt_init", bpl::bench::format_full(dt_init));
            if (dt_min > 0) icfg.set("dt_min", bpl::bench::format_full(dt_min));
            if (!out.empty()) icfg.set("out", out);
            if (sps > 0) icfg.set("samples_per_step", std::to_string(sps));
            if (msamp > 0) icfg.set("metric_samples", std::to_string(msamp));

            const bpl::bench::Scenario sc = bpl::bench::scenario_from_config(icfg);
            const bpl::bench::RunMetrics m = bpl::bench::run_scenario(sc);
            std::cout << bpl::bench::metrics_csv_header() << '\n'
                      << bpl::bench::metrics_csv_row(m) << '\n';
            if (!metrics_out.empty()) bpl::bench::write_metrics_csv(metrics_out, {m});
            return m.status == "ok" ? 0 : 2;
        }

        // sweep
        bpl::bench::Config cfg = bpl::bench::Config::from_file(sweep_config);
        for (const std::string& kv : overrides) cfg.parse_line(kv);
        const std::vector<bpl::bench::RunMetrics> rows = bpl::bench::sweep(cfg);
        std::cout << bpl::bench::metrics_csv_header() << '\n';
        for (const auto& m : rows) std::cout << bpl::bench::metrics_csv_row(m) << '\n';
        return 0;
    } catch (const bpl::StepUnderflow& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 2;
    } catch (const bpl::NewtonDivergence& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 2;
    } catch (const bpl::Divergence& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 2;
    } catch (const bpl::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
