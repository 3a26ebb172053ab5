#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bpl/bench/config.hpp"
#include "bpl/bench/metrics.hpp"
#include "bpl/bpl.hpp"

namespace bpl::bench {

struct Scenario {
    std::string problem = "lotka";  // dahlquist | lotka | kdv
    std::string scheme = "bpl";     // bpl | anm | rk4 | gau | bdf | etd
    double tolerance = 1e-8;        // residue eps for bpl/anm, error tol otherwise
    double T = 0.0;
    double periods = 0.0;           // kdv: horizon in soliton periods when T == 0

    double lambda = -1.0;

    problems::LotkaVolterraParams lv;
    double lv_u0 = 2.0;
    double lv_v0 = 1.0;
    double stiffness_ratio = 0.0;   // > 0 sets lv.delta = r * lv.alpha

    problems::KdvParams kdv;

    std::size_t K = 10, Ka = 5, Kb = 4, NG = 20;
    ResidueNorm residue_norm = ResidueNorm::GlobalL2;
    double dt_init = 0.0;
    double dt_min = 1e-12;

    std::string out_trajectory;
    std::size_t samples_per_step = 20;
    std::size_t metric_samples = 0;  // 0 = automatic

    void validate() const {
        if (problem != "dahlquist" && problem != "lotka" && problem != "kdv")
            throw Error("scenario: unknown problem '" + problem + "'");
        if (scheme != "bpl" && scheme != "anm" && scheme != "rk4" && scheme != "gau" &&
            scheme != "bdf" && scheme != "etd")
            throw Error("scenario: unknown scheme '" + scheme + "'");
        if (!(tolerance > 0)) throw Error("scenario: tolerance must be positive");
        if (!(T > 0) && !(periods > 0 && problem == "kdv"))
            throw Error("scenario: need T > 0 (or periods > 0 for kdv)");
        if (scheme == "bpl" || scheme == "anm") {
            if (Ka + Kb != K - 1) throw Error("scenario: Padé degrees must satisfy Ka+Kb=K-1");
        }
    }

    double horizon() const {
        if (T > 0) return T;
        return periods * kdv.period();
    }
};

inline Scenario scenario_from_config(const Config& c) {
    Scenario s;
    s.problem = c.get("problem", s.problem);
    s.scheme = c.get("scheme", s.scheme);
    s.tolerance = c.get_double("tolerance", s.tolerance);
    s.T = c.get_double("T", s.T);
    s.periods = c.get_double("periods", s.periods);
    s.lambda = c.get_double("lambda", s.lambda);
    s.lv.alpha = c.get_double("alpha", s.lv.alpha);
    s.lv.beta = c.get_double("beta", s.lv.beta);
    s.lv.delta = c.get_double("delta", s.lv.delta);
    s.lv.gamma = c.get_double("gamma", s.lv.gamma);
    s.lv_u0 = c.get_double("u0", s.lv_u0);
    s.lv_v0 = c.get_double("v0", s.lv_v0);
    s.stiffness_ratio = c.get_double("ratio", s.stiffness_ratio);
    if (s.stiffness_ratio > 0) s.lv = problems::lv_params_for_ratio(s.stiffness_ratio, s.lv);
    if (c.has("D")) s.kdv.M = static_cast<std::size_t>(c.get_long("D", 64)) / 2;
    s.kdv.X = c.get_double("X", s.kdv.X);
    s.kdv.g = c.get_double("g", s.kdv.g);
    s.kdv.d = c.get_double("depth", s.kdv.d);
    s.kdv.U = c.get_double("U", s.kdv.U);
    s.K = static_cast<std::size_t>(c.get_long("K", static_cast<long>(s.K)));
    if (c.has("Ka") || c.has("Kb")) {
        s.Ka = static_cast<std::size_t>(c.get_long("Ka", static_cast<long>(s.Ka)));
        s.Kb = static_cast<std::size_t>(c.get_long("Kb", static_cast<long>(s.Kb)));
    } else {
        const SweepDegrees d = stability_sweep_degrees(s.K);
        s.Ka = d.ka;
        s.Kb = d.kb;
    }
    s.NG = static_cast<std::size_t>(c.get_long("NG", static_cast<long>(s.NG)));
    const std::string norm = c.get("residue_norm", "global");
    if (norm == "global")
        s.residue_norm = ResidueNorm::GlobalL2;
    else if (norm == "component")
        s.residue_norm = ResidueNorm::ComponentWise;
    else
        throw Error("scenario: residue_norm must be 'global' or 'component'");
    s.dt_init = c.get_double("dt_init", s.dt_init);
    s.dt_min = c.get_double("dt_min", s.dt_min);
    s.out_trajectory = c.get("out", s.out_trajectory);
    s.samples_per_step =
        static_cast<std::size_t>(c.get_long("samples_per_step", static_cast<long>(s.samples_per_step)));
    s.metric_samples =
        static_cast<std::size_t>(c.get_long("metric_samples", static_cast<long>(s.metric_samples)));
    return s;
}

namespace detail {

template <typename Scalar>
using DenseFn = std::function<Vector<Scalar>(double)>;

template <typename Scalar>
struct SchemeRun {
    DenseFn<Scalar> dense;
    std::size_t steps = 0;
    Vector<Scalar> final_state;
};

template <typename Scalar, typename Problem>
SchemeRun<Scalar> run_scheme(const Problem& problem, const Vector<Scalar>& u0,
                             const Scenario& sc) {
    const double T = sc.horizon();
    SchemeRun<Scalar> out;
    if (sc.scheme == "bpl" || sc.scheme == "anm") {
        BplConfig cfg;
        cfg.K = sc.K;
        cfg.Ka = sc.Ka;
        cfg.Kb = sc.Kb;
        cfg.N_G = sc.NG;
        cfg.eps = sc.tolerance;
        cfg.dt_init = sc.dt_init;
        cfg.dt_min = sc.dt_min;
        cfg.residue_norm = sc.residue_norm;
        auto traj = std::make_shared<Trajectory<Scalar>>(
            sc.scheme == "bpl" ? bpl_integrate(problem, u0, T, cfg)
                               : anm_integrate(problem, u0, T, cfg));
        out.steps = traj->step_count;
        out.final_state = traj->final_state;
        out.dense = [traj](double t) { return dense_output(*traj, t); };
        return out;
    }
    reference::AdaptiveConfig cfg;
    cfg.tol = sc.tolerance;
    cfg.dt_init = sc.dt_init > 0 ? sc.dt_init : 1e-3 * T;
    cfg.dt_min = sc.dt_min;
    auto run = std::make_shared<reference::SolveRecord<Scalar>>();
    if (sc.scheme == "rk4")
        *run = reference::rk4_fehlberg_integrate(problem, u0, T, cfg);
    else if (sc.scheme == "gau")
        *run = reference::gauss_legendre10_integrate(problem, u0, T, cfg);
    else if (sc.scheme == "bdf")
        *run = reference::bdf4_integrate(problem, u0, T, cfg);
    else
        *run = reference::etdrk4_integrate(problem, u0, T, cfg);
    out.steps = run->accepted;
    out.final_state = run->final_state();
    const Problem* p = &problem;
    out.dense = [run, p](double t) { return reference::sample_record(*p, *run, t); };
    return out;
}

inline std::vector<double> uniform_times(double T, std::size_t n) {
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i)
        ts[i] = T * static_cast<double>(i) / static_cast<double>(n - 1);
    return ts;
}

template <typename Scalar>
void write_trajectory_csv(const std::string& path, const std::vector<double>& times,
                          const std::vector<Vector<Scalar>>& samples) {
    std::ofstream outf(path);
    if (!outf) throw Error("cannot open trajectory file: " + path);
    outf << 't';
    const std::size_t dim = samples.front().size();
    for (std::size_t j = 0; j < dim; ++j) {
        if constexpr (scalar_traits<Scalar>::is_complex)
            outf << ",component_" << j << "_re,component_" << j << "_im";
        else
            outf << ",component_" << j;
    }
    outf << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
        outf << format_full(times[i]);
        for (std::size_t j = 0; j < dim; ++j) {
            if constexpr (scalar_traits<Scalar>::is_complex)
                outf << ',' << format_full(samples[i][j].real()) << ','
                     << format_full(samples[i][j].imag());
            else
                outf << ',' << format_full(samples[i][j]);
        }
        outf << '\n';
    }
}

}  // namespace detail

/// Execute one scenario.  Solver failures are reported in the returned row
/// (status = "failed"), never thrown; configuration problems throw.
inline RunMetrics run_scenario(const Scenario& sc) {
    sc.validate();
    RunMetrics m;
    m.scheme = sc.scheme;
    m.problem = sc.problem;
    m.tolerance_used = sc.tolerance;
    const double T = sc.horizon();

    const auto t_start = std::chrono::steady_clock::now();
    try {
        if (sc.problem == "kdv") {
            problems::Kdv kdv(sc.kdv);
            const auto run = detail::run_scheme(kdv, kdv_initial_spectrum(sc.kdv), sc);
            m.step_count = run.steps;
            m.mean_step = T / static_cast<double>(run.steps);
            const std::size_t ns = sc.metric_samples ? sc.metric_samples : 151;
            const std::vector<double> ts = detail::uniform_times(T, ns);
            std::vector<Vector<problems::Complex>> samples(ns);
            for (std::size_t i = 0; i < ns; ++i) samples[i] = run.dense(ts[i]);
            m.mean_error = problems::kdv_error_metric(sc.kdv, ts, samples);
            if (!sc.out_trajectory.empty()) {
                const std::size_t nt = std::min<std::size_t>(sc.samples_per_step * run.steps + 1,
                                                             100'001);
                const std::vector<double> tt = detail::uniform_times(T, nt);
                std::vector<Vector<problems::Complex>> rows(nt);
                for (std::size_t i = 0; i < nt; ++i) rows[i] = run.dense(tt[i]);
                detail::write_trajectory_csv(sc.out_trajectory, tt, rows);
            }
        } else {
            std::unique_ptr<problems::Dahlquist> dq;
            std::unique_ptr<problems::LotkaVolterra> lv;
            Vector<double> u0;
            if (sc.problem == "dahlquist") {
                dq = std::make_unique<problems::Dahlquist>(problems::Dahlquist{sc.lambda});
                u0 = {1.0};
            } else {
                lv = std::make_unique<problems::LotkaVolterra>(sc.lv);
                u0 = {sc.lv_u0, sc.lv_v0};
            }
            detail::SchemeRun<double> run;
            if (dq)
                run = detail::run_scheme(*dq, u0, sc);
            else
                run = detail::run_scheme(*lv, u0, sc);
            m.step_count = run.steps;
            m.mean_step = T / static_cast<double>(run.steps);

            const std::size_t ns = sc.metric_samples
                                       ? sc.metric_samples
                                       : std::min<std::size_t>(
                                             std::max<std::size_t>(2000, 4 * run.steps), 100'000);
            const std::vector<double> ts = detail::uniform_times(T, ns);
            std::vector<double> err(ns);
            if (sc.problem == "dahlquist") {
                for (std::size_t i = 0; i < ns; ++i) {
                    const double exact = std::exp(sc.lambda * ts[i]);
                    err[i] = std::abs(run.dense(ts[i])[0] - exact) / std::abs(exact);
                }
            } else {
                const double I0 = problems::lv_first_integral(sc.lv, sc.lv_u0, sc.lv_v0);
                for (std::size_t i = 0; i < ns; ++i) {
                    const Vector<double> u = run.dense(ts[i]);
                    err[i] = std::abs(problems::lv_first_integral(sc.lv, u[0], u[1]) - I0);
                }
            }
            double integral = 0.0;
            for (std::size_t i = 1; i < ns; ++i)
                integral += 0.5 * (err[i] + err[i - 1]) * (ts[i] - ts[i - 1]);
            m.mean_error = integral / T;

            if (!sc.out_trajectory.empty()) {
                const std::size_t nt = std::min<std::size_t>(sc.samples_per_step * run.steps + 1,
                                                             1'000'001);
                const std::vector<double> tt = detail::uniform_times(T, nt);
                std::vector<Vector<double>> rows(nt);
                for (std::size_t i = 0; i < nt; ++i) rows[i] = run.dense(tt[i]);
                detail::write_trajectory_csv(sc.out_trajectory, tt, rows);
            }
        }
    } catch (const StepUnderflow& e) {
        m.status = "failed";
        m.note = std::string("step underflow: ") + e.what();
    } catch (const NewtonDivergence& e) {
        m.status = "failed";
        m.note = std::string("newton divergence: ") + e.what();
    } catch (const Divergence& e) {
        m.status = "failed";
        m.note = std::string("divergence: ") + e.what();
    } catch (const NonFiniteCoefficient& e) {
        m.status = "failed";
        m.note = std::string("non-finite: ") + e.what();
    } catch (const DomainError& e) {
        m.status = "failed";
        m.note = std::string("domain error: ") + e.what();
    }
    m.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return m;
}

/// Sweep one axis (tolerances | ratios | sizes | orders) over one or more
/// schemes.  Every point yields a row; failures are recorded, not fatal.
inline std::vector<RunMetrics> sweep(const Config& cfg) {
    Scenario base = scenario_from_config(cfg);

    std::vector<std::string> schemes;
    {
        std::string list = cfg.get("schemes", base.scheme);
        for (auto& ch : list)
            if (ch == ',' || ch == ';') ch = ' ';
        std::istringstream is(list);
        std::string s;
        while (is >> s) schemes.push_back(s);
    }
    if (schemes.empty()) throw Error("sweep: empty scheme list");

    std::string axis;
    for (const char* candidate : {"tolerances", "ratios", "sizes", "orders"})
        if (cfg.has(candidate)) {
            if (!axis.empty()) throw Error("sweep: multiple sweep axes given");
            axis = candidate;
        }
    if (axis.empty()) throw Error("sweep: no sweep axis (tolerances/ratios/sizes/orders)");
    const std::vector<double> values = cfg.get_list(axis);
    if (values.empty()) throw Error("sweep: axis '" + axis + "' is empty");

    std::vector<RunMetrics> rows;
    for (const std::string& scheme : schemes) {
        for (const double v : values) {
            Scenario sc = base;
            sc.scheme = scheme;
            sc.out_trajectory.clear();
            if (axis == "tolerances") {
                sc.tolerance = v;
            } else if (axis == "ratios") {
                sc.stiffness_ratio = v;
                problems::LotkaVolterraParams lvb;
                lvb.alpha = cfg.get_double("alpha", lvb.alpha);
                lvb.beta = cfg.get_double("beta", lvb.beta);
                lvb.gamma = cfg.get_double("gamma", lvb.gamma);
                sc.lv = problems::lv_params_for_ratio(v, lvb);
            } else if (axis == "sizes") {
                sc.kdv.M = static_cast<std::size_t>(v) / 2;
            } else {
                sc.K = static_cast<std::size_t>(v);
                const SweepDegrees d = stability_sweep_degrees(sc.K);
                sc.Ka = d.ka;
                sc.Kb = d.kb;
            }
            RunMetrics m = run_scenario(sc);
            if (axis == "ratios")
                m.note = m.note.empty() ? ("r=" + format_full(v)) : (m.note + "; r=" + format_full(v));
            else if (axis == "sizes")
                m.note = m.note.empty() ? ("D=" + std::to_string(static_cast<long>(v)))
                                        : (m.note + "; D=" + std::to_string(static_cast<long>(v)));
            else if (axis == "orders")
                m.note = m.note.empty() ? ("K=" + std::to_string(static_cast<long>(v)))
                                        : (m.note + "; K=" + std::to_string(static_cast<long>(v)));
            rows.push_back(std::move(m));
        }
    }
    const std::string out = cfg.get("out");
    if (!out.empty()) write_metrics_csv(out, rows);
    return rows;
}

}  // namespace bpl::bench
