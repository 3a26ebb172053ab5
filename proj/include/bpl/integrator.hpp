#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bpl/borel.hpp"
#include "bpl/detail/algebra.hpp"
#include "bpl/errors.hpp"
#include "bpl/pade.hpp"
#include "bpl/quadrature.hpp"
#include "bpl/series.hpp"

namespace bpl {

/// How the residue acceptance test normalizes the defect dS/dt - F(t, S).
///
/// GlobalL2 compares the Euclidean norm of the defect against eps * |S|_2 and
/// is the right choice when only the dominant components matter (spectral
/// tails sit below the convolution round-off floor and cannot be controlled in
/// relative terms).  ComponentWise demands |r_j| <= eps * |S_j| for every
/// component; it is required for problems whose components traverse many
/// orders of magnitude and must stay relatively accurate all the way down
/// (severely stiff population dynamics).
enum class ResidueNorm { GlobalL2, ComponentWise };

struct BplConfig {
    std::size_t K = 10;        // series truncation order
    std::size_t Ka = 5;        // Padé numerator degree
    std::size_t Kb = 4;        // Padé denominator degree
    std::size_t N_G = 20;      // Gauss-Laguerre point count
    double eps = 1e-8;         // relative residue tolerance
    double step_growth = 2.0;
    double step_shrink = 0.5;
    std::size_t n_check = 5;   // residue sample points per candidate step
    double dt_init = 0.0;      // 0 = 1e-3 * horizon
    double dt_min = 1e-12;
    std::size_t max_growths = 8;
    double rcond = 1e-14;
    ResidueNorm residue_norm = ResidueNorm::GlobalL2;

    void validate() const {
        if (K < 1) throw DomainError("BplConfig: K must be >= 1");
        if (Ka + Kb != K - 1) throw DomainError("BplConfig: Ka+Kb must equal K-1");
        if (!(eps > 0)) throw DomainError("BplConfig: eps must be positive");
        if (!(step_shrink > 0 && step_shrink < 1 && step_growth > 1))
            throw DomainError("BplConfig: need 0 < step_shrink < 1 < step_growth");
        if (!(dt_min > 0)) throw DomainError("BplConfig: dt_min must be positive");
        if (n_check < 1) throw DomainError("BplConfig: n_check must be >= 1");
    }
};

/// One accepted step: the local solution representation on [t_start, t_end].
/// `fallback` marks steps evaluated from the truncated polynomial because the
/// Padé continuation had a pole on the Laplace ray (and every step of an ANM
/// run).
template <typename Scalar>
struct StepRecord {
    double t_start = 0.0;
    double t_end = 0.0;
    bool fallback = false;
    TaylorSeries<Scalar> series;                  // always kept (fallback evaluation)
    std::shared_ptr<BorelSum<Scalar>> borel;      // null for fallback/ANM records

    Vector<Scalar> evaluate(double t) const {
        if (borel) return evaluate_borel_sum(*borel, t, /*check_pole=*/false);
        return evaluate_truncated(series, t);
    }
    Vector<Scalar> evaluate_derivative(double t) const {
        if (borel) return evaluate_borel_sum_derivative(*borel, t, /*check_pole=*/false);
        return evaluate_truncated_derivative(series, t);
    }
};

template <typename Scalar>
struct Trajectory {
    std::vector<StepRecord<Scalar>> records;
    Vector<Scalar> final_state;
    std::size_t step_count = 0;
    std::size_t residue_evaluations = 0;
    std::size_t fallback_count = 0;

    double t_begin() const { return records.empty() ? 0.0 : records.front().t_start; }
    double t_end() const { return records.empty() ? 0.0 : records.back().t_end; }
};

/// Piecewise dense output; the covering record's representation is evaluated
/// directly, no interpolation.
template <typename Scalar>
Vector<Scalar> dense_output(const Trajectory<Scalar>& traj, double t) {
    if (traj.records.empty() || t < traj.t_begin() - 1e-12 || t > traj.t_end() + 1e-12)
        throw OutOfRange("dense_output: time outside trajectory range");
    // binary search for the covering record
    std::size_t lo = 0, hi = traj.records.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (t < traj.records[mid].t_end)
            hi = mid;
        else
            lo = mid + 1;
    }
    return traj.records[lo].evaluate(std::min(t, traj.records[lo].t_end));
}

namespace detail {

template <typename Scalar>
bool residue_passes(const Vector<Scalar>& defect, const Vector<Scalar>& state,
                    double eps, ResidueNorm norm) {
    if (norm == ResidueNorm::GlobalL2)
        return norm2(defect) <= eps * std::max(norm2(state), 1e-300);
    for (std::size_t j = 0; j < defect.size(); ++j) {
        if (scalar_traits<Scalar>::abs(defect[j]) >
            eps * std::max(scalar_traits<Scalar>::abs(state[j]), 1e-300))
            return false;
    }
    return true;
}

/// Sample fractions of (0, 1], clustered toward the far end of the step where
/// the series representation degrades first.
inline std::vector<double> check_fractions(std::size_t n) {
    std::vector<double> f(n);
    for (std::size_t j = 1; j <= n; ++j)
        f[j - 1] = std::sin(0.5 * M_PI * static_cast<double>(j) / static_cast<double>(n));
    f.back() = 1.0;
    return f;
}

}  // namespace detail

/// One adaptive step of the Borel-Padé-Laplace integrator (or of the plain
/// truncated-series scheme when `anm` is true).
///
/// Builds the series and its Borel sum once, then searches for the largest
/// step passing the residue test at all sample points: the initial guess is
/// grown geometrically while it passes (at most cfg.max_growths times, capped
/// at dt_cap) and shrunk geometrically until it passes otherwise.
template <typename Scalar, SeriesProblem<Scalar> Problem>
StepRecord<Scalar> bpl_step(const Problem& problem, double t0, const Vector<Scalar>& u0,
                            const BplConfig& cfg, double dt_guess, double dt_cap,
                            std::shared_ptr<const QuadratureRule> rule,
                            std::size_t& residue_evals, bool anm = false) {
    StepRecord<Scalar> rec;
    rec.t_start = t0;
    rec.series = generate_series(problem, t0, u0, cfg.K);
    if (!anm)
        rec.borel = std::make_shared<BorelSum<Scalar>>(
            make_borel_sum(rec.series, cfg.Ka, cfg.Kb, std::move(rule), cfg.rcond));

    const std::vector<double> fracs = detail::check_fractions(cfg.n_check);

    // Candidate evaluation mode: Borel sum unless a pole sits inside the
    // quadrature support for this candidate's span, in which case the
    // truncated polynomial is used (fallback).
    const auto candidate_fallback = [&](double dt) -> bool {
        return !anm && has_pole_on_ray(*rec.borel, dt);
    };
    const auto residue_ok = [&](double dt, bool fb) -> bool {
        for (const double f : fracs) {
            const double t = t0 + f * dt;
            Vector<Scalar> s, d;
            if (fb || anm) {
                s = evaluate_truncated(rec.series, t);
                d = evaluate_truncated_derivative(rec.series, t);
            } else {
                s = evaluate_borel_sum(*rec.borel, t, false);
                d = evaluate_borel_sum_derivative(*rec.borel, t, false);
            }
            ++residue_evals;
            Vector<Scalar> f_of_s = problem.rhs(t, s);
            for (std::size_t j = 0; j < d.size(); ++j) d[j] -= f_of_s[j];
            if (!detail::residue_passes(d, s, cfg.eps, cfg.residue_norm)) return false;
        }
        return true;
    };

    double dt = std::min(dt_guess, dt_cap);
    bool fb = candidate_fallback(dt);
    double accepted = -1.0;
    double rejected = -1.0;  // smallest failing candidate, when one exists
    bool accepted_fb = false;
    if (residue_ok(dt, fb)) {
        accepted = dt;
        accepted_fb = fb;
        for (std::size_t g = 0; g < cfg.max_growths && accepted < dt_cap; ++g) {
            const double cand = std::min(accepted * cfg.step_growth, dt_cap);
            const bool cand_fb = candidate_fallback(cand);
            if (!residue_ok(cand, cand_fb)) {
                rejected = cand;
                break;
            }
            accepted = cand;
            accepted_fb = cand_fb;
        }
    } else {
        rejected = dt;
        while (true) {
            dt *= cfg.step_shrink;
            if (dt < cfg.dt_min)
                throw StepUnderflow("bpl_step: no step >= dt_min satisfies the residue tolerance",
                                    t0);
            fb = candidate_fallback(dt);
            if (residue_ok(dt, fb)) {
                accepted = dt;
                accepted_fb = fb;
                break;
            }
            rejected = dt;
        }
    }
    // Two bisection refinements of the pass/fail bracket tighten "largest
    // passing candidate" beyond the geometric ladder's quantization.
    for (int r = 0; r < 2 && rejected > accepted; ++r) {
        const double mid = 0.5 * (accepted + rejected);
        const bool mid_fb = candidate_fallback(mid);
        if (residue_ok(mid, mid_fb)) {
            accepted = mid;
            accepted_fb = mid_fb;
        } else {
            rejected = mid;
        }
    }

    rec.t_end = t0 + accepted;
    rec.fallback = accepted_fb && !anm;
    return rec;
}

template <typename Scalar, SeriesProblem<Scalar> Problem>
Trajectory<Scalar> integrate_series_scheme(const Problem& problem, const Vector<Scalar>& u0,
                                           double T, const BplConfig& cfg, bool anm) {
    cfg.validate();
    if (!(T > 0)) throw DomainError("bpl_integrate: horizon must be positive");
    const auto rule = std::make_shared<const QuadratureRule>(gauss_laguerre_rule(cfg.N_G));

    Trajectory<Scalar> traj;
    double t = 0.0;
    Vector<Scalar> u = u0;
    double dt_guess = cfg.dt_init > 0 ? cfg.dt_init : 1e-3 * T;
    while (t < T * (1.0 - 1e-15)) {
        StepRecord<Scalar> rec = bpl_step(problem, t, u, cfg, dt_guess, T - t, rule,
                                          traj.residue_evaluations, anm);
        const double h = rec.t_end - rec.t_start;
        u = rec.evaluate(rec.t_end);
        if (!detail::all_finite(u))
            throw NonFiniteCoefficient("integrator produced a non-finite state at t = " +
                                       std::to_string(rec.t_end));
        if (rec.fallback) ++traj.fallback_count;
        traj.records.push_back(std::move(rec));
        ++traj.step_count;
        t += h;
        dt_guess = h * cfg.step_growth;
    }
    traj.final_state = u;
    return traj;
}

/// Full Borel-Padé-Laplace integration of du/dt = F(t, u) over [0, T].
template <typename Scalar, SeriesProblem<Scalar> Problem>
Trajectory<Scalar> bpl_integrate(const Problem& problem, const Vector<Scalar>& u0, double T,
                                 const BplConfig& cfg) {
    return integrate_series_scheme(problem, u0, T, cfg, /*anm=*/false);
}

/// Truncated-series stepping without the summation stage.
template <typename Scalar, SeriesProblem<Scalar> Problem>
Trajectory<Scalar> anm_integrate(const Problem& problem, const Vector<Scalar>& u0, double T,
                                 const BplConfig& cfg) {
    return integrate_series_scheme(problem, u0, T, cfg, /*anm=*/true);
}

}  // namespace bpl
