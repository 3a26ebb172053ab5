#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bpl/detail/algebra.hpp"
#include "bpl/errors.hpp"

namespace bpl::reference {

struct AdaptiveConfig {
    double tol = 1e-8;          // local error tolerance (relative estimate)
    double dt_init = 1e-3;
    double dt_min = 1e-12;
    double dt_max = 1e30;
    double safety = 0.9;
    double newton_tol = 1e-12;
    std::size_t newton_max_iters = 30;
    double fixed_dt = 0.0;      // > 0 disables error control (order studies)
    std::size_t max_steps = 50'000'000;
    double divergence_factor = 1e8;  // blow-up bound relative to max(1, |u0|)

    void validate() const {
        if (!(tol > 0)) throw DomainError("AdaptiveConfig: tol must be positive");
        if (!(dt_min <= dt_init && dt_init <= dt_max))
            throw DomainError("AdaptiveConfig: need dt_min <= dt_init <= dt_max");
    }
};

/// Discrete solution record of a reference scheme.  Nodes may be decimated on
/// very long runs; step statistics always count every accepted step.
template <typename Scalar>
struct SolveRecord {
    std::vector<double> times;
    std::vector<Vector<Scalar>> states;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;

    const Vector<Scalar>& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

namespace detail {

constexpr std::size_t kMaxStoredNodes = 300'000;

template <typename Scalar>
class RecordBuilder {
  public:
    explicit RecordBuilder(SolveRecord<Scalar>& rec) : rec_(rec) {}

    void push(double t, const Vector<Scalar>& u) {
        if (++count_ % stride_ == 0) {
            rec_.times.push_back(t);
            rec_.states.push_back(u);
            if (rec_.times.size() > kMaxStoredNodes) decimate();
        }
        last_t_ = t;
        last_u_ = u;
    }

    void finish() {
        if (rec_.times.empty() || rec_.times.back() != last_t_) {
            rec_.times.push_back(last_t_);
            rec_.states.push_back(last_u_);
        }
    }

  private:
    void decimate() {
        std::size_t w = 0;
        for (std::size_t r = 0; r < rec_.times.size(); r += 2, ++w) {
            rec_.times[w] = rec_.times[r];
            rec_.states[w] = std::move(rec_.states[r]);
        }
        rec_.times.resize(w);
        rec_.states.resize(w);
        stride_ *= 2;
    }

    SolveRecord<Scalar>& rec_;
    std::size_t stride_ = 1;
    std::size_t count_ = 0;
    double last_t_ = 0.0;
    Vector<Scalar> last_u_;
};

}  // namespace detail

/// Cubic Hermite interpolation between the stored nodes bracketing t, with
/// slopes from the problem RHS.  Exact at the nodes.
template <typename Scalar, typename Problem>
Vector<Scalar> sample_record(const Problem& problem, const SolveRecord<Scalar>& rec, double t) {
    if (rec.times.empty()) throw OutOfRange("sample_record: empty record");
    if (t <= rec.times.front()) return rec.states.front();
    if (t >= rec.times.back()) return rec.states.back();
    const auto it = std::upper_bound(rec.times.begin(), rec.times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - rec.times.begin());
    const std::size_t lo = hi - 1;
    const double h = rec.times[hi] - rec.times[lo];
    const double th = (t - rec.times[lo]) / h;
    const Vector<Scalar>& u0 = rec.states[lo];
    const Vector<Scalar>& u1 = rec.states[hi];
    const Vector<Scalar> f0 = problem.rhs(rec.times[lo], u0);
    const Vector<Scalar> f1 = problem.rhs(rec.times[hi], u1);
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    Vector<Scalar> out(u0.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = h00 * u0[j] + h01 * u1[j] + (h10 * f0[j] + h11 * f1[j]) * h;
    return out;
}

namespace detail {

inline double clamp_factor(double fac) { return std::min(5.0, std::max(0.2, fac)); }

template <typename Scalar>
void check_divergence(const Vector<Scalar>& u, double bound, double t) {
    if (!bpl::detail::all_finite(u) || bpl::detail::norm2(u) > bound)
        throw Divergence("state diverged at t = " + std::to_string(t));
}

}  // namespace detail

}  // namespace bpl::reference
