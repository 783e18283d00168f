#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace auif {

/// One named buffer participating in a finite-difference check: `values` are
/// perturbed in place, `analytic` holds the gradient the implementation
/// produced for them.
struct CheckSlot {
    std::string name;
    double* values;
    const double* analytic;
    size_t count;
};

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_slot;
    size_t worst_index = 0;
    double worst_analytic = 0.0, worst_numeric = 0.0;
    bool analytic_finite = true;
    std::string failure;

    bool pass(double tol) const { return analytic_finite && max_rel_err <= tol; }
};

inline constexpr double kFdEpsilon = 1e-6;

/// Compares each analytic gradient entry against a central finite difference
/// of `eval`. Relative error uses a small floor so structurally-zero
/// gradients are held to an absolute bound instead of a 0/0 ratio.
inline GradCheckReport check_gradients(const std::function<double()>& eval,
                                       const std::vector<CheckSlot>& slots,
                                       double eps = kFdEpsilon) {
    GradCheckReport rep;
    for (const auto& slot : slots) {
        for (size_t i = 0; i < slot.count; ++i) {
            double a = slot.analytic[i];
            if (!std::isfinite(a)) {
                rep.analytic_finite = false;
                rep.failure = "non-finite analytic gradient at " + slot.name + "[" +
                              std::to_string(i) + "]";
                return rep;
            }
            const double saved = slot.values[i];
            slot.values[i] = saved + eps;
            const double f1 = eval();
            slot.values[i] = saved - eps;
            const double f0 = eval();
            slot.values[i] = saved;
            const double n = (f1 - f0) / (2.0 * eps);
            const double denom = std::max({std::fabs(a), std::fabs(n), 1e-4});
            const double rel = std::fabs(a - n) / denom;
            if (rel > rep.max_rel_err) {
                rep.max_rel_err = rel;
                rep.worst_slot = slot.name;
                rep.worst_index = i;
                rep.worst_analytic = a;
                rep.worst_numeric = n;
            }
        }
    }
    return rep;
}

/// One entry of the standard check suite (CLI `gradcheck`, acceptance).
struct OpCheck {
    std::string op;
    GradCheckReport report;
    double tolerance;
    bool pass() const { return report.pass(tolerance); }
};

/// Runs finite-difference checks for every primitive, a full BCL and DCL
/// step, the decoder path, and the total loss, across `seeds` seeds each.
/// `tol_scale` scales the built-in per-op tolerances (1 keeps 1e-5 for
/// primitives and 1e-4 for composites).
std::vector<OpCheck> run_gradcheck_suite(int seeds = 5, double tol_scale = 1.0);

}  // namespace auif
