#pragma once

#include <vector>

#include "nogp/errors.hpp"

namespace nogp {

// One term family: Phi(t) = 2 pi e^{5t/4} sum_n (2 pi e^t n^2 - 3) n^2 e^{-pi n^2 e^t}.
// Every term is positive (2 pi e^t n^2 >= 2 pi > 3).
struct PhiResult {
    double value = 0.0;
    double tail_bound = 0.0; // rigorous bound on the dropped tail
};

// Partial sum to `terms` terms; terms whose exponent underflows are skipped.
PhiResult phi(double t, int terms);

struct XiOptions {
    double t_max = 12.0;   // integration cutoff; integrand ~ e^{-pi e^t} beyond
    int min_panels = 8;
    int max_panels = 8192;
    int series_terms = 64;
    double tolerance = 1e-10; // requested bound on err_bound
};

struct XiEvaluation {
    double e = 0.0;
    double value = 0.0;
    int series_terms = 0;
    int quad_panels = 0;
    double t_max = 0.0;
    double err_bound = 0.0; // series tail + integral tail + roundoff estimate
};

// Completed zeta on the critical line via Gauss-Legendre panel quadrature
// of the cosine transform of Phi. Panel width <= min(1, pi/|E|) resolves
// the oscillation. Throws ToleranceNotMet when err_bound stays above the
// requested tolerance at max_panels.
XiEvaluation xi(double e, const XiOptions& opts = {});
XiEvaluation xi(double e, double t_max, int panels, int terms);

struct ZeroBracket {
    double lo = 0.0;
    double hi = 0.0;
    double root = 0.0;
    double tolerance = 0.0;
};

struct ZeroScan {
    std::vector<ZeroBracket> brackets; // sorted by root, ascending
    bool step_too_coarse = false;      // a scan step held more than one sign change
};

// Scans xi on [e_lo, e_hi] with the given step, brackets sign changes,
// refines each bracket by bisection to |hi - lo| <= tol. Brackets holding
// multiple sign changes are split after a rescan at step/10.
ZeroScan find_zeros(double e_lo, double e_hi, double step, double tol,
                    const XiOptions& opts = {});

} // namespace nogp
