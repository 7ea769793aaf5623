#include "nogp/riemann_xi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nogp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExpUnderflow = 745.0; // exp(-x) underflows to 0 beyond this

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGlOrder = 16;
constexpr double kGlNode[kGlOrder] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGlWeight[kGlOrder] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

} // namespace

PhiResult phi(double t, int terms) {
    if (t < 0.0) throw Error("phi: t must be >= 0");
    if (terms < 1) throw Error("phi: terms must be >= 1");

    const double x = std::exp(t);
    const double front = 2.0 * kPi * std::exp(1.25 * t);

    double sum = 0.0;
    int last = 0;
    for (int n = 1; n <= terms; ++n) {
        const double expo = kPi * n * n * x;
        if (expo > kExpUnderflow) break;
        const double nn = static_cast<double>(n) * n;
        sum += (2.0 * kPi * x * nn - 3.0) * nn * std::exp(-expo);
        last = n;
    }

    PhiResult out;
    out.value = front * sum;

    // Tail after term `last` (or after `terms` when nothing underflowed):
    // a_n <= 2 pi x n^4 e^{-pi n^2 x}; with n = N + m, n^2 >= N^2 + 2N m and
    // (N + m)^4 <= N^4 16^m, the tail is dominated by a geometric series.
    const int nn0 = std::max(last, 1) + 1;
    const double expo0 = kPi * nn0 * static_cast<double>(nn0) * x;
    if (expo0 <= kExpUnderflow) {
        const double q = 16.0 * std::exp(-2.0 * kPi * nn0 * x);
        const double n4 = std::pow(static_cast<double>(nn0), 4);
        out.tail_bound = front * 2.0 * kPi * x * n4 * std::exp(-expo0) / (1.0 - q);
    }
    return out;
}

namespace {

// Bound on the dropped integral tail: Phi(t) <= 1.01 * 4 pi^2 e^{9t/4 - pi e^t}
// for t >= 1, and int_{tmax}^inf <= Phi_bound(tmax) / (pi e^{tmax} - 9/4).
double integral_tail_bound(double t_max) {
    const double x = std::exp(t_max);
    const double log_phi = std::log(1.01 * 4.0 * kPi * kPi) + 2.25 * t_max - kPi * x;
    const double log_tail = log_phi - std::log(kPi * x - 2.25);
    return log_tail < -700.0 ? 0.0 : std::exp(log_tail);
}

} // namespace

XiEvaluation xi(double e, const XiOptions& opts) {
    const double width = std::min(1.0, kPi / std::max(std::abs(e), 1.0));
    int panels = std::max(opts.min_panels, static_cast<int>(std::ceil(opts.t_max / width)));
    panels = std::min(panels, opts.max_panels);

    XiEvaluation out;
    out.e = e;
    out.series_terms = opts.series_terms;
    out.quad_panels = panels;
    out.t_max = opts.t_max;

    double total = 0.0;
    double series_tail = 0.0;
    double abs_accum = 0.0;
    const double h = opts.t_max / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        const double half = 0.5 * h;
        for (int k = 0; k < kGlOrder; ++k) {
            const double t = mid + half * kGlNode[k];
            const PhiResult f = phi(t, opts.series_terms);
            const double w = kGlWeight[k] * half;
            const double v = f.value * std::cos(0.5 * e * t);
            total += w * v;
            series_tail += w * f.tail_bound;
            abs_accum += std::abs(w * f.value);
        }
    }

    const double roundoff = 32.0 * std::numeric_limits<double>::epsilon() * abs_accum;
    out.value = total;
    out.err_bound = series_tail + integral_tail_bound(opts.t_max) + roundoff;
    if (out.err_bound > opts.tolerance)
        throw ToleranceNotMet("xi: err_bound " + std::to_string(out.err_bound) +
                              " exceeds tolerance at " + std::to_string(panels) + " panels");
    return out;
}

XiEvaluation xi(double e, double t_max, int panels, int terms) {
    XiOptions opts;
    opts.t_max = t_max;
    opts.min_panels = panels;
    opts.series_terms = terms;
    opts.tolerance = std::numeric_limits<double>::infinity();
    return xi(e, opts);
}

namespace {

double xi_value(double e, const XiOptions& opts) { return xi(e, opts).value; }

ZeroBracket refine_bracket(double lo, double hi, double flo, double tol,
                           const XiOptions& opts) {
    ZeroBracket out;
    out.tolerance = tol;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = xi_value(mid, opts);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    out.lo = lo;
    out.hi = hi;
    out.root = 0.5 * (lo + hi);
    return out;
}

} // namespace

ZeroScan find_zeros(double e_lo, double e_hi, double step, double tol, const XiOptions& opts) {
    if (e_lo > e_hi) throw Error("find_zeros: e_lo must be <= e_hi");
    if (step <= 0.0) throw Error("find_zeros: step must be > 0");
    if (tol <= 0.0) throw Error("find_zeros: tol must be > 0");

    ZeroScan out;
    if (e_lo == e_hi) return out;

    double a = e_lo;
    double fa = xi_value(a, opts);
    while (a < e_hi) {
        const double b = std::min(a + step, e_hi);
        const double fb = xi_value(b, opts);
        if ((fa < 0.0) != (fb < 0.0)) {
            // rescan at step/10 for multiple sign changes inside [a, b]
            int changes = 0;
            double sa = a;
            double fsa = fa;
            for (int k = 1; k <= 10; ++k) {
                const double sb = (k == 10) ? b : a + k * (b - a) / 10.0;
                const double fsb = (k == 10) ? fb : xi_value(sb, opts);
                if ((fsa < 0.0) != (fsb < 0.0)) {
                    ++changes;
                    out.brackets.push_back(refine_bracket(sa, sb, fsa, tol, opts));
                }
                sa = sb;
                fsa = fsb;
            }
            if (changes > 1) out.step_too_coarse = true;
        }
        a = b;
        fa = fb;
    }
    std::sort(out.brackets.begin(), out.brackets.end(),
              [](const ZeroBracket& x, const ZeroBracket& y) { return x.root < y.root; });
    return out;
}

} // namespace nogp
