#include "nogp/zero_scanner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

#include "nogp/nogp_engine.hpp"
#include "json.hpp"

namespace nogp {

namespace {

constexpr const char* kVersion = "1.0.0";

int grid_size(const ScanConfig& cfg) {
    if (cfg.e_max <= cfg.e_min) return 0;
    return static_cast<int>(std::floor((cfg.e_max - cfg.e_min) / cfg.e_step + 1e-9)) + 1;
}

double grid_point(const ScanConfig& cfg, int i) { return cfg.e_min + i * cfg.e_step; }

} // namespace

void ScanConfig::validate() const {
    if (e_min > e_max) throw Error("scan: e_min must be <= e_max");
    if (e_step <= 0.0) throw Error("scan: e_step must be > 0");
    if (steps < 1) throw Error("scan: steps must be >= 1");
    if (cyc_tol <= 0.0 || gate_tol <= 0.0 || dip_fraction <= 0.0)
        throw Error("scan: tolerances must be > 0");
    if (workers < 1) throw Error("scan: workers must be >= 1");
    if (format != "csv" && format != "json") throw Error("scan: format must be csv or json");
}

DrivenHamiltonian build_floquet_hamiltonian_with_delta(double delta, const ThreeLevelParams& p) {
    DrivenHamiltonian base = build_hamiltonian(p);
    Matrix k = Matrix::Zero(3, 3);
    k(0, 1) = 1.0;
    k(1, 0) = 1.0;
    DrivenHamiltonian h;
    h.period = base.period;
    h.label = "floquet[" + pulse_shape_name(p.pulse.shape) + "]";
    h.eval = [delta, k, base](double t) { return Matrix(delta * k + base.sample(t)); };
    return h;
}

DrivenHamiltonian build_floquet_hamiltonian(double e, const ThreeLevelParams& p,
                                            const XiOptions& opts) {
    return build_floquet_hamiltonian_with_delta(xi(e, opts).value, p);
}

namespace {

struct PointContext {
    ThreeLevelParams params;
    SpectralDecomposition spec;
    Matrix g1_target;
};

PointContext make_context(const ScanConfig& cfg) {
    Pulse pulse{cfg.pulse, cfg.period};
    PointContext ctx{ThreeLevelParams::from_gate_angles(cfg.theta, cfg.vartheta, pulse),
                     spectral_decompose(default_observable()),
                     closed_form_g1(cfg.theta, cfg.vartheta)};
    return ctx;
}

// Gate diagnostics at a forced Delta value.
ScanRecord run_point(double e, double delta, const ScanConfig& cfg, const PointContext& ctx) {
    ScanRecord rec;
    rec.e = e;
    rec.delta = delta;
    try {
        const DrivenHamiltonian h = build_floquet_hamiltonian_with_delta(delta, ctx.params);
        const PropagatorGrid grid = evolve(h, cfg.steps);
        rec.cyc_residual = cyclicity_residual(grid, ctx.spec);

        const auto cs = transport_coefficients(h, ctx.spec, cfg.steps);
        std::vector<ParallelFrame> frames;
        for (int j = 0; j < ctx.spec.block_count(); ++j)
            frames.push_back(
                parallel_frame(grid, solve_transport(cs[static_cast<size_t>(j)]), ctx.spec, j));
        const NogpResult res = extract_phase(frames, ctx.spec);

        rec.gate_distance = max_abs(res.g(0) - ctx.g1_target);
        rec.g2_phase = std::arg(res.g(1)(0, 0));
        if (!res.cyclic && rec.status == "ok") rec.status = "not_cyclic";
    } catch (const std::exception& err) {
        rec.status = std::string("error: ") + err.what();
        rec.cyc_residual = 0.0;
        rec.gate_distance = 0.0;
        rec.g2_phase = 0.0;
    }
    return rec;
}

double delta_at(double e, const ScanConfig& cfg) {
    if (cfg.delta_override) return *cfg.delta_override;
    return xi(e, cfg.xi_options).value;
}

// One grid record; failures (including the xi evaluation) land in the
// status field so a sweep never aborts on a single point.
ScanRecord safe_point(double e, const ScanConfig& cfg, const PointContext& ctx) {
    double delta = 0.0;
    try {
        delta = delta_at(e, cfg);
    } catch (const std::exception& err) {
        ScanRecord rec;
        rec.e = e;
        rec.status = std::string("error: ") + err.what();
        return rec;
    }
    return run_point(e, delta, cfg, ctx);
}

double gate_at(double e, const ScanConfig& cfg, const PointContext& ctx) {
    return safe_point(e, cfg, ctx).gate_distance;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return (n % 2) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Golden-section minimization of the gate distance over [lo, hi].
std::pair<double, double> refine_dip(double lo, double hi, const ScanConfig& cfg,
                                     const PointContext& ctx) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = gate_at(x1, cfg, ctx);
    double f2 = gate_at(x2, cfg, ctx);
    while (b - a > 1e-6) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = gate_at(x1, cfg, ctx);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = gate_at(x2, cfg, ctx);
        }
    }
    const double e = 0.5 * (a + b);
    return {e, gate_at(e, cfg, ctx)};
}

} // namespace

ScanRecord scan_point(double e, const ScanConfig& cfg) {
    const PointContext ctx = make_context(cfg);
    return safe_point(e, cfg, ctx);
}

ScanResult scan(const ScanConfig& cfg) {
    cfg.validate();
    const PointContext ctx = make_context(cfg);
    const int n = grid_size(cfg);

    ScanResult result;
    result.config = cfg;
    result.records.resize(static_cast<size_t>(n));

    // phase 1: grid records, independent work items
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            result.records[static_cast<size_t>(i)] = safe_point(grid_point(cfg, i), cfg, ctx);
    };
    if (cfg.workers <= 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min(cfg.workers, n);
        pool.reserve(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // phase 2: NOGP dip detection. Candidates are interior local minima of
    // the gate distance passing both caps; each is refined off-grid and
    // confirmed against the local envelope median.
    for (int i = 1; i + 1 < n; ++i) {
        const ScanRecord& r = result.records[static_cast<size_t>(i)];
        if (r.status != "ok" && r.status != "not_cyclic") continue;
        if (r.gate_distance > cfg.gate_tol || r.cyc_residual > cfg.cyc_tol) continue;
        if (r.gate_distance >= result.records[static_cast<size_t>(i - 1)].gate_distance ||
            r.gate_distance >= result.records[static_cast<size_t>(i + 1)].gate_distance)
            continue;

        std::vector<double> window;
        for (int k = std::max(0, i - cfg.env_window); k <= std::min(n - 1, i + cfg.env_window);
             ++k)
            window.push_back(result.records[static_cast<size_t>(k)].gate_distance);
        const double envelope = median_of(std::move(window));

        const auto [e_star, gate_star] =
            refine_dip(grid_point(cfg, i) - cfg.e_step, grid_point(cfg, i) + cfg.e_step, cfg, ctx);
        if (gate_star > cfg.dip_fraction * envelope) continue;

        const int nearest =
            static_cast<int>(std::lround((e_star - cfg.e_min) / cfg.e_step));
        const int idx = std::clamp(nearest, 0, n - 1);
        result.records[static_cast<size_t>(idx)].zero_flag = true;
        result.detected.push_back({e_star, gate_star, envelope, idx});
    }
    std::sort(result.detected.begin(), result.detected.end(),
              [](const DetectedZero& a, const DetectedZero& b) { return a.e < b.e; });

    // cross-mark: direct xi sign-change brackets over the same range
    if (!cfg.delta_override && cfg.e_min < cfg.e_max) {
        try {
            result.brackets =
                find_zeros(cfg.e_min, cfg.e_max, cfg.e_step, 1e-8, cfg.xi_options).brackets;
        } catch (const Error&) {
            // per-record statuses already carry the xi failure
        }
    }

    return result;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string to_csv(const std::vector<ScanRecord>& records) {
    std::string out = "E,delta,cyc_residual,gate_distance,g2_phase,zero_flag,status\n";
    for (const ScanRecord& r : records) {
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';'); // keep rows parseable
        out += fmt17(r.e) + ',' + fmt17(r.delta) + ',' + fmt17(r.cyc_residual) + ',' +
               fmt17(r.gate_distance) + ',' + fmt17(r.g2_phase) + ',' +
               (r.zero_flag ? '1' : '0') + (',' + status) + '\n';
    }
    return out;
}

std::string to_json(const ScanResult& result) {
    using json = nlohmann::ordered_json;
    const ScanConfig& cfg = result.config;

    json meta;
    meta["version"] = kVersion;
    meta["config"] = {{"e_min", cfg.e_min},
                      {"e_max", cfg.e_max},
                      {"e_step", cfg.e_step},
                      {"pulse", pulse_shape_name(cfg.pulse)},
                      {"period", cfg.period},
                      {"theta", cfg.theta},
                      {"vartheta", cfg.vartheta},
                      {"steps", cfg.steps},
                      {"workers", cfg.workers}};
    meta["tolerances"] = {{"cyc_tol", cfg.cyc_tol},
                          {"gate_tol", cfg.gate_tol},
                          {"dip_fraction", cfg.dip_fraction},
                          {"env_window", cfg.env_window},
                          {"cluster_tolerance",
                           spectral_decompose(default_observable()).cluster_tolerance}};

    json detected = json::array();
    for (const DetectedZero& z : result.detected)
        detected.push_back({{"e", z.e},
                            {"gate_distance", z.gate_distance},
                            {"envelope", z.envelope},
                            {"record_index", z.record_index}});
    meta["detected_zeros"] = detected;

    json brackets = json::array();
    for (const ZeroBracket& b : result.brackets)
        brackets.push_back({{"lo", b.lo}, {"hi", b.hi}, {"root", b.root}});
    meta["xi_brackets"] = brackets;

    json records = json::array();
    for (const ScanRecord& r : result.records)
        records.push_back({{"E", r.e},
                           {"delta", r.delta},
                           {"cyc_residual", r.cyc_residual},
                           {"gate_distance", r.gate_distance},
                           {"g2_phase", r.g2_phase},
                           {"zero_flag", r.zero_flag},
                           {"status", r.status}});

    json root;
    root["metadata"] = meta;
    root["records"] = records;
    return root.dump(2) + "\n";
}

void emit(const ScanResult& result, const std::string& format, const std::string& path) {
    std::string payload;
    if (format == "csv")
        payload = to_csv(result.records);
    else if (format == "json")
        payload = to_json(result);
    else
        throw Error("emit: format must be csv or json");

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("emit: cannot open " + path);
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!f) throw IoError("emit: write failed for " + path);
}

} // namespace nogp
