#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nogp/riemann_xi.hpp"
#include "nogp/three_level.hpp"

namespace nogp {

struct ScanConfig {
    double e_min = 10.0;
    double e_max = 30.0;
    double e_step = 0.25;
    PulseShape pulse = PulseShape::Constant;
    double period = 1.0;
    double theta = 1.5707963267948966;  // pi/2
    double vartheta = 0.0;
    int steps = 2000;

    // flagging thresholds (recorded in output metadata, calibrated defaults)
    double cyc_tol = 1e-4;
    double gate_tol = 1e-3;
    double dip_fraction = 0.1; // refined dip must sit this far under the envelope
    int env_window = 8;        // half-width (grid points) of the envelope median

    int workers = 1;
    std::string format = "csv";
    std::string out;

    std::optional<double> delta_override; // test hook: force Delta_E
    XiOptions xi_options;

    void validate() const;
};

struct ScanRecord {
    double e = 0.0;
    double delta = 0.0;         // Delta_E = xi(E)
    double cyc_residual = 0.0;
    double gate_distance = 0.0; // max-abs(G1 - closed_form_g1(theta, vartheta))
    double g2_phase = 0.0;      // arg(G2)
    bool zero_flag = false;
    std::string status = "ok";
};

// One confirmed dip of the gate signature, refined off-grid.
struct DetectedZero {
    double e = 0.0;             // refined dip location
    double gate_distance = 0.0; // gate distance at the refined location
    double envelope = 0.0;      // local envelope the dip was measured against
    int record_index = -1;      // flagged grid record
};

struct ScanResult {
    ScanConfig config;
    std::vector<ScanRecord> records;
    std::vector<DetectedZero> detected; // NOGP route, sorted by e
    std::vector<ZeroBracket> brackets;  // direct xi sign-change route
};

// H_E(t) = Delta (|0><1| + |1><0|) + Omega(t) (|2><b| + |b><2|)
DrivenHamiltonian build_floquet_hamiltonian_with_delta(double delta, const ThreeLevelParams& p);
DrivenHamiltonian build_floquet_hamiltonian(double e, const ThreeLevelParams& p,
                                            const XiOptions& opts = {});

// Gate diagnostics of one period of H_E at a single E (or forced Delta).
ScanRecord scan_point(double e, const ScanConfig& cfg);

// Full sweep: grid records, NOGP dip detection with off-grid refinement,
// and the independent xi sign-change brackets. Deterministic; per-record
// failures land in the record's status field.
ScanResult scan(const ScanConfig& cfg);

std::string to_csv(const std::vector<ScanRecord>& records);
std::string to_json(const ScanResult& result);

// Writes records in the requested format ("csv" | "json"). Throws IoError.
void emit(const ScanResult& result, const std::string& format, const std::string& path);

} // namespace nogp
