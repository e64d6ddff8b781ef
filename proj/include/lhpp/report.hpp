#pragma once

#include <string>
#include <vector>

namespace lhpp {

/// Shortest round-trip decimal representation (17 significant digits).
std::string format_full(double x);

/// One row of a Figure-style sweep.
struct SweepRow {
    double axis = 0.0;
    double alpha_star = 0.0;
    double spread = 0.0;       // decimal per-year rate
    double delta_re = 0.0;
    double pv01_re_bp = 0.0;   // basis points
};

inline constexpr const char* kSweepCsvHeader = "axis,alpha_star,spread,delta_re,pv01_re_bp";

/// A sweep block: optional label comment, one header line, full-precision rows.
std::string sweep_to_csv(const std::vector<SweepRow>& rows, const std::string& label = "");

}  // namespace lhpp
