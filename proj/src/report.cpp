#include "lhpp/report.hpp"

#include <cstdio>
#include <sstream>

namespace lhpp {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, const std::string& label) {
    std::ostringstream os;
    if (!label.empty()) os << "# " << label << "\n";
    os << kSweepCsvHeader << "\n";
    for (const auto& r : rows)
        os << format_full(r.axis) << ',' << format_full(r.alpha_star) << ','
           << format_full(r.spread) << ',' << format_full(r.delta_re) << ','
           << format_full(r.pv01_re_bp) << "\n";
    return os.str();
}

}  // namespace lhpp
