#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "bpl/errors.hpp"
#include "bpl/stability.hpp"

namespace bpl::bench {

/// One benchmark row.  mean_error is the first-integral mean error for the
/// Lotka-Volterra runs, the time-integrated relative L2 error for KdV, and the
/// time-averaged relative error against the analytic solution for Dahlquist.
struct RunMetrics {
    std::string scheme;
    std::string problem;
    std::string status = "ok";  // ok | failed
    double mean_error = 0.0;
    double mean_step = 0.0;
    std::size_t step_count = 0;
    double wall_time = 0.0;
    double tolerance_used = 0.0;
    std::string note;
};

inline std::string format_full(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline const char* metrics_csv_header() {
    return "scheme,problem,status,mean_error,mean_step,step_count,wall_time,tolerance_used,note";
}

inline std::string metrics_csv_row(const RunMetrics& m) {
    std::ostringstream os;
    os << m.scheme << ',' << m.problem << ',' << m.status << ',' << format_full(m.mean_error)
       << ',' << format_full(m.mean_step) << ',' << m.step_count << ','
       << format_full(m.wall_time) << ',' << format_full(m.tolerance_used) << ',' << m.note;
    return os.str();
}

inline void write_metrics_csv(const std::string& path, const std::vector<RunMetrics>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open metrics file: " + path);
    out << metrics_csv_header() << '\n';
    for (const auto& m : rows) out << metrics_csv_row(m) << '\n';
}

/// Region CSV: header re,im,inside.
inline void write_region_csv(const std::string& path, const StabilityGrid& g) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open region file: " + path);
    out << "re,im,inside\n";
    for (std::size_t i = 0; i < g.resolution; ++i)
        for (std::size_t j = 0; j < g.resolution; ++j)
            out << format_full(g.re_at(i)) << ',' << format_full(g.im_at(j)) << ','
                << (g.mask[i][j] ? 1 : 0) << '\n';
}

/// Size CSV: header K,Ka,Kb,size.
struct SizeRow {
    std::size_t K, Ka, Kb;
    double size;
};

inline void write_sizes_csv(const std::string& path, const std::vector<SizeRow>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open sizes file: " + path);
    out << "K,Ka,Kb,size\n";
    for (const auto& r : rows)
        out << r.K << ',' << r.Ka << ',' << r.Kb << ',' << format_full(r.size) << '\n';
}

}  // namespace bpl::bench
