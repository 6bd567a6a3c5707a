#pragma once

#include <string>

namespace accper {

enum class plot_kind {
    phase_curve,        // mean log Z / N vs alpha, theta overlay
    decay_rate,         // log survival / N vs N per alpha, theta reference lines
    critical_exponent,  // log-log survival vs N, fitted + reference slopes
    critical_window,    // survival vs N, one series per beta
    limit_law,          // empirical CDF vs exponential reference
};

plot_kind parse_plot_kind(const std::string& name);
std::string plot_kind_name(plot_kind kind);

// Renders `csv_path` (written by the corresponding experiment runner) as a
// standalone SVG next to it (extension replaced by .svg) and returns the SVG
// path. A CSV without data rows is an error and no file is written.
std::string emit_plot(const std::string& csv_path, plot_kind kind);

}  // namespace accper
