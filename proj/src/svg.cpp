#include "accper/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "accper/csv.hpp"

namespace accper {

plot_kind parse_plot_kind(const std::string& name) {
    if (name == "phase-curve" || name == "phase_curve") return plot_kind::phase_curve;
    if (name == "decay-rate" || name == "decay_rate") return plot_kind::decay_rate;
    if (name == "critical-exponent" || name == "critical_exponent")
        return plot_kind::critical_exponent;
    if (name == "critical-window" || name == "critical_window") return plot_kind::critical_window;
    if (name == "limit-law" || name == "limit_law") return plot_kind::limit_law;
    throw std::invalid_argument("unknown plot kind '" + name +
                                "' (expected phase-curve, decay-rate, critical-exponent, "
                                "critical-window or limit-law)");
}

std::string plot_kind_name(plot_kind kind) {
    switch (kind) {
        case plot_kind::phase_curve: return "phase-curve";
        case plot_kind::decay_rate: return "decay-rate";
        case plot_kind::critical_exponent: return "critical-exponent";
        case plot_kind::critical_window: return "critical-window";
        case plot_kind::limit_law: return "limit-law";
    }
    return "unknown";
}

namespace {

constexpr double width = 800.0, height = 560.0;
constexpr double ml = 80.0, mr = 30.0, mt = 50.0, mb = 60.0;

const char* palette[] = {"#1f6fb4", "#d1513a", "#3a9a4f", "#8a56b0", "#b58a2a", "#3aa0a0"};

std::string fmt_tick(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

std::string fmt_coord(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

struct series {
    std::vector<double> x, y;
    std::string color = palette[0];
    std::string label;
    std::string id;
    bool line = true;
    bool markers = true;
    bool dashed = false;
};

struct plot_frame {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    std::string title, xlabel, ylabel;
    std::vector<series> data;
    std::vector<std::string> annotations;  // raw <text> elements

    void fit_limits() {
        bool first = true;
        for (const auto& s : data)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                if (first) {
                    xmin = xmax = s.x[i];
                    ymin = ymax = s.y[i];
                    first = false;
                } else {
                    xmin = std::min(xmin, s.x[i]);
                    xmax = std::max(xmax, s.x[i]);
                    ymin = std::min(ymin, s.y[i]);
                    ymax = std::max(ymax, s.y[i]);
                }
            }
        if (first) throw std::runtime_error("plot has no finite data");
        auto pad = [](double& lo, double& hi) {
            double d = hi - lo;
            if (d <= 0) d = std::max(1.0, std::abs(hi));
            lo -= 0.06 * d;
            hi += 0.06 * d;
        };
        pad(xmin, xmax);
        pad(ymin, ymax);
    }

    double px(double x) const { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); }
    double py(double y) const { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); }

    void render(std::ostream& os) const {
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
           << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
        os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
        os << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
              "font-family=\"sans-serif\" font-size=\"17\">" << title << "</text>\n";
        // frame
        os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
           << "\" height=\"" << height - mt - mb
           << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        render_ticks(os);
        os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 14
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << xlabel
           << "</text>\n";
        os << "<text x=\"22\" y=\"" << (mt + height - mb) / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
              "transform=\"rotate(-90 22 " << (mt + height - mb) / 2 << ")\">" << ylabel
           << "</text>\n";
        double ly = mt + 18.0;
        for (const auto& s : data) {
            render_series(os, s);
            if (!s.label.empty()) {
                os << "<line x1=\"" << width - mr - 150 << "\" y1=\"" << ly << "\" x2=\""
                   << width - mr - 120 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
                   << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
                   << "/>\n";
                os << "<text x=\"" << width - mr - 112 << "\" y=\"" << ly + 4
                   << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
                ly += 18.0;
            }
        }
        for (const auto& a : annotations) os << a << "\n";
        os << "</svg>\n";
    }

    void render_ticks(std::ostream& os) const {
        auto ticks = [](double lo, double hi) {
            const double raw = (hi - lo) / 5.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            for (double m : {1.0, 2.0, 5.0, 10.0})
                if (mag * m >= raw) {
                    step = mag * m;
                    break;
                }
            std::vector<double> ts;
            for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step)
                ts.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
            return ts;
        };
        for (double t : ticks(xmin, xmax)) {
            const double x = px(t);
            os << "<line x1=\"" << fmt_coord(x) << "\" y1=\"" << height - mb << "\" x2=\""
               << fmt_coord(x) << "\" y2=\"" << height - mb + 5
               << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
            os << "<text x=\"" << fmt_coord(x) << "\" y=\"" << height - mb + 20
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
               << fmt_tick(t) << "</text>\n";
        }
        for (double t : ticks(ymin, ymax)) {
            const double y = py(t);
            os << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt_coord(y) << "\" x2=\"" << ml
               << "\" y2=\"" << fmt_coord(y) << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
            os << "<text x=\"" << ml - 9 << "\" y=\"" << fmt_coord(y + 4)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
               << fmt_tick(t) << "</text>\n";
        }
    }

    void render_series(std::ostream& os, const series& s) const {
        if (s.line && s.x.size() >= 2) {
            os << "<polyline";
            if (!s.id.empty()) os << " id=\"" << s.id << "\"";
            os << " fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
            if (s.dashed) os << " stroke-dasharray=\"6 4\"";
            os << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                if (i) os << ' ';
                os << fmt_coord(px(s.x[i])) << ',' << fmt_coord(py(s.y[i]));
            }
            os << "\"/>\n";
        }
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                os << "<circle cx=\"" << fmt_coord(px(s.x[i])) << "\" cy=\""
                   << fmt_coord(py(s.y[i])) << "\" r=\"3.2\" fill=\"" << s.color << "\"/>\n";
            }
    }
};

std::vector<double> column_values(const csv_table& t, const std::string& name) {
    const std::size_t c = csv_column(t, name);
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) out.push_back(parse_csv_double(t, r, c));
    return out;
}

double theta_of(double a) { return a * (1.0 - std::log(a)); }

plot_frame build_phase_curve(const csv_table& t) {
    plot_frame f;
    f.title = "Phase curve: mean log Z / N vs alpha";
    f.xlabel = "alpha";
    f.ylabel = "log Z / N";
    series pts;
    pts.x = column_values(t, "alpha");
    pts.y = column_values(t, "mean_log_z_over_n");
    pts.label = "empirical";
    pts.color = palette[0];
    f.data.push_back(pts);
    // theta overlay spans past e so the zero crossing at alpha = e is visible
    const double e = std::exp(1.0);
    double lo = *std::min_element(pts.x.begin(), pts.x.end());
    double hi = std::max(*std::max_element(pts.x.begin(), pts.x.end()), e + 0.1);
    series ov;
    ov.id = "theta-overlay";
    ov.color = palette[1];
    ov.label = "theta(alpha) = alpha(1 - log alpha)";
    ov.markers = false;
    for (int i = 0; i <= 240; ++i) {
        const double a = lo + (hi - lo) * i / 240.0;
        ov.x.push_back(a);
        ov.y.push_back(theta_of(a));
    }
    f.data.push_back(ov);
    f.fit_limits();
    if (f.ymin < 0.0 && f.ymax > 0.0) {
        series zero;
        zero.color = "#999999";
        zero.markers = false;
        zero.dashed = true;
        zero.x = {f.xmin, f.xmax};
        zero.y = {0.0, 0.0};
        f.data.push_back(zero);
    }
    return f;
}

plot_frame build_decay_rate(const csv_table& t) {
    plot_frame f;
    f.title = "Exponential decay rate: log survival / N";
    f.xlabel = "N";
    f.ylabel = "log p / N";
    const auto alphas = column_values(t, "alpha");
    const auto ns = column_values(t, "N");
    const auto vals = column_values(t, "log_survival_over_n");
    std::map<double, series> groups;
    std::size_t ci = 0;
    for (std::size_t r = 0; r < alphas.size(); ++r) {
        auto it = groups.find(alphas[r]);
        if (it == groups.end()) {
            series s;
            s.color = palette[ci++ % 6];
            s.label = "alpha = " + fmt_tick(alphas[r]);
            it = groups.emplace(alphas[r], std::move(s)).first;
        }
        it->second.x.push_back(ns[r]);
        it->second.y.push_back(vals[r]);
    }
    for (auto& [a, s] : groups) f.data.push_back(std::move(s));
    f.fit_limits();
    std::size_t gi = 0;
    for (const auto& [a, unused] : groups) {
        series ref;
        ref.id = "theta-reference-" + std::to_string(gi);
        ref.color = f.data[gi].color;
        ref.dashed = true;
        ref.markers = false;
        ref.x = {f.xmin, f.xmax};
        ref.y = {theta_of(a), theta_of(a)};
        f.data.push_back(ref);
        ++gi;
    }
    return f;
}

plot_frame build_critical_exponent(const csv_table& t) {
    plot_frame f;
    f.title = "Critical survival decay (log-log)";
    f.xlabel = "log10 N";
    f.ylabel = "log10 survival";
    const auto ns = column_values(t, "N");
    const auto ps = column_values(t, "survival");
    series pts;
    pts.label = "survival at k near e N";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        pts.x.push_back(std::log10(ns[i]));
        pts.y.push_back(std::log10(ps[i]));
    }
    f.data.push_back(pts);
    // least-squares line in log10-log10 coordinates
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        mx += pts.x[i];
        my += pts.y[i];
    }
    mx /= static_cast<double>(pts.x.size());
    my /= static_cast<double>(pts.x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        sxx += (pts.x[i] - mx) * (pts.x[i] - mx);
        sxy += (pts.x[i] - mx) * (pts.y[i] - my);
    }
    const double slope = sxy / sxx, icpt = my - slope * mx;
    const double x0 = pts.x.front(), x1 = pts.x.back();
    series fitline;
    fitline.id = "fit-line";
    fitline.color = palette[1];
    fitline.markers = false;
    fitline.label = "fit, slope = " + fmt_tick(slope);
    fitline.x = {x0, x1};
    fitline.y = {icpt + slope * x0, icpt + slope * x1};
    f.data.push_back(fitline);
    series ref;
    ref.id = "reference-slope";
    ref.color = palette[2];
    ref.markers = false;
    ref.dashed = true;
    ref.label = "slope -3/2 reference";
    ref.x = {x0, x1};
    ref.y = {pts.y.front(), pts.y.front() - 1.5 * (x1 - x0)};
    f.data.push_back(ref);
    f.annotations.push_back("<text id=\"slope-annotation\" x=\"" + fmt_coord(ml + 14) +
                            "\" y=\"" + fmt_coord(mt + 20) +
                            "\" font-family=\"sans-serif\" font-size=\"14\">fitted slope = " +
                            fmt_tick(slope) + "</text>");
    f.fit_limits();
    return f;
}

plot_frame build_critical_window(const csv_table& t) {
    plot_frame f;
    f.title = "Critical window: survival at k = round(e N - beta log N)";
    f.xlabel = "N";
    f.ylabel = "survival";
    const auto betas = column_values(t, "beta");
    const auto ns = column_values(t, "N");
    const auto ps = column_values(t, "survival");
    std::map<double, series> groups;
    std::size_t ci = 0;
    for (std::size_t r = 0; r < betas.size(); ++r) {
        auto it = groups.find(betas[r]);
        if (it == groups.end()) {
            series s;
            s.color = palette[ci % 6];
            s.id = "window-beta-" + std::to_string(ci);
            s.label = "beta = " + fmt_tick(betas[r]);
            ++ci;
            it = groups.emplace(betas[r], std::move(s)).first;
        }
        it->second.x.push_back(ns[r]);
        it->second.y.push_back(ps[r]);
    }
    for (auto& [b, s] : groups) f.data.push_back(std::move(s));
    f.fit_limits();
    return f;
}

plot_frame build_limit_law(const csv_table& t) {
    plot_frame f;
    f.title = "Limit law: empirical CDF of Z/m vs exponential reference";
    f.xlabel = "z / m";
    f.ylabel = "CDF";
    auto zs = column_values(t, "z_over_m");
    const auto lambdas = column_values(t, "lambda");
    if (zs.empty()) throw std::runtime_error("plot has no finite data");
    const double lambda = lambdas.front();
    std::sort(zs.begin(), zs.end());
    series emp;
    emp.label = "empirical CDF";
    emp.markers = false;
    const double n = static_cast<double>(zs.size());
    emp.x.push_back(zs.front());
    emp.y.push_back(0.0);
    for (std::size_t i = 0; i < zs.size(); ++i) {  // CDF steps
        emp.x.push_back(zs[i]);
        emp.y.push_back(static_cast<double>(i) / n);
        emp.x.push_back(zs[i]);
        emp.y.push_back(static_cast<double>(i + 1) / n);
    }
    f.data.push_back(emp);
    const double rate = std::exp(lambda);  // exponential with mean e^{-lambda}
    series ref;
    ref.id = "exp-cdf-reference";
    ref.color = palette[1];
    ref.markers = false;
    ref.dashed = true;
    ref.label = "Exp CDF, mean exp(-lambda)";
    const double hi = zs.back();
    for (int i = 0; i <= 240; ++i) {
        const double z = hi * i / 240.0;
        ref.x.push_back(z);
        ref.y.push_back(-std::expm1(-rate * z));
    }
    f.data.push_back(ref);
    f.fit_limits();
    return f;
}

}  // namespace

std::string emit_plot(const std::string& csv_path, plot_kind kind) {
    const csv_table t = read_csv(csv_path);
    if (t.rows.empty())
        throw std::runtime_error("emit_plot: " + csv_path + " has no data rows; no plot written");
    plot_frame f;
    switch (kind) {
        case plot_kind::phase_curve: f = build_phase_curve(t); break;
        case plot_kind::decay_rate: f = build_decay_rate(t); break;
        case plot_kind::critical_exponent: f = build_critical_exponent(t); break;
        case plot_kind::critical_window: f = build_critical_window(t); break;
        case plot_kind::limit_law: f = build_limit_law(t); break;
    }
    std::string svg_path = csv_path;
    const std::size_t dot = svg_path.find_last_of('.');
    const std::size_t slash = svg_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        svg_path.resize(dot);
    svg_path += ".svg";
    std::ostringstream body;
    f.render(body);
    std::ofstream os(svg_path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_plot: cannot open " + svg_path);
    os << body.str();
    os.flush();
    if (!os) throw std::runtime_error("emit_plot: write failure on " + svg_path);
    return svg_path;
}

}  // namespace accper
