#pragma once

// Feature extraction on joint spectral densities and scaling fits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scissor/bwf_engine.hpp"

namespace scissor {

/// Widths of the JSD along the two diagonals through its peak, in units of
/// Delta and measured as arc length in the (nu1/Delta, nu2/Delta) plane.
/// fwhm1 runs along nu2 = nu1, fwhm2 along nu2 = -nu1.
struct FwhmReport {
    double fwhm1 = 0.0;
    double fwhm2 = 0.0;
    int peak_row = 0;
    int peak_col = 0;
};

namespace detail {

/// Bilinear interpolation of a row-major density in index coordinates.
/// Returns false outside the grid.
inline bool bilinear(const std::vector<double>& d, int rows, int cols, double r, double c,
                     double& out) {
    if (r < 0.0 || c < 0.0 || r > rows - 1 || c > cols - 1) return false;
    const int r0 = std::min(static_cast<int>(r), rows - 2);
    const int c0 = std::min(static_cast<int>(c), cols - 2);
    const double fr = r - r0, fc = c - c0;
    auto at = [&](int i, int j) { return d[std::size_t(i) * cols + j]; };
    out = (1 - fr) * ((1 - fc) * at(r0, c0) + fc * at(r0, c0 + 1)) +
          fr * ((1 - fc) * at(r0 + 1, c0) + fc * at(r0 + 1, c0 + 1));
    return true;
}

/// Distance (in index units along a unit direction) from the peak to the
/// half-maximum crossing, found by stepping then bisecting.
inline double half_max_distance(const std::vector<double>& d, int rows, int cols, int pr, int pc,
                                double dr, double dc, double half) {
    const double step = 0.125;
    double inside = 0.0;
    for (int k = 1;; ++k) {
        const double s = k * step;
        double v = 0.0;
        if (!bilinear(d, rows, cols, pr + s * dr, pc + s * dc, v))
            throw std::range_error("grid too small: half maximum not bracketed");
        if (v < half) {
            double lo = inside, hi = s;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                double vm = 0.0;
                bilinear(d, rows, cols, pr + mid * dr, pc + mid * dc, vm);
                (vm >= half ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        inside = s;
    }
}

}  // namespace detail

/// Diagonal FWHMs of a density sampled on a grid with equal spacing `h` on
/// both axes; `unit` converts index distance times h into the reported unit.
inline FwhmReport extract_fwhm(const std::vector<double>& density, int rows, int cols,
                               double h_over_unit) {
    if (rows < 3 || cols < 3 || density.size() != std::size_t(rows) * cols)
        throw std::invalid_argument("extract_fwhm: bad grid shape");
    const auto it = std::max_element(density.begin(), density.end());
    const auto k = static_cast<std::size_t>(it - density.begin());
    FwhmReport r;
    r.peak_row = static_cast<int>(k / cols);
    r.peak_col = static_cast<int>(k % cols);
    if (r.peak_row == 0 || r.peak_col == 0 || r.peak_row == rows - 1 || r.peak_col == cols - 1)
        throw std::range_error("grid too small: peak on the boundary");
    const double half = 0.5 * *it;
    const double u = 1.0 / std::sqrt(2.0);
    auto width = [&](double dr, double dc) {
        return detail::half_max_distance(density, rows, cols, r.peak_row, r.peak_col, dr, dc, half) +
               detail::half_max_distance(density, rows, cols, r.peak_row, r.peak_col, -dr, -dc, half);
    };
    r.fwhm1 = width(u, u) * h_over_unit;
    r.fwhm2 = width(u, -u) * h_over_unit;
    return r;
}

inline FwhmReport extract_fwhm(const BwfGrid& grid) {
    if (std::abs(grid.signal_axis.spacing() - grid.idler_axis.spacing()) >
        1e-12 * grid.signal_axis.spacing())
        throw std::invalid_argument("extract_fwhm: axes must share a spacing");
    std::vector<double> d(grid.amplitude.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::norm(grid.amplitude[k]);
    return extract_fwhm(d, grid.rows(), grid.cols(), grid.signal_axis.spacing() / grid.linewidth);
}

/// |beta|^2/|alpha|^4 against ring number for one pump.
struct EfficiencySeries {
    std::string pump;  // descriptor, e.g. "gaussian 1 ns"
    std::vector<int> rings;
    std::vector<double> efficiency;
    int window_min = 1;
    int window_max = 1;
    double exponent = 0.0;

    void validate() const {
        if (rings.size() != efficiency.size())
            throw std::invalid_argument("series: ring and efficiency counts differ");
        for (std::size_t i = 0; i < rings.size(); ++i) {
            if (i > 0 && rings[i] <= rings[i - 1])
                throw std::invalid_argument("series: N must be strictly increasing");
            if (!(efficiency[i] > 0.0)) throw std::invalid_argument("series: efficiency must be > 0");
        }
    }
};

/// Least-squares slope of log(efficiency) against log(N) for N in [n_min, n_max].
inline double fit_scaling_exponent(const EfficiencySeries& s, int n_min, int n_max) {
    s.validate();
    std::vector<double> x, y;
    for (std::size_t i = 0; i < s.rings.size(); ++i) {
        if (s.rings[i] < n_min || s.rings[i] > n_max) continue;
        x.push_back(std::log(static_cast<double>(s.rings[i])));
        y.push_back(std::log(s.efficiency[i]));
    }
    if (x.size() < 3) throw std::domain_error("scaling fit needs at least 3 points in the window");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0.0)) throw std::domain_error("scaling fit needs distinct N values");
    return sxy / sxx;
}

inline double fit_scaling_exponent(const EfficiencySeries& s) {
    return fit_scaling_exponent(s, s.window_min, s.window_max);
}

/// %.17g, the shortest fixed format that round-trips every double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_series_csv(const EfficiencySeries& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "rings,efficiency\n";
    for (std::size_t i = 0; i < s.rings.size(); ++i)
        out << s.rings[i] << ',' << format_double(s.efficiency[i]) << '\n';
}

/// Reads the first two columns of a series CSV written by write_series_csv.
inline EfficiencySeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    EfficiencySeries s;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        s.rings.push_back(std::stoi(a));
        s.efficiency.push_back(std::stod(b));
    }
    s.validate();
    return s;
}

}  // namespace scissor
