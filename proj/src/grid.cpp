#include "monofourier/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monofourier/errors.hpp"

namespace mfourier {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid1D::Grid1D(double anchor, double dx, std::size_t n_nodes)
    : anchor_(anchor), dx_(dx), n_(n_nodes) {
    if (!is_power_of_two(n_nodes) || n_nodes < 4)
        throw ConfigError("grid node count must be a power of two >= 4, got " +
                          std::to_string(n_nodes));
    if (!(dx > 0.0) || !std::isfinite(dx))
        throw ConfigError("grid spacing must be positive");
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = at(i);
    return out;
}

Grid1D build_grid(double x_min, double x_max, std::size_t n_nodes) {
    if (!(x_max > x_min)) throw ConfigError("grid span must be positive");
    if (!is_power_of_two(n_nodes) || n_nodes < 4)
        throw ConfigError("grid node count must be a power of two >= 4, got " +
                          std::to_string(n_nodes));
    const double dx = (x_max - x_min) / static_cast<double>(n_nodes);
    return Grid1D(0.5 * (x_min + x_max), dx, n_nodes);
}

FrequencyIndexing::FrequencyIndexing(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw ConfigError("transform length must be a power of two");
}

ComplexSpectrum::ComplexSpectrum(std::vector<Complex> values) : values_(std::move(values)) {
    if (!is_power_of_two(values_.size()))
        throw ConfigError("spectrum length must be a power of two");
}

ValueCurve::ValueCurve(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw ConfigError("value curve length does not match grid");
}

ValueCurve::ValueCurve(Grid1D g, double fill) : grid(g), values(g.size(), fill) {}

double ValueCurve::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ValueCurve::min() const { return *std::min_element(values.begin(), values.end()); }

} // namespace mfourier
