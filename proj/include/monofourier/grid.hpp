#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mfourier {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n);

/**
 * Uniform periodic log-price grid.
 *
 * Nodes are x_j = anchor + j*dx for signed j in [-N/2, N/2-1]. Storage is
 * ascending in x, so storage index i corresponds to j = i - N/2 and node 0 of
 * storage sits exactly on x_min. The period is P = N*dx = x_max - x_min.
 */
class Grid1D {
public:
    Grid1D(double anchor, double dx, std::size_t n_nodes);

    double anchor() const { return anchor_; }
    double dx() const { return dx_; }
    std::size_t size() const { return n_; }
    double period() const { return static_cast<double>(n_) * dx_; }
    double x_min() const { return anchor_ - 0.5 * period(); }
    double x_max() const { return anchor_ + 0.5 * period(); }

    /// Node at signed index j.
    double node(std::ptrdiff_t j) const { return anchor_ + static_cast<double>(j) * dx_; }
    /// Node at ascending storage index i.
    double at(std::size_t i) const { return node(signed_index(i)); }
    std::ptrdiff_t signed_index(std::size_t i) const {
        return static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(n_ / 2);
    }
    std::size_t storage_index(std::ptrdiff_t j) const {
        return static_cast<std::size_t>(j + static_cast<std::ptrdiff_t>(n_ / 2));
    }
    /// omega_k = k / P.
    double frequency(std::ptrdiff_t k) const { return static_cast<double>(k) / period(); }

    std::vector<double> nodes() const;

    bool operator==(const Grid1D&) const = default;

private:
    double anchor_;
    double dx_;
    std::size_t n_;
};

/// Grid with anchor at the midpoint of [x_min, x_max] and dx = (x_max - x_min)/n.
Grid1D build_grid(double x_min, double x_max, std::size_t n_nodes);

/**
 * Maps signed frequency index k in [-N/2, N/2-1] to the storage slot of a
 * standard 0..N-1 transform (slot = k mod N) and back. No other code should
 * reason about spectrum ordering.
 */
class FrequencyIndexing {
public:
    explicit FrequencyIndexing(std::size_t n);

    std::size_t size() const { return n_; }
    std::ptrdiff_t signed_index(std::size_t slot) const {
        return slot < n_ / 2 ? static_cast<std::ptrdiff_t>(slot)
                             : static_cast<std::ptrdiff_t>(slot) - static_cast<std::ptrdiff_t>(n_);
    }
    std::size_t slot(std::ptrdiff_t k) const {
        const auto n = static_cast<std::ptrdiff_t>(n_);
        return static_cast<std::size_t>(((k % n) + n) % n);
    }

private:
    std::size_t n_;
};

/// Complex amplitudes stored in transform order; index with a signed k via at().
class ComplexSpectrum {
public:
    ComplexSpectrum() = default;
    explicit ComplexSpectrum(std::vector<Complex> values);

    std::size_t size() const { return values_.size(); }
    FrequencyIndexing indexing() const { return FrequencyIndexing(values_.size()); }

    Complex& operator[](std::size_t slot) { return values_[slot]; }
    const Complex& operator[](std::size_t slot) const { return values_[slot]; }
    const Complex& at(std::ptrdiff_t k) const { return values_[indexing().slot(k)]; }

    std::span<const Complex> slots() const { return values_; }
    std::span<Complex> slots() { return values_; }

private:
    std::vector<Complex> values_;
};

/// Discrete value function on a 1-D grid, ascending storage.
struct ValueCurve {
    Grid1D grid;
    std::vector<double> values;

    ValueCurve(Grid1D g, std::vector<double> v);
    ValueCurve(Grid1D g, double fill);

    template <typename F>
    static ValueCurve sample(const Grid1D& g, F&& f) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.at(i));
        return ValueCurve(g, std::move(v));
    }

    double max_abs() const;
    double min() const;
};

} // namespace mfourier
