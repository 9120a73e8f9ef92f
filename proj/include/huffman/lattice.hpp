#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "huffman/tensor.hpp"

namespace huff {

// A scalar that is exact when it came from integer data.
struct Number {
    bool exact = true;
    std::int64_t i = 0;
    double r = 0.0;

    static Number of(std::int64_t v) { return {true, v, static_cast<double>(v)}; }
    static Number of_real(double v) { return {false, 0, v}; }
    double value() const { return exact ? static_cast<double>(i) : r; }
};

// Full aperiodic correlation. values has extent Na+Nb-1 per axis; index j
// holds sum_r a(r + j - (Nb-1)) * b(r), so zero shift sits at Nb-1.
struct CorrelationResult {
    Tensor values;
    std::size_t centre = 0;        // flat index of zero shift
    Number peak;                   // value at zero shift
    std::optional<Number> edge;    // signed edge value; only when extents match
    Number off_peak_max;           // max |C| away from the centre
    Number op;                     // max |C| excluding centre and C_edge-valued edge cells
    std::vector<char> edge_mask;   // boundary cells of the overlap support (empty if no edge)
};

enum class Backend { automatic, direct, fft };

CorrelationResult correlate(const Tensor& a, const Tensor& b, Backend backend = Backend::automatic);
Tensor convolve(const Tensor& a, const Tensor& b, Backend backend = Backend::automatic);
Tensor flip(const Tensor& a);
Tensor outer_product(const std::vector<Tensor>& factors);

// |DFT| at the native size.
Tensor dft_magnitudes(const Tensor& a);

// Circular auto-correlation at the native size, via FFT (real output).
Tensor periodic_autocorrelation(const Tensor& a);

// Raw n-D DFT helpers (FFTW backed). Row-major complex data of the given shape.
std::vector<std::complex<double>> dft(const Shape& shape, std::vector<std::complex<double>> data, bool inverse);

}  // namespace huff
