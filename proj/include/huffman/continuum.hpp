#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "huffman/metrics.hpp"
#include "huffman/tensor.hpp"

namespace huff {

// Ai(x). Maclaurin series in long double for |x| <= 8, asymptotic
// expansions beyond.
double airy_ai(double x);
Tensor airy(const std::vector<double>& x);

// Ai sampled at x_k = hi - k*step down to lo, returned in ascending x.
// Defaults: step 0.6 and lo = -(pi/step)^2, where the local wavenumber of
// Ai reaches the sampling Nyquist limit.
std::vector<double> airy_grid(double step = 0.6, double hi = 3.0);
std::vector<double> airy_grid(double step, double lo, double hi);

// Unimodular odd-phase probe. phase maps exponent tuples (one entry per
// axis) to coefficients: phi(k) = sum c * prod k_i^e_i.
struct ProbeSpec {
    int dims = 1;
    std::map<std::vector<int>, double> phase;
    std::vector<std::size_t> samples;  // per axis
    std::vector<double> step;          // per axis; frequencies are 2 pi m / (N step)
    double kappa = 0.0;                // pedestal added to the output

    void validate() const;
    std::string to_json() const;
    static ProbeSpec from_json(const std::string& text);
    // phi = tau k^3 on a 1D grid
    static ProbeSpec airy1d(std::size_t n, double step, double tau = 1.0 / 3.0);
};

// Real probe F^-1{exp(i phi)} (1/N-normalised inverse DFT, so a 1D Airy
// probe approximates step * Ai(x)), centred so x = 0 sits at floor(N/2)
// on each axis, plus kappa.
Tensor synthesize_probe(const ProbeSpec& spec);

struct DeltaReport {
    double periodic_off_peak = 0;   // max off-peak |C| / C0, circular
    double aperiodic_off_peak = 0;  // same for the full aperiodic correlation
    double spectral_flatness = 0;
};
DeltaReport verify_delta_correlation(const Tensor& h);

enum class Objective { merit, ratio };
Objective parse_objective(const std::string& name);

struct TweakResult {
    Tensor array;
    QualityReport report;
    int iterations = 0;        // accepted changes
    bool undefined = false;    // objective undefined (zero array)
    double scale = 1.0;        // factor applied before rounding
};

// Scale to target_bits grey levels, round, then greedy +-1 tweaking.
TweakResult discretize_and_tweak(const Tensor& h, int target_bits, Objective objective = Objective::merit,
                                 int max_iters = 500);

}  // namespace huff
