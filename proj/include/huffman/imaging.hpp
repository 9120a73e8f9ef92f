#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "huffman/lattice.hpp"
#include "huffman/metrics.hpp"
#include "huffman/tensor.hpp"

namespace huff {

std::uint64_t splitmix64(std::uint64_t x);
// Generator for one Monte-Carlo trial: mt19937_64 seeded with splitmix64(seed + trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

// Uniform integers in [lo, hi].
Tensor random_integers(const Shape& shape, std::int64_t lo, std::int64_t hi, std::uint64_t seed);

// Full correlation object (x) mask. An impulse object returns flip(mask).
Tensor encode(const Tensor& object, const Tensor& mask);
// correlate(blurred, flip(mask)) without cropping.
Tensor decode_full(const Tensor& blurred, const Tensor& mask);
// decode_full, centrally cropped to the object extents (blurred - mask + 1).
// Not normalised: divide by C0 for the first estimate.
Tensor decode(const Tensor& blurred, const Tensor& mask);

struct DeblurOptions {
    int iterations = 2;             // p; 1 is plain decoding, 2 is one de-blur step
    bool snap_to_integers = false;  // round the final estimate
};

struct DeblurResult {
    Tensor estimate;               // O_p (rounded when snapping)
    Tensor raw;                    // O_p before snapping
    std::vector<double> steps;     // max |O_{k+1} - O_k|
    int iterations = 0;            // p actually reached
    bool diverged = false;
};

// O_1 = decode(I)/C0, O_{p+1} = O_1 - crop(O_p (x) C_off)/C0 with C_off the
// auto-correlation of the mask with its peak removed. Stops and flags when
// the step grows three times in a row.
DeblurResult deblur(const Tensor& blurred, const Tensor& mask, const DeblurOptions& options = {});

struct PedestalPair {
    Tensor I1;  // O (x) (H + kappa)
    Tensor I2;  // O (x) (-H + kappa)
    Tensor Ic;  // I1 - I2 = 2 O (x) H
};
// Requires kappa >= max|H|. Stays in integer mode when all inputs are integers.
PedestalPair pedestal_pair(const Tensor& object, const Tensor& mask, double kappa);

enum class KappaRule { exact, boundary };
std::string to_string(KappaRule r);
KappaRule parse_kappa_rule(const std::string& name);

struct GhostOptions {
    double kappa = 0;
    KappaRule rule = KappaRule::boundary;
    int iterations = 1;
    // Scan extents per axis, centred on the full scan. Empty means every
    // position where mask and object overlap.
    Shape scan;
};

struct GhostResult {
    Tensor bucket;          // one value per scan position, full-scan layout
    Tensor reconstruction;  // object frame, normalised by C0
    double kappa_prime = 0;
    KappaRule rule = KappaRule::boundary;
    bool partial = false;   // scan did not cover every overlap position
};

// Bucket B(s) = sum_r O(r) (H(r+s) + kappa), where the pedestal lights the
// whole object: B = encode(O, H) + kappa * sum(O). The decoded pedestal is
// the constant kappa' = kappa * sum(O) * sum(H) (exact rule) or the mean of
// the decoded bucket on the one-pixel border of the object frame (boundary
// rule).
GhostResult ghost_image(const Tensor& object, const Tensor& mask, const GhostOptions& options);

// Adds mark with its top-left corner at (host - mark)/2 + offset.
Tensor watermark_embed(const Tensor& host, const Tensor& mark, const std::vector<std::int64_t>& offset);

struct WatermarkHit {
    std::vector<std::int64_t> offset;
    double peak = 0;       // correlation of the mean-subtracted host with the mark
    double threshold = 0;  // C0 / 2 of the mark
    bool detected() const { return peak >= threshold; }
};
WatermarkHit watermark_locate(const Tensor& marked, const Tensor& mark);

struct Summary {
    double min = 0, mean = 0, max = 0;
};

struct BaselineStats {
    std::size_t trials = 0;
    std::size_t undefined = 0;  // trials where R or M is undefined
    Summary R, M;
    std::vector<QualityReport> reports;
};

// Arrays of the given shape filled with distinct integers drawn from [lo, hi].
BaselineStats random_baseline(const Shape& shape, std::int64_t lo, std::int64_t hi, std::size_t trials,
                              std::uint64_t seed, unsigned threads = 1, bool keep_reports = false);

struct NoiseStudy {
    double mse_delta = 0;
    double mse_diffuse = 0;
    double ratio = 0;
    double bias_mse = 0;       // noise-free reconstruction error of the diffuse path
    std::size_t elements = 0;  // mask element count
};

// Equal white noise sigma on every measurement. The mask is scaled so its
// elements have unit mean square, like a delta probe of unit brightness.
// The diffuse estimate is deblur with the given iteration count.
NoiseStudy multiplex_noise_study(const Tensor& object, const Tensor& mask, double sigma, std::size_t trials,
                                 std::uint64_t seed, unsigned threads = 1, int iterations = 8);

}  // namespace huff
