#pragma once

#include <string>

#include "huffman/lattice.hpp"

namespace huff {

enum class Classification { canonical, quasi, other };

std::string to_string(Classification c);

struct QualityReport {
    double M = 0;           // merit factor
    bool M_infinite = false;
    double R = 0;           // peak to side-lobe ratio
    bool R_infinite = false;
    double E = 0;           // efficiency
    double P = 0;           // power
    double S = 0;           // spectral flatness
    Number C0;
    Number C_edge;          // magnitude; zero when the array has no edge cells
    Number OP;
    int bits = 1;
    Classification classification = Classification::other;

    std::string to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

// Metrics on an auto-correlation. Exact arithmetic first, one conversion at the end.
double merit_factor(const CorrelationResult& c, bool* infinite = nullptr);
double side_lobe_ratio(const CorrelationResult& c, bool* infinite = nullptr);

double efficiency(const Tensor& a);
double power(const Tensor& a);
// (max - min) / min of native-size DFT magnitudes; +inf if a bin vanishes.
double spectral_flatness(const Tensor& a);
// Grey levels needed: ceil(log2(max - min + 1)), at least 1.
int bits(const Tensor& a);

bool is_canonical(const CorrelationResult& c);
bool is_quasi(const CorrelationResult& c);

QualityReport classify(const Tensor& a);
QualityReport classify(const Tensor& a, const CorrelationResult& auto_corr);

// Metrics of a cross-correlation: the peak is the largest signed entry.
struct CrossMetrics {
    double peak = 0;
    double R = 0;
    double M = 0;
};
CrossMetrics cross_metrics(const CorrelationResult& c);

}  // namespace huff
