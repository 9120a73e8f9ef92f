#pragma once

// Seeded property checks shared by the unit suite and the acceptance runner.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "huffman/construct.hpp"
#include "huffman/imaging.hpp"
#include "huffman/lattice.hpp"
#include "huffman/metrics.hpp"
#include "huffman/project.hpp"

namespace props {

using namespace huff;

struct Outcome {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;
};

inline Tensor random_tensor(std::mt19937_64& rng, std::size_t rank, std::size_t max_extent, std::int64_t span)
{
    std::uniform_int_distribution<std::size_t> ext(1, max_extent);
    std::uniform_int_distribution<std::int64_t> val(-span, span);
    Shape s(rank);
    for (auto& e : s) e = ext(rng);
    std::vector<std::int64_t> v(shape_size(s));
    for (auto& x : v) x = val(rng);
    return Tensor::integers(s, v);
}

inline void fail(Outcome& o, int c, const std::string& what)
{
    if (o.failures++ == 0) o.first_failure = "case " + std::to_string(c) + ": " + what;
}

// DFT of the zero-padded correlation equals A * conj(B).
inline Outcome correlation_theorem(int cases, std::uint64_t seed)
{
    Outcome o{"correlation theorem"};
    for (int c = 0; c < cases; ++c, ++o.cases) {
        auto rng = trial_rng(seed, c);
        std::size_t rank = 1 + c % 3;
        Tensor a = random_tensor(rng, rank, rank == 3 ? 4 : 9, 50);
        Tensor b = random_tensor(rng, rank, rank == 3 ? 4 : 9, 50);
        Tensor corr = correlate(a, b, Backend::direct).values;
        Shape L = corr.shape();
        auto pad = [&](const Tensor& t) {
            std::vector<std::complex<double>> z(shape_size(L));
            Tensor big = add_patch(Tensor::zeros(L, Mode::integer), t, Shape(rank, 0));
            for (std::size_t i = 0; i < z.size(); ++i) z[i] = big.value(i);
            return dft(L, z, false);
        };
        auto A = pad(a), B = pad(b);
        for (std::size_t i = 0; i < A.size(); ++i) A[i] *= std::conj(B[i]);
        auto circ = dft(L, A, true);
        double worst = 0, scale_ref = 1 + max_abs(corr);
        for (std::size_t j = 0; j < corr.size(); ++j) {
            auto idx = corr.unravel(j);
            for (std::size_t d = 0; d < rank; ++d) idx[d] = (idx[d] + L[d] - (b.extent(d) - 1)) % L[d];
            std::size_t k = corr.flat_index(idx);
            worst = std::max(worst, std::abs(circ[k] - std::complex<double>(corr.value(j), 0)));
        }
        if (worst > 1e-9 * scale_ref) fail(o, c, "spectral product differs by " + std::to_string(worst));
    }
    return o;
}

inline Outcome projection_commutation(int cases, std::uint64_t seed)
{
    Outcome o{"projection-correlation commutation"};
    for (int c = 0; c < cases; ++c, ++o.cases) {
        auto rng = trial_rng(seed, c);
        Tensor a = random_tensor(rng, 2, 8, 30);
        std::uniform_int_distribution<std::int64_t> pq(-3, 3);
        std::int64_t p, q;
        do {
            p = pq(rng);
            q = pq(rng);
        } while (std::gcd(p, q) != 1);
        ProjectionDirection d{p, q, std::nullopt};
        Tensor pa = project(a, d);
        if (project(correlate(a, a).values, d) != correlate(pa, pa).values) fail(o, c, "direction " + d.to_string());
        if (pa.size() != static_cast<std::size_t>(std::llabs(q) * (a.extent(1) - 1) + std::llabs(p) * (a.extent(0) - 1) + 1))
            fail(o, c, "length formula at " + d.to_string());
    }
    return o;
}

// F_{m+n} = F_m F_{n+1} + F_{m-1} F_n for the generalised recurrence.
inline Outcome fibonacci_identity(int cases, std::uint64_t seed)
{
    Outcome o{"bilinear Fibonacci identity"};
    for (int c = 0; c < cases; ++c, ++o.cases) {
        auto rng = trial_rng(seed, c);
        std::uniform_int_distribution<std::int64_t> mult(1, 4), idx(-12, 12);
        std::int64_t k = mult(rng), m = idx(rng), n = idx(rng);
        auto F = [&](std::int64_t i) { return generalized_fibonacci(i, k); };
        if (F(m + n) != F(m) * F(n + 1) + F(m - 1) * F(n))
            fail(o, c, "k=" + std::to_string(k) + " m=" + std::to_string(m) + " n=" + std::to_string(n));
    }
    return o;
}

inline Outcome fibonacci_canonical(int cases, std::uint64_t seed)
{
    Outcome o{"canonical classification of Fibonacci arrays"};
    for (int c = 0; c < cases; ++c, ++o.cases) {
        auto rng = trial_rng(seed, c);
        std::uniform_int_distribution<int> nn(1, 7), bb(1, 3);
        std::size_t N = 4 * nn(rng) + 3;
        std::int64_t b = 2 * bb(rng);
        Tensor h = fibonacci_huffman(N, b);
        QualityReport r = classify(h);
        if (r.classification != Classification::canonical || r.C_edge.i != 1 || r.R != r.C0.value())
            fail(o, c, "N=" + std::to_string(N) + " b=" + std::to_string(b));
    }
    return o;
}

inline Outcome metric_invariance(int cases, std::uint64_t seed)
{
    Outcome o{"metric invariance under flip and negation"};
    auto same = [](double x, double y) { return x == y || std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y)); };
    for (int c = 0; c < cases; ++c, ++o.cases) {
        auto rng = trial_rng(seed, c);
        Tensor a = random_tensor(rng, 1 + c % 2, 9, 20);
        if (max_abs(a) == 0) continue;
        QualityReport r = classify(a);
        for (const Tensor& t : {flip(a), negate(a)}) {
            QualityReport s = classify(t);
            bool ok = same(r.R, s.R) && same(r.M, s.M) && r.bits == s.bits && r.classification == s.classification &&
                      r.OP.i == s.OP.i && r.C_edge.i == s.C_edge.i && r.C0.i == s.C0.i &&
                      (r.S == s.S || std::fabs(r.S - s.S) <= 1e-9 * (1 + std::fabs(r.S)));
            if (!ok) fail(o, c, a.describe());
        }
    }
    return o;
}

inline std::vector<Outcome> run_all(int cases, std::uint64_t seed)
{
    return {correlation_theorem(cases, seed), projection_commutation(cases, seed + 1), fibonacci_identity(cases, seed + 2),
            fibonacci_canonical(cases, seed + 3), metric_invariance(cases, seed + 4)};
}

}  // namespace props
