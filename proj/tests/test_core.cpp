#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "huffman/construct.hpp"
#include "huffman/error.hpp"
#include "huffman/lattice.hpp"
#include "huffman/metrics.hpp"
#include "huffman/tensor_io.hpp"

using namespace huff;

namespace {

// Brute-force 2D aperiodic correlation, independent of the library.
std::vector<std::vector<long long>> naive2(const std::vector<std::vector<long long>>& a,
                                           const std::vector<std::vector<long long>>& b)
{
    int ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
    std::vector<std::vector<long long>> out(ar + br - 1, std::vector<long long>(ac + bc - 1, 0));
    for (int i = 0; i < ar + br - 1; ++i)
        for (int j = 0; j < ac + bc - 1; ++j) {
            long long s = 0;
            for (int r = 0; r < br; ++r)
                for (int c = 0; c < bc; ++c) {
                    int x = r + i - (br - 1), y = c + j - (bc - 1);
                    if (x >= 0 && x < ar && y >= 0 && y < ac) s += a[x][y] * b[r][c];
                }
            out[i][j] = s;
        }
    return out;
}

Tensor to_tensor(const std::vector<std::vector<long long>>& m)
{
    std::vector<std::int64_t> v;
    for (auto& row : m) v.insert(v.end(), row.begin(), row.end());
    return Tensor::integers({m.size(), m[0].size()}, v);
}

}  // namespace

TEST_CASE("correlate matches brute force on random integer matrices")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ext(1, 6), val(-9, 9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<long long>> a(ext(rng), std::vector<long long>(ext(rng)));
        std::vector<std::vector<long long>> b(ext(rng), std::vector<long long>(ext(rng)));
        for (auto& r : a)
            for (auto& x : r) x = val(rng);
        for (auto& r : b)
            for (auto& x : r) x = val(rng);
        Tensor ta = to_tensor(a), tb = to_tensor(b);
        CHECK(correlate(ta, tb).values == to_tensor(naive2(a, b)));
        Tensor fft = correlate(ta.as_real(), tb.as_real(), Backend::fft).values;
        CHECK(max_abs_difference(fft, to_tensor(naive2(a, b)).as_real()) < 1e-9);
    }
}

TEST_CASE("convolve is correlation with the flipped kernel")
{
    Tensor a = Tensor::vector({1, 2, 3}), b = Tensor::vector({0, 1, 5});
    CHECK(convolve(a, b) == Tensor::vector({0, 1, 7, 13, 15}));
}

TEST_CASE("integer overflow is reported")
{
    Tensor big = Tensor::vector({INT64_MAX / 2, INT64_MAX / 2});
    CHECK_THROWS_AS(correlate(big, big), NumericalError);
}

TEST_CASE("fibonacci construction")
{
    CHECK(fibonacci_huffman(15, 2) == catalog("H15"));
    CHECK(fibonacci_huffman(7, 2) == catalog("H7"));
    CHECK(generalized_fibonacci(10, 1) == 55);
    CHECK(generalized_fibonacci(5, 2) == 29);
    CHECK(generalized_fibonacci(-4, 1) == -3);
    CHECK_THROWS_AS(fibonacci_huffman(9, 2), DomainError);
    CHECK_THROWS_AS(fibonacci_huffman(11, 3), DomainError);
    for (std::size_t N = 7; N <= 31; N += 4)
        for (std::int64_t b : {2, 4, 6}) {
            Tensor h = fibonacci_huffman(N, b);
            CorrelationResult c = correlate(h, h);
            CHECK(is_canonical(c));
            CHECK(std::llabs(c.edge->i) == 1);
        }
}

TEST_CASE("H15 autocorrelation and sum of squares")
{
    Tensor h = catalog("H15");
    CorrelationResult c = correlate(h, h);
    std::int64_t ss = 0;
    for (auto x : h.ints()) ss += x * x;
    CHECK(ss == 843);
    CHECK(c.peak.i == 843);
    const auto& v = c.values.ints();
    CHECK(v.front() == -1);
    CHECK(v.back() == -1);
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (i != c.centre) CHECK(v[i] == 0);
}

TEST_CASE("metric ground truth for H9 and H8")
{
    QualityReport r9 = classify(catalog("H9"));
    CHECK(r9.M == 1024.0);
    CHECK(r9.R == 64.0);
    CHECK(r9.classification == Classification::quasi);
    QualityReport r8 = classify(catalog("H8"));
    CHECK(r8.R == doctest::Approx(24.5));
    CHECK(r8.M == doctest::Approx(100.0).epsilon(0.001));
    CHECK(r8.S == doctest::Approx(0.167).epsilon(0.03));
}

TEST_CASE("h5 family")
{
    for (std::int64_t n = 1; n < 6; ++n) {
        CHECK(classify(h5_family(n)).classification == Classification::canonical);
        CHECK(classify(h5_family(n, true)).classification != Classification::other);
    }
    CHECK_THROWS_AS(h5_family(0), DomainError);
}

TEST_CASE("diamond5 families")
{
    auto sols = diamond5_solve();
    REQUIRE(sols.size() == 11);
    std::vector<std::pair<std::int64_t, std::int64_t>> de;
    for (auto& s : sols) de.emplace_back(s.alphabet[4], s.alphabet[5]);
    std::vector<std::pair<std::int64_t, std::int64_t>> expected{{24, 74}, {24, 75}, {25, 80}, {25, 81},
                                                                {26, 86}, {26, 87}, {27, 92}, {27, 93},
                                                                {28, 98}, {28, 99}, {28, 100}};
    CHECK(de == expected);
}

TEST_CASE("diamond7 e=1 is unique")
{
    auto sols = diamond7_solve({1, 1, 32, 4096, 65536});
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].alphabet == std::vector<std::int64_t>{0, 0, 0, 1, 1, 1, 2, 3});
}

TEST_CASE("diamond7 e=3 closed form rows")
{
    auto sols = diamond7_solve({3, 3, 20, 4096, 65536});
    CHECK(sols.size() == 66);
    for (auto& s : sols) {
        std::int64_t f = s.alphabet[5], g = s.alphabet[6], h = s.alphabet[7];
        if (s.closed_form) {
            CHECK(g == f * f / 2 + 1);
            CHECK(h == f * f * f / 8 + f);
        }
    }
}

TEST_CASE("catalog diamonds match the template")
{
    CHECK(build_diamond(7, {0, 0, 1, 2, 6, 7, 17, 20}, false) == catalog("D7A"));
    CHECK(build_diamond(7, {0, 0, 0, 1, 3, 6, 20, 36}) == catalog("D7B"));
    CHECK(build_diamond(5, {0, 1, 2, 4, 7, 13}) == catalog("D5S"));
}

TEST_CASE("spec text round trip")
{
    for (std::string text : {"family=fibonacci_binet N=15 b=2", "family=h5_family n=2 odd=0", "family=catalog key=H9",
                             "family=outer_product key=H9 dims=2", "family=diamond7 alphabet=0,0,0,1,3,20,201,1020"}) {
        HuffmanSpec s = HuffmanSpec::parse(text);
        CHECK(s.to_text() == text);
        CHECK(generate(HuffmanSpec::parse(s.to_text())) == generate(s));
    }
    CHECK_THROWS_AS(HuffmanSpec::parse("family=nope"), DomainError);
    CHECK_THROWS_AS(HuffmanSpec::parse("N=7"), DomainError);
}

TEST_CASE("tensor text io round trip")
{
    Tensor t = outer_product({catalog("H7"), catalog("H9")});
    std::stringstream ss;
    write_tensor(ss, t);
    CHECK(read_tensor(ss) == t);
    Tensor r = Tensor::reals({3}, {0.1, -2.5e-7, 3.0});
    std::stringstream s2;
    write_tensor(s2, r);
    CHECK(read_tensor(s2) == r);
}
