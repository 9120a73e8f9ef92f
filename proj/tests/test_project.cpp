#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "huffman/construct.hpp"
#include "huffman/error.hpp"
#include "huffman/lattice.hpp"
#include "huffman/project.hpp"

using namespace huff;

namespace {

// Independent oracle: bin every element by q*x - p*y with a std::map.
std::vector<std::int64_t> naive_project(const Tensor& a, std::int64_t p, std::int64_t q)
{
    std::map<std::int64_t, std::int64_t> bins;
    std::int64_t rows = a.extent(0), cols = a.extent(1);
    for (std::int64_t y = 0; y < rows; ++y)
        for (std::int64_t x = 0; x < cols; ++x) {
            bins[q * x - p * y] += a.ints()[y * cols + x];
        }
    std::int64_t lo = std::min<std::int64_t>(0, q * (cols - 1)) + std::min<std::int64_t>(0, -p * (rows - 1));
    std::int64_t hi = std::max<std::int64_t>(0, q * (cols - 1)) + std::max<std::int64_t>(0, -p * (rows - 1));
    std::vector<std::int64_t> out;
    for (std::int64_t t = lo; t <= hi; ++t) out.push_back(bins.count(t) ? bins[t] : 0);
    return out;
}

Tensor random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c)
{
    std::uniform_int_distribution<std::int64_t> v(-20, 20);
    std::vector<std::int64_t> d(r * c);
    for (auto& x : d) x = v(rng);
    return Tensor::integers({r, c}, d);
}

}  // namespace

TEST_CASE("directions")
{
    CHECK(ProjectionDirection::parse("1:-1").q == -1);
    CHECK(ProjectionDirection::parse("0:0:1").r.value() == 1);
    CHECK_THROWS_AS(ProjectionDirection::parse("2:4"), DomainError);
    CHECK_THROWS_AS(ProjectionDirection::parse("0:0"), DomainError);
    CHECK_THROWS_AS(ProjectionDirection::parse("1"), DomainError);
    auto dirs = default_directions(5);
    for (const auto& d : dirs) {
        CHECK(std::llabs(d.p) + std::llabs(d.q) <= 5);
        CHECK_NOTHROW(d.validate());
    }
    CHECK(dirs.size() == 20);
}

TEST_CASE("projection matches the binning oracle and the length formula")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + trial % 7;
        Tensor a = random_matrix(rng, n, n);
        for (std::int64_t p = -3; p <= 3; ++p)
            for (std::int64_t q = -3; q <= 3; ++q) {
                if (std::gcd(p, q) != 1) continue;
                Tensor t = project(a, {p, q, std::nullopt});
                CHECK(t.size() == static_cast<std::size_t>(std::llabs(p) + std::llabs(q)) * (n - 1) + 1);
                CHECK(t.ints() == naive_project(a, p, q));
                CHECK(sum(t) == sum(a));
            }
    }
}

TEST_CASE("diagonal projection of H7 x H7 is the auto-correlation")
{
    Tensor h = catalog("H7");
    Tensor a = outer_product({h, h});
    Tensor t = project(a, {1, 1, std::nullopt});
    CHECK(t == Tensor::vector({-1, 0, 0, 0, 0, 0, 18, 0, 0, 0, 0, 0, -1}));
    CHECK(t == correlate(h, h).values);
    // column sums recover the seed scaled by its sum
    Tensor cols = project(a, {0, 1, std::nullopt});
    CHECK(cols == scale(h, sum(h)).rounded());
}

TEST_CASE("p:q and q:p projections of a symmetric outer product are mirror images")
{
    Tensor h = catalog("H9");
    Tensor a = outer_product({h, h});
    for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}}) {
        Tensor pq = project(a, {p, q, std::nullopt});
        Tensor qp = project(a, {q, p, std::nullopt});
        CHECK(pq == flip(qp));
    }
}

TEST_CASE("projection commutes with auto-correlation")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        Tensor a = random_matrix(rng, 2 + trial % 5, 3 + trial % 4);
        for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {1, -1}, {1, 2}, {-2, 3}, {0, 1}, {1, 0}}) {
            ProjectionDirection d{p, q, std::nullopt};
            Tensor pa = project(a, d);
            CHECK(project(correlate(a, a).values, d) == correlate(pa, pa).values);
        }
    }
}

TEST_CASE("diagonal metric formulas for canonical seeds")
{
    for (std::size_t N : {7, 11, 15}) {
        Tensor h = fibonacci_huffman(N, 2);
        double c0 = correlate(h, h).peak.value();
        auto fam = spectrally_equivalent_family(h, {{1, 1, std::nullopt}, {1, -1, std::nullopt}, {1, 2, std::nullopt}});
        for (int i = 0; i < 2; ++i) {
            CHECK(fam[i].report.R == doctest::Approx((c0 * c0 + 2) / (2 * c0)));
            CHECK(fam[i].report.M == doctest::Approx((c0 * c0 + 2) * (c0 * c0 + 2) / (2 * (2 * c0) * (2 * c0) + 2)));
        }
        CHECK(fam[2].report.R == doctest::Approx(c0));
    }
}

TEST_CASE("3D projections")
{
    Tensor h = catalog("H7");
    Tensor cube = outer_product({h, h, h});
    CHECK(project3(cube, {0, 0, 1}) == scale(outer_product({h, h}), 4).rounded());
    Tensor ones = Tensor::integers({3, 3, 3}, std::vector<std::int64_t>(27, 1));
    Tensor p = project3(ones, {1, 1, 1});
    CHECK(sum(p) == 27);
    Tensor s = project3(cube, {1, 1, 0});
    CHECK(s.shape() == Shape{13, 7});
    CHECK(sum(s) == sum(cube));
    // (1:1:0) bins are u = x - y, v = z: the slice sums are C(u) * h(z)
    CHECK(s == outer_product({correlate(h, h).values, h}));
    CHECK_THROWS_AS(project3(cube, {2, 2, 0}), DomainError);
}

TEST_CASE("3D projection commutes with auto-correlation")
{
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> v(-5, 5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::int64_t> d(3 * 4 * 2);
        for (auto& x : d) x = v(rng);
        Tensor a = Tensor::integers({3, 4, 2}, d);
        for (ProjectionDirection dir : {ProjectionDirection{1, 1, 1}, ProjectionDirection{1, -2, 1},
                                        ProjectionDirection{0, 0, 1}, ProjectionDirection{2, 3, -1}}) {
            Tensor pa = project3(a, dir);
            CHECK(project3(correlate(a, a).values, dir) == correlate(pa, pa).values);
        }
    }
}

TEST_CASE("twins")
{
    Tensor h9 = catalog("H9");
    Tensor t9 = twin(h9);
    CHECK(t9 == Tensor::vector({1, -3, 4, -2, -2, 2, 4, 3, 1}));
    CHECK(twin(t9) == h9);
    CrossMetrics m = cross_metrics(correlate(h9, t9));
    CHECK(m.R == doctest::Approx(1.17).epsilon(0.01));
    CHECK(m.M == doctest::Approx(0.24).epsilon(0.02));
    for (const auto& key : {"H5", "H9", "H15"}) {
        CrossMetrics c = cross_metrics(correlate(catalog(key), twin(catalog(key))));
        CHECK(c.R < 2);
        CHECK(c.M < 1);
    }
    // H7 sits exactly on the boundary: cross peak 8 against a runner-up of 4.
    CrossMetrics c7 = cross_metrics(correlate(catalog("H7"), twin(catalog("H7"))));
    CHECK(c7.R == 2.0);
    CHECK(c7.M < 1);
    Tensor a = outer_product({h9, h9});
    Tensor t = twin(a);
    CHECK(twin(t) == a);
    CHECK(t.ints()[9] == -a.ints()[9]);
    CHECK(t.ints()[1] == a.ints()[1]);
}
