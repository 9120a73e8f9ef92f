#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "huffman/construct.hpp"
#include "huffman/error.hpp"
#include "huffman/imaging.hpp"
#include "huffman/lattice.hpp"

using namespace huff;

namespace {

Tensor h9x9() { return outer_product({catalog("H9"), catalog("H9")}); }

Tensor impulse(const Shape& s)
{
    Tensor t = Tensor::zeros(s, Mode::integer);
    std::vector<std::size_t> c(s.size());
    for (std::size_t d = 0; d < s.size(); ++d) c[d] = s[d] / 2;
    t.ints()[t.flat_index(c)] = 1;
    return t;
}

// Alias bound oracle: |O_1(r) - O(r)| <= sum_{s != 0} |C(s)| |O(r - s)| / C0.
Tensor alias_bound(const Tensor& object, const Tensor& mask)
{
    CorrelationResult c = correlate(mask, mask);
    Tensor absc = c.values.as_real();
    for (auto& x : absc.reals()) x = std::fabs(x);
    absc.reals()[c.centre] = 0;
    Tensor abso = object.as_real();
    for (auto& x : abso.reals()) x = std::fabs(x);
    Tensor b = crop_center(correlate(abso, absc).values, object.shape());
    return scale(b, 1.0 / c.peak.value());
}

}  // namespace

TEST_CASE("encode an impulse gives the flipped mask")
{
    Tensor h = h9x9();
    CHECK(encode(Tensor::integers({1, 1}, {1}), h) == flip(h));
    CHECK(encode(Tensor::vector({1}), catalog("H7")) == flip(catalog("H7")));
    CHECK_THROWS_AS(encode(Tensor::vector({1, 2}), h), DomainError);
}

TEST_CASE("decoding an impulse returns the auto-correlation")
{
    Tensor h = catalog("H9");
    Tensor d = Tensor::vector({1});
    CHECK(decode_full(encode(d, h), h) == correlate(h, h).values);
    CHECK(decode(encode(d, h), h) == Tensor::vector({64}));
}

TEST_CASE("first estimate error is within the alias bound")
{
    Tensor h = h9x9();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Tensor o = random_integers({31, 31}, 0, 255, seed);
        Tensor o1 = deblur(encode(o, h), h, {1, false}).estimate;
        Tensor bound = alias_bound(o, h);
        for (std::size_t i = 0; i < o.size(); ++i)
            CHECK(std::fabs(o1.reals()[i] - o.value(i)) <= bound.reals()[i] + 1e-9);
    }
}

TEST_CASE("deblur contracts geometrically")
{
    Tensor h = h9x9();
    CorrelationResult c = correlate(h, h);
    std::size_t nonzero = 0;
    for (std::size_t f = 0; f < c.values.size(); ++f) nonzero += f != c.centre && !c.values.is_zero(f);
    const double rate = c.off_peak_max.value() * nonzero / c.peak.value();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Tensor o = random_integers({31, 31}, 0, 255, 100 + seed);
        Tensor blurred = encode(o, h);
        double prev = max_abs_difference(deblur(blurred, h, {1, false}).estimate, o.as_real());
        for (int p = 2; p <= 5; ++p) {
            double err = max_abs_difference(deblur(blurred, h, {p, false}).estimate, o.as_real());
            CHECK(err <= prev * rate + 1e-9);
            CHECK(err < prev);
            prev = err;
        }
    }
}

TEST_CASE("deblur recovers integer objects after one step")
{
    Tensor h = h9x9();
    Tensor o = random_integers({31, 31}, 1, 30, 7);
    DeblurResult r = deblur(encode(o, h), h, {2, true});
    CHECK(r.estimate == o);
    CHECK(max_abs_difference(r.raw, o.as_real()) < 0.5);
    CHECK(r.iterations == 2);
    CHECK_FALSE(r.diverged);
}

TEST_CASE("delta mask is exact at every order")
{
    Tensor o = random_integers({9, 9}, -5, 5, 3);
    Tensor delta = Tensor::integers({1, 1}, {3});
    for (int p = 1; p <= 4; ++p) CHECK(max_abs_difference(deblur(encode(o, delta), delta, {p, false}).estimate, o.as_real()) < 1e-12);
}

TEST_CASE("divergence guard")
{
    // Flat mask: off-peak sum dwarfs the peak and the recursion blows up.
    Tensor m = Tensor::integers({5}, {1, 1, 1, 1, 1});
    Tensor o = random_integers({40}, 0, 9, 1);
    DeblurResult r = deblur(encode(o, m), m, {30, false});
    CHECK(r.diverged);
    CHECK(r.iterations < 30);
    CHECK_THROWS_AS(deblur(encode(o, m), m, {0, false}), DomainError);
}

TEST_CASE("pedestal pair identities")
{
    Tensor h = h9x9();
    Tensor o = random_integers({12, 12}, 0, 255, 2);
    for (double k : {16.0, 20.0, 100.0}) {
        PedestalPair p = pedestal_pair(o, h, k);
        CHECK(p.Ic.is_integer());
        CHECK(p.Ic == scale(encode(o, h), 2).rounded());
    }
    CHECK(pedestal_pair(o, h, 16.5).Ic.as_real() == pedestal_pair(o, h, 16).Ic.as_real());
    CHECK_THROWS_AS(pedestal_pair(o, h, 15), DomainError);
    // object of ones: interior of Ic is 2 * sum(H)
    Tensor ones = Tensor::integers({20, 20}, std::vector<std::int64_t>(400, 1));
    Tensor ic = pedestal_pair(ones, h, 16).Ic;
    Tensor interior = crop(ic, {8, 8}, {12, 12});
    for (std::size_t i = 0; i < interior.size(); ++i) CHECK(interior.ints()[i] == 2 * static_cast<std::int64_t>(sum(h)));
}

TEST_CASE("ghost imaging with the exact pedestal stays within the alias bound")
{
    Tensor h = h9x9();
    Tensor o = Tensor::zeros({31, 31}, Mode::integer);
    Tensor blob = random_integers({15, 15}, 0, 255, 4);
    o = add_patch(o, blob, {8, 8});
    GhostResult g = ghost_image(o, h, {max_abs(h), KappaRule::exact, 1, {}});
    CHECK(g.kappa_prime == doctest::Approx(max_abs(h) * sum(o) * sum(h)));
    Tensor bound = alias_bound(o, h);
    for (std::size_t i = 0; i < o.size(); ++i)
        CHECK(std::fabs(g.reconstruction.reals()[i] - o.value(i)) <= bound.reals()[i] + 1e-6);
    CHECK_FALSE(g.partial);

    GhostResult b = ghost_image(o, h, {max_abs(h), KappaRule::boundary, 1, {}});
    CHECK(max_abs_difference(b.reconstruction, o.as_real()) < 0.1 * max_abs(o));
    GhostResult b3 = ghost_image(o, h, {max_abs(h), KappaRule::boundary, 3, {}});
    CHECK(max_abs_difference(b3.reconstruction, o.as_real()) < max_abs_difference(b.reconstruction, o.as_real()));

    GhostResult part = ghost_image(o, h, {max_abs(h), KappaRule::exact, 1, {20, 20}});
    CHECK(part.partial);
    CHECK_THROWS_AS(ghost_image(o, h, {1.0, KappaRule::exact, 1, {}}), DomainError);
}

TEST_CASE("ghost image of a point")
{
    Tensor h = catalog("H9");
    Tensor o = impulse({21});
    GhostResult g = ghost_image(o, h, {4, KappaRule::exact, 1, {}});
    Tensor d = decode_full(add_scalar(g.bucket, -g.kappa_prime / sum(h)), h.as_real());
    CHECK(max_abs_difference(crop_center(d, {17}), correlate(h, h).values.as_real()) < 1e-9);
}

TEST_CASE("watermark embed and locate")
{
    Tensor h = h9x9();
    Tensor host = random_integers({31, 31}, 1, 30, 8);
    CHECK(watermark_locate(watermark_embed(host, h, {0, 0}), h).offset == std::vector<std::int64_t>{0, 0});
    for (std::int64_t dy = -3; dy <= 3; dy += 3)
        for (std::int64_t dx = -4; dx <= 4; dx += 4) {
            WatermarkHit hit = watermark_locate(watermark_embed(host, h, {dy, dx}), h);
            CHECK(hit.offset == std::vector<std::int64_t>{dy, dx});
            CHECK(hit.detected());
        }
    CHECK_THROWS_AS(watermark_embed(Tensor::zeros({5, 5}, Mode::integer), h, {0, 0}), DomainError);
    CHECK_THROWS_AS(watermark_embed(host, h, {20, 0}), DomainError);
}

TEST_CASE("random baseline")
{
    BaselineStats a = random_baseline({5, 5}, -12, 13, 500, 9, 1);
    BaselineStats b = random_baseline({5, 5}, -12, 13, 500, 9, 4);
    CHECK(a.R.mean == b.R.mean);
    CHECK(a.M.mean == b.M.mean);
    CHECK(a.R.min <= a.R.mean);
    CHECK(a.R.mean <= a.R.max);
    BaselineStats one = random_baseline({1, 1}, 0, 3, 10, 1);
    CHECK(one.undefined == 10);
    CHECK_THROWS_AS(random_baseline({5, 5}, 0, 10, 10, 1), DomainError);
    BaselineStats kept = random_baseline({3, 3}, 0, 8, 4, 1, 1, true);
    REQUIRE(kept.reports.size() == 4);
    // 0..8 without replacement: every draw is a permutation, so C0 is fixed
    for (const auto& r : kept.reports) CHECK(r.C0.i == 204);
}

TEST_CASE("noise study edge cases")
{
    Tensor o = random_integers({15, 15}, 0, 255, 1);
    Tensor delta = Tensor::integers({1, 1}, {1});
    NoiseStudy d = multiplex_noise_study(o, delta, 1.0, 200, 5);
    CHECK(d.ratio == doctest::Approx(1.0).epsilon(0.05));
    NoiseStudy tiny = multiplex_noise_study(o, h9x9(), 1e-9, 10, 5);
    CHECK(tiny.mse_delta < 1e-16);
    CHECK(tiny.mse_diffuse < 1e-16);
    CHECK_THROWS_AS(multiplex_noise_study(o, delta, 0.0, 10, 1), DomainError);
    NoiseStudy t1 = multiplex_noise_study(o, h9x9(), 1.0, 40, 2, 1);
    NoiseStudy t4 = multiplex_noise_study(o, h9x9(), 1.0, 40, 2, 4);
    CHECK(t1.ratio == t4.ratio);
}

TEST_CASE("decoding does not colour white noise")
{
    Tensor h = h9x9();
    const double s = spectral_flatness(h);
    const std::size_t n = 64;
    std::vector<double> power(n * n, 0.0);
    for (std::uint64_t t = 0; t < 100; ++t) {
        auto rng = trial_rng(77, t);
        std::normal_distribution<double> g;
        std::vector<double> v((n + 8) * (n + 8));
        for (auto& x : v) x = g(rng);
        Tensor d = decode(Tensor::reals({n + 8, n + 8}, v), h);
        std::vector<std::complex<double>> z(d.reals().begin(), d.reals().end());
        double mean = sum(d) / d.size();
        for (auto& x : z) x -= mean;
        z = dft({n, n}, z, false);
        for (std::size_t i = 0; i < z.size(); ++i) power[i] += std::norm(z[i]);
    }
    // bin the spectrum into 8x8 blocks, skipping the DC block
    std::vector<double> bins;
    for (std::size_t by = 0; by < 8; ++by)
        for (std::size_t bx = 0; bx < 8; ++bx) {
            double acc = 0;
            for (std::size_t y = by * 8; y < by * 8 + 8; ++y)
                for (std::size_t x = bx * 8; x < bx * 8 + 8; ++x)
                    if (x || y) acc += power[y * n + x];
            bins.push_back(acc);
        }
    double lo = *std::min_element(bins.begin(), bins.end()), hi = *std::max_element(bins.begin(), bins.end());
    CHECK(hi / lo <= (1 + s) * (1 + s) * 2);
}
