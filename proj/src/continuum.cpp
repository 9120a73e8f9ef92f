#include "huffman/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "huffman/error.hpp"
#include "huffman/lattice.hpp"

namespace huff {

namespace {

using ld = long double;

constexpr ld kAi0 = 0.355028053887817239260L;   // Ai(0)
constexpr ld kAi0p = 0.258819403792806798405L;  // -Ai'(0)
constexpr ld kPi = std::numbers::pi_v<long double>;

ld airy_series(ld x)
{
    const ld x3 = x * x * x;
    ld f = 1, g = x, t = 1, u = x;
    for (int k = 1; k < 400; ++k) {
        t *= x3 / ((3 * k - 1) * (3 * k));
        u *= x3 / ((3 * k) * (3 * k + 1));
        f += t;
        g += u;
        if (std::fabs(t) + std::fabs(u) < 1e-30L * (std::fabs(f) + std::fabs(g))) break;
    }
    return kAi0 * f - kAi0p * g;
}

// Coefficients u_k of the asymptotic expansions, until they stop shrinking against zeta^k.
std::vector<ld> asymptotic_terms(ld zeta)
{
    std::vector<ld> terms{1};
    ld u = 1;
    for (int k = 1; k < 200; ++k) {
        u *= static_cast<ld>((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / ((2 * k - 1) * 216.0L * k);
        ld term = u / std::pow(zeta, static_cast<ld>(k));
        if (term >= terms.back() || term < 1e-24L) break;
        terms.push_back(term);
    }
    return terms;
}

ld airy_asymptotic(ld x)
{
    if (x > 0) {
        ld zeta = 2.0L / 3.0L * std::pow(x, 1.5L);
        auto t = asymptotic_terms(zeta);
        ld s = 0;
        for (std::size_t k = 0; k < t.size(); ++k) s += (k % 2 ? -t[k] : t[k]);
        return std::exp(-zeta) / (2 * std::sqrt(kPi) * std::pow(x, 0.25L)) * s;
    }
    ld ax = -x;
    ld zeta = 2.0L / 3.0L * std::pow(ax, 1.5L);
    auto t = asymptotic_terms(zeta);
    ld even = 0, odd = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        ld sgn = (k / 2) % 2 ? -1 : 1;
        if (k % 2)
            odd += sgn * t[k];
        else
            even += sgn * t[k];
    }
    ld arg = zeta + kPi / 4;
    return (std::sin(arg) * even - std::cos(arg) * odd) / (std::sqrt(kPi) * std::pow(ax, 0.25L));
}

}  // namespace

double airy_ai(double x)
{
    if (std::isnan(x)) return x;
    if (x > 200) return 0.0;
    if (std::fabs(x) <= 8) return static_cast<double>(airy_series(x));
    return static_cast<double>(airy_asymptotic(x));
}

Tensor airy(const std::vector<double>& x)
{
    std::vector<double> v(x.size());
    std::transform(x.begin(), x.end(), v.begin(), airy_ai);
    return Tensor::reals({x.size()}, std::move(v));
}

std::vector<double> airy_grid(double step, double hi)
{
    return airy_grid(step, -std::pow(std::numbers::pi / step, 2), hi);
}

std::vector<double> airy_grid(double step, double lo, double hi)
{
    if (!(step > 0) || !(hi > lo)) throw DomainError("airy grid needs step > 0 and hi > lo");
    std::vector<double> x;
    for (std::size_t k = 0;; ++k) {
        double v = hi - static_cast<double>(k) * step;
        if (v < lo - 1e-9) break;
        x.push_back(v);
    }
    std::reverse(x.begin(), x.end());
    return x;
}

void ProbeSpec::validate() const
{
    if (dims != 1 && dims != 2) throw DomainError("probe dimensionality must be 1 or 2");
    if (samples.size() != static_cast<std::size_t>(dims) || step.size() != static_cast<std::size_t>(dims))
        throw DomainError("probe grid needs one sample count and one step per axis");
    for (std::size_t d = 0; d < samples.size(); ++d) {
        if (samples[d] < 1) throw DomainError("probe grid needs at least one sample per axis");
        if (!(step[d] > 0)) throw DomainError("probe step must be positive");
    }
    if (!(kappa >= 0)) throw DomainError("pedestal must be non-negative");
    for (const auto& [exps, c] : phase) {
        if (exps.size() != static_cast<std::size_t>(dims)) throw DomainError("phase exponent tuple has wrong length");
        int total = 0;
        for (int e : exps) {
            if (e < 0) throw DomainError("phase exponents must be non-negative");
            total += e;
        }
        if (total % 2 == 0 && c != 0)
            throw DomainError("phase monomial of even total degree breaks phi(-k) = -phi(k)");
    }
}

std::string ProbeSpec::to_json() const
{
    nlohmann::ordered_json j;
    j["dims"] = dims;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [exps, c] : phase) terms.push_back({{"exponents", exps}, {"coefficient", c}});
    j["phase"] = terms;
    j["samples"] = samples;
    j["step"] = step;
    j["kappa"] = kappa;
    return j.dump();
}

ProbeSpec ProbeSpec::from_json(const std::string& text)
{
    ProbeSpec s;
    try {
        auto j = nlohmann::json::parse(text);
        s.dims = j.at("dims").get<int>();
        for (const auto& t : j.at("phase")) s.phase[t.at("exponents").get<std::vector<int>>()] = t.at("coefficient").get<double>();
        s.samples = j.at("samples").get<std::vector<std::size_t>>();
        s.step = j.at("step").get<std::vector<double>>();
        s.kappa = j.value("kappa", 0.0);
    } catch (const nlohmann::json::exception& ex) {
        throw DomainError(std::string("malformed probe spec: ") + ex.what());
    }
    s.validate();
    return s;
}

ProbeSpec ProbeSpec::airy1d(std::size_t n, double step, double tau)
{
    ProbeSpec s;
    s.dims = 1;
    s.phase[{3}] = tau;
    s.samples = {n};
    s.step = {step};
    return s;
}

Tensor synthesize_probe(const ProbeSpec& spec)
{
    spec.validate();
    const Shape shape(spec.samples.begin(), spec.samples.end());
    const std::size_t total = shape_size(shape);
    const std::size_t rank = shape.size();
    Tensor index = Tensor::zeros(shape, Mode::integer);

    // Frequency of DFT bin j on axis d.
    auto freq = [&](std::size_t d, std::size_t j) {
        const auto n = static_cast<std::int64_t>(shape[d]);
        std::int64_t m = static_cast<std::int64_t>(j);
        if (m >= n - n / 2) m -= n;  // m in [-floor(N/2), ceil(N/2))
        return 2 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * spec.step[d]);
    };
    auto phi = [&](const std::vector<std::size_t>& bin) {
        double v = 0;
        for (const auto& [exps, c] : spec.phase) {
            double term = c;
            for (std::size_t d = 0; d < rank; ++d) term *= std::pow(freq(d, bin[d]), exps[d]);
            v += term;
        }
        return v;
    };
    auto partner = [&](const std::vector<std::size_t>& bin) {
        std::vector<std::size_t> p(rank);
        for (std::size_t d = 0; d < rank; ++d) p[d] = (shape[d] - bin[d]) % shape[d];
        return index.flat_index(p);
    };

    std::vector<std::complex<double>> z(total);
    for (std::size_t f = 0; f < total; ++f) {
        auto bin = index.unravel(f);
        std::size_t g = partner(bin);
        double ph = phi(bin);
        if (g == f)
            z[f] = std::cos(ph) < 0 ? -1.0 : 1.0;
        else if (g < f)
            z[f] = std::conj(z[g]);
        else
            z[f] = std::polar(1.0, ph);
    }
    z = dft(shape, std::move(z), true);

    double peak = 0, imag = 0;
    for (const auto& v : z) {
        peak = std::max(peak, std::abs(v));
        imag = std::max(imag, std::fabs(v.imag()));
    }
    if (imag > 1e-9 * std::max(peak, 1.0)) throw NumericalError("synthesised probe is not real");

    // fftshift: output position (j + floor(N/2)) mod N holds bin j.
    std::vector<double> out(total);
    for (std::size_t f = 0; f < total; ++f) {
        auto idx = index.unravel(f);
        for (std::size_t d = 0; d < rank; ++d) idx[d] = (idx[d] + shape[d] / 2) % shape[d];
        out[index.flat_index(idx)] = z[f].real() + spec.kappa;
    }
    return Tensor::reals(shape, std::move(out));
}

DeltaReport verify_delta_correlation(const Tensor& h)
{
    if (h.empty()) throw DomainError("empty tensor");
    DeltaReport r;
    Tensor pc = periodic_autocorrelation(h);
    double c0 = pc.reals()[0], off = 0;
    for (std::size_t f = 1; f < pc.size(); ++f) off = std::max(off, std::fabs(pc.reals()[f]));
    r.periodic_off_peak = c0 > 0 ? off / c0 : std::numeric_limits<double>::infinity();
    CorrelationResult ac = correlate(h.as_real(), h.as_real());
    double a0 = ac.peak.value();
    r.aperiodic_off_peak = a0 > 0 ? ac.off_peak_max.value() / a0 : std::numeric_limits<double>::infinity();
    r.spectral_flatness = spectral_flatness(h);
    return r;
}

Objective parse_objective(const std::string& name)
{
    if (name == "M" || name == "merit") return Objective::merit;
    if (name == "R" || name == "ratio") return Objective::ratio;
    throw DomainError("unknown objective: " + name);
}

namespace {

struct Score {
    ld primary = 0, secondary = 0;
};

bool better(const Score& a, const Score& b)
{
    auto gt = [](ld x, ld y) { return x > y * (1 + 1e-15L) && x != y; };
    if (gt(a.primary, b.primary)) return true;
    if (gt(b.primary, a.primary)) return false;
    return gt(a.secondary, b.secondary);
}

Score score(ld c0, ld ss, ld mx, Objective obj)
{
    ld inf = std::numeric_limits<ld>::infinity();
    ld m = ss > 0 ? c0 * c0 / ss : inf;
    ld r = mx > 0 ? c0 / mx : inf;
    return obj == Objective::merit ? Score{m, r} : Score{r, m};
}

}  // namespace

TweakResult discretize_and_tweak(const Tensor& h, int target_bits, Objective objective, int max_iters)
{
    if (target_bits < 3 || target_bits > 30) throw DomainError("target_bits must be in [3, 30]");
    if (h.empty()) throw DomainError("empty tensor");
    TweakResult res;
    const std::int64_t levels = (std::int64_t{1} << target_bits) - 1;

    Tensor a;
    if (h.is_integer() && bits(h) <= target_bits) {
        a = h;
    } else {
        double lo = min_value(h), hi = max_value(h);
        if (hi == lo) {
            a = h.rounded();
        } else {
            for (std::int64_t span : {levels, levels - 1}) {
                res.scale = static_cast<double>(span) / (hi - lo);
                a = scale(h, res.scale).rounded();
                if (bits(a) <= target_bits) break;
            }
        }
    }

    auto& v = a.ints();
    const std::size_t n = v.size();
    const Shape& shape = a.shape();
    const std::size_t rank = shape.size();
    CorrelationResult cr = correlate(a, a, Backend::direct);
    std::vector<std::int64_t> C = cr.values.ints();
    const std::size_t centre = cr.centre;

    if (std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; })) {
        res.undefined = true;
        res.array = a;
        res.report = classify(a, cr);
        return res;
    }

    // Shift vectors of every correlation cell.
    std::vector<std::vector<std::int64_t>> shift(C.size(), std::vector<std::int64_t>(rank));
    for (std::size_t j = 0; j < C.size(); ++j) {
        auto idx = cr.values.unravel(j);
        for (std::size_t d = 0; d < rank; ++d)
            shift[j][d] = static_cast<std::int64_t>(idx[d]) - static_cast<std::int64_t>(shape[d] - 1);
    }
    auto neighbour = [&](const std::vector<std::size_t>& pos, const std::vector<std::int64_t>& s, int sign,
                         std::int64_t& out) {
        std::size_t f = 0;
        for (std::size_t d = 0; d < rank; ++d) {
            std::int64_t p = static_cast<std::int64_t>(pos[d]) + sign * s[d];
            if (p < 0 || p >= static_cast<std::int64_t>(shape[d])) return false;
            f = f * shape[d] + static_cast<std::size_t>(p);
        }
        out = v[f];
        return true;
    };

    auto evaluate = [&](const std::vector<std::int64_t>& c) {
        ld ss = 0, mx = 0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (j == centre) continue;
            ld x = static_cast<ld>(c[j]);
            ss += x * x;
            mx = std::max(mx, std::fabs(x));
        }
        return score(static_cast<ld>(c[centre]), ss, mx, objective);
    };

    Score current = evaluate(C);
    std::vector<std::int64_t> trial(C.size());
    for (int it = 0; it < max_iters; ++it) {
        auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
        const std::int64_t vmin = *mn_it, vmax = *mx_it;
        Score best = current;
        std::size_t best_i = n;
        int best_d = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto pos = a.unravel(i);
            for (int d : {1, -1}) {
                std::int64_t nv = v[i] + d;
                if (std::max(vmax, nv) - std::min(vmin, nv) > levels) continue;
                for (std::size_t j = 0; j < C.size(); ++j) {
                    if (j == centre) {
                        trial[j] = C[j] + 2 * d * v[i] + 1;
                        continue;
                    }
                    std::int64_t delta = 0, x;
                    if (neighbour(pos, shift[j], 1, x)) delta += x;
                    if (neighbour(pos, shift[j], -1, x)) delta += x;
                    trial[j] = C[j] + d * delta;
                }
                Score s = evaluate(trial);
                if (better(s, best)) {
                    best = s;
                    best_i = i;
                    best_d = d;
                }
            }
        }
        if (best_i == n) break;
        v[best_i] += best_d;
        CorrelationResult next = correlate(a, a, Backend::direct);
        C = next.values.ints();
        current = best;
        ++res.iterations;
    }
    res.array = a;
    res.report = classify(a);
    return res;
}

}  // namespace huff
