#include "huffman/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "huffman/error.hpp"

namespace huff {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial)
{
    return std::mt19937_64(splitmix64(seed + trial));
}

Tensor random_integers(const Shape& shape, std::int64_t lo, std::int64_t hi, std::uint64_t seed)
{
    if (hi < lo) throw DomainError("empty integer range");
    auto rng = trial_rng(seed, 0);
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    std::vector<std::int64_t> v(shape_size(shape));
    for (auto& x : v) x = dist(rng);
    return Tensor::integers(shape, std::move(v));
}

namespace {

void check_ranks(const Tensor& a, const Tensor& b)
{
    if (a.empty() || b.empty()) throw DomainError("empty tensor");
    if (a.rank() != b.rank())
        throw DomainError("dimensionality mismatch: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
}

Shape object_extents(const Tensor& blurred, const Tensor& mask)
{
    Shape s(blurred.rank());
    for (std::size_t d = 0; d < s.size(); ++d) {
        if (blurred.extent(d) < mask.extent(d)) throw DomainError("blurred image smaller than the mask");
        s[d] = blurred.extent(d) - mask.extent(d) + 1;
    }
    return s;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += threads) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Summary summarize(const std::vector<double>& v)
{
    Summary s;
    if (v.empty()) return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0L) / v.size();
    return s;
}

}  // namespace

Tensor encode(const Tensor& object, const Tensor& mask)
{
    check_ranks(object, mask);
    return correlate(object, mask).values;
}

Tensor decode_full(const Tensor& blurred, const Tensor& mask)
{
    check_ranks(blurred, mask);
    return correlate(blurred, flip(mask)).values;
}

Tensor decode(const Tensor& blurred, const Tensor& mask)
{
    check_ranks(blurred, mask);
    return crop_center(decode_full(blurred, mask), object_extents(blurred, mask));
}

DeblurResult deblur(const Tensor& blurred, const Tensor& mask, const DeblurOptions& options)
{
    if (options.iterations < 1) throw DomainError("deblur needs at least one iteration");
    check_ranks(blurred, mask);
    const Shape extents = object_extents(blurred, mask);
    CorrelationResult ac = correlate(mask, mask);
    const double c0 = ac.peak.value();
    if (c0 == 0) throw DomainError("mask is all zeros");
    Tensor c_off = ac.values.as_real();
    c_off.reals()[ac.centre] = 0;

    const Tensor o1 = scale(decode(blurred, mask), 1.0 / c0);
    DeblurResult res;
    Tensor op = o1;
    res.iterations = 1;
    int growth = 0;
    for (int p = 1; p < options.iterations; ++p) {
        Tensor alias = crop_center(correlate(op, c_off).values, extents);
        Tensor next = subtract(o1, scale(alias, 1.0 / c0));
        double step = max_abs_difference(next, op);
        if (!res.steps.empty() && step > res.steps.back())
            ++growth;
        else
            growth = 0;
        res.steps.push_back(step);
        op = std::move(next);
        res.iterations = p + 1;
        if (growth >= 3) {
            res.diverged = true;
            break;
        }
    }
    res.raw = op;
    res.estimate = options.snap_to_integers ? op.rounded() : op;
    return res;
}

PedestalPair pedestal_pair(const Tensor& object, const Tensor& mask, double kappa)
{
    check_ranks(object, mask);
    if (!(kappa >= max_abs(mask)))
        throw DomainError("pedestal " + std::to_string(kappa) + " leaves H + kappa or -H + kappa negative (need >= " +
                          std::to_string(max_abs(mask)) + ")");
    Tensor plus, minus;
    const bool exact = object.is_integer() && mask.is_integer() && kappa == std::floor(kappa) && kappa < 9e15;
    if (exact) {
        auto k = static_cast<std::int64_t>(kappa);
        Tensor kt = Tensor::integers(mask.shape(), std::vector<std::int64_t>(mask.size(), k));
        plus = add(mask, kt);
        minus = subtract(kt, mask);
    } else {
        plus = add_scalar(mask.as_real(), kappa);
        minus = add_scalar(negate(mask.as_real()), kappa);
    }
    PedestalPair r;
    r.I1 = encode(object, plus);
    r.I2 = encode(object, minus);
    r.Ic = subtract(r.I1, r.I2);
    return r;
}

std::string to_string(KappaRule r) { return r == KappaRule::exact ? "exact" : "boundary"; }

KappaRule parse_kappa_rule(const std::string& name)
{
    if (name == "exact") return KappaRule::exact;
    if (name == "boundary") return KappaRule::boundary;
    throw DomainError("unknown kappa rule: " + name);
}

GhostResult ghost_image(const Tensor& object, const Tensor& mask, const GhostOptions& options)
{
    check_ranks(object, mask);
    if (!(options.kappa >= -min_value(mask))) throw DomainError("pedestal leaves H + kappa negative");
    GhostResult res;
    res.rule = options.rule;
    const double sum_o = sum(object), sum_h = sum(mask);
    res.bucket = add_scalar(encode(object, mask).as_real(), options.kappa * sum_o);

    if (!options.scan.empty()) {
        if (options.scan.size() != res.bucket.rank()) throw DomainError("scan extents have the wrong rank");
        Shape offset(options.scan.size());
        for (std::size_t d = 0; d < offset.size(); ++d) {
            if (options.scan[d] > res.bucket.extent(d)) throw DomainError("scan larger than the overlap range");
            if (options.scan[d] < res.bucket.extent(d)) res.partial = true;
            offset[d] = (res.bucket.extent(d) - options.scan[d]) / 2;
        }
        Tensor measured = crop(res.bucket, offset, options.scan);
        res.bucket = add_patch(Tensor::zeros(res.bucket.shape(), Mode::real), measured, offset);
    }

    Tensor decoded = decode(res.bucket, mask.as_real());
    if (options.rule == KappaRule::exact) {
        res.kappa_prime = options.kappa * sum_o * sum_h;
    } else {
        long double s = 0;
        std::size_t n = 0;
        for (std::size_t f = 0; f < decoded.size(); ++f) {
            auto idx = decoded.unravel(f);
            bool border = false;
            for (std::size_t d = 0; d < idx.size(); ++d)
                border = border || idx[d] == 0 || idx[d] + 1 == decoded.extent(d);
            if (border) {
                s += decoded.reals()[f];
                ++n;
            }
        }
        res.kappa_prime = static_cast<double>(s / n);
    }
    Tensor corrected = add_scalar(decoded, -res.kappa_prime);
    if (options.iterations <= 1) {
        const double c0 = correlate(mask, mask).peak.value();
        res.reconstruction = scale(corrected, 1.0 / c0);
    } else {
        // Remove the pedestal from the bucket so the alias recursion applies.
        double level = options.rule == KappaRule::exact ? options.kappa * sum_o
                       : sum_h != 0                      ? res.kappa_prime / sum_h
                                                         : 0.0;
        Tensor cleaned = add_scalar(res.bucket, -level);
        res.reconstruction = deblur(cleaned, mask, {options.iterations, false}).estimate;
    }
    return res;
}

Tensor watermark_embed(const Tensor& host, const Tensor& mark, const std::vector<std::int64_t>& offset)
{
    check_ranks(host, mark);
    if (offset.size() != host.rank()) throw DomainError("offset needs one entry per axis");
    Shape origin(host.rank());
    for (std::size_t d = 0; d < origin.size(); ++d) {
        if (mark.extent(d) > host.extent(d)) throw DomainError("mark larger than host");
        std::int64_t o = static_cast<std::int64_t>((host.extent(d) - mark.extent(d)) / 2) + offset[d];
        if (o < 0 || o + mark.extent(d) > host.extent(d)) throw DomainError("mark does not fit at this offset");
        origin[d] = static_cast<std::size_t>(o);
    }
    return add_patch(host, mark, origin);
}

WatermarkHit watermark_locate(const Tensor& marked, const Tensor& mark)
{
    check_ranks(marked, mark);
    for (std::size_t d = 0; d < marked.rank(); ++d)
        if (mark.extent(d) > marked.extent(d)) throw DomainError("mark larger than host");
    Tensor centred = add_scalar(marked.as_real(), -sum(marked) / static_cast<double>(marked.size()));
    Tensor c = correlate(centred, mark.as_real()).values;
    WatermarkHit hit;
    hit.threshold = correlate(mark, mark).peak.value() / 2;
    hit.peak = -std::numeric_limits<double>::infinity();
    Shape best;
    for (std::size_t f = 0; f < c.size(); ++f) {
        auto idx = c.unravel(f);
        bool full = true;
        for (std::size_t d = 0; d < idx.size() && full; ++d) {
            // top-left = idx - (mark - 1) must lie in [0, host - mark]
            full = idx[d] + 1 >= mark.extent(d) && idx[d] + 1 - mark.extent(d) <= marked.extent(d) - mark.extent(d);
        }
        if (full && c.reals()[f] > hit.peak) {
            hit.peak = c.reals()[f];
            best = idx;
        }
    }
    hit.offset.resize(best.size());
    for (std::size_t d = 0; d < best.size(); ++d) {
        auto top_left = static_cast<std::int64_t>(best[d] + 1 - mark.extent(d));
        hit.offset[d] = top_left - static_cast<std::int64_t>((marked.extent(d) - mark.extent(d)) / 2);
    }
    return hit;
}

BaselineStats random_baseline(const Shape& shape, std::int64_t lo, std::int64_t hi, std::size_t trials,
                              std::uint64_t seed, unsigned threads, bool keep_reports)
{
    if (trials < 1) throw DomainError("baseline needs at least one trial");
    const std::size_t n = shape_size(shape);
    if (n == 0) throw DomainError("empty shape");
    if (hi < lo || static_cast<std::size_t>(hi - lo + 1) < n)
        throw DomainError("value range too small for distinct entries");
    std::vector<std::int64_t> pool(static_cast<std::size_t>(hi - lo + 1));
    std::iota(pool.begin(), pool.end(), lo);

    std::vector<QualityReport> reports(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        auto rng = trial_rng(seed, t);
        std::vector<std::int64_t> v = pool;
        // partial Fisher-Yates
        for (std::size_t i = 0; i < n; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, v.size() - 1);
            std::swap(v[i], v[pick(rng)]);
        }
        v.resize(n);
        reports[t] = classify(Tensor::integers(shape, std::move(v)));
    });

    BaselineStats st;
    st.trials = trials;
    std::vector<double> rs, ms;
    for (const auto& r : reports) {
        bool bad = r.R_infinite || r.M_infinite || std::isnan(r.R) || std::isnan(r.M);
        if (bad) {
            ++st.undefined;
            continue;
        }
        rs.push_back(r.R);
        ms.push_back(r.M);
    }
    st.R = summarize(rs);
    st.M = summarize(ms);
    if (keep_reports) st.reports = std::move(reports);
    return st;
}

NoiseStudy multiplex_noise_study(const Tensor& object, const Tensor& mask, double sigma, std::size_t trials,
                                 std::uint64_t seed, unsigned threads, int iterations)
{
    check_ranks(object, mask);
    if (!(sigma > 0)) throw DomainError("sigma must be positive");
    if (trials < 1) throw DomainError("noise study needs at least one trial");
    const double c0 = correlate(mask, mask).peak.value();
    if (c0 == 0) throw DomainError("mask is all zeros");
    NoiseStudy out;
    out.elements = mask.size();
    const Tensor hn = scale(mask, std::sqrt(static_cast<double>(mask.size()) / c0));
    const Tensor clean = encode(object.as_real(), hn);
    const Tensor obj = object.as_real();
    {
        Tensor e = subtract(deblur(clean, hn, {iterations, false}).estimate, obj);
        long double b = 0;
        for (double x : e.reals()) b += static_cast<long double>(x) * x;
        out.bias_mse = static_cast<double>(b / e.size());
    }

    std::vector<double> mse_d(trials), mse_f(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        auto rng = trial_rng(seed, t);
        std::normal_distribution<double> noise(0.0, sigma);
        long double sd = 0;
        for (std::size_t i = 0; i < obj.size(); ++i) {
            double e = noise(rng);
            sd += static_cast<long double>(e) * e;
        }
        Tensor measured = clean;
        for (auto& x : measured.reals()) x += noise(rng);
        Tensor est = deblur(measured, hn, {iterations, false}).estimate;
        long double sf = 0;
        for (std::size_t i = 0; i < obj.size(); ++i) {
            double e = est.reals()[i] - obj.reals()[i];
            sf += static_cast<long double>(e) * e;
        }
        mse_d[t] = static_cast<double>(sd / obj.size());
        mse_f[t] = static_cast<double>(sf / obj.size());
    });
    out.mse_delta = std::accumulate(mse_d.begin(), mse_d.end(), 0.0L) / trials;
    out.mse_diffuse = std::accumulate(mse_f.begin(), mse_f.end(), 0.0L) / trials;
    out.ratio = out.mse_delta / out.mse_diffuse;
    return out;
}

}  // namespace huff
