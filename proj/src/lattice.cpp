#include "huffman/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "huffman/error.hpp"

namespace huff {

namespace {

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

void check_pair(const Tensor& a, const Tensor& b)
{
    if (a.empty() || b.empty()) throw DomainError("empty tensor");
    if (a.rank() != b.rank())
        throw DomainError("dimensionality mismatch: " + std::to_string(a.rank()) + " vs " + std::to_string(b.rank()));
}

Shape full_shape(const Tensor& a, const Tensor& b)
{
    Shape s(a.rank());
    for (std::size_t d = 0; d < a.rank(); ++d) s[d] = a.extent(d) + b.extent(d) - 1;
    return s;
}

std::vector<std::size_t> strides_of(const Shape& shape)
{
    std::vector<std::size_t> s(shape.size(), 1);
    for (std::size_t d = shape.size(); d-- > 1;) s[d - 1] = s[d] * shape[d];
    return s;
}

// Offset of every element of t inside an array with strides os.
std::vector<std::size_t> embed_offsets(const Tensor& t, const std::vector<std::size_t>& os)
{
    std::vector<std::size_t> off(t.size());
    std::vector<std::size_t> idx(t.rank(), 0);
    for (std::size_t f = 0; f < t.size(); ++f) {
        std::size_t o = 0;
        for (std::size_t d = 0; d < idx.size(); ++d) o += idx[d] * os[d];
        off[f] = o;
        for (std::size_t d = idx.size(); d-- > 0;) {
            if (++idx[d] < t.extent(d)) break;
            idx[d] = 0;
        }
    }
    return off;
}

Tensor direct_integer(const Tensor& a, const Tensor& b)
{
    Shape os_shape = full_shape(a, b);
    auto os = strides_of(os_shape);
    auto offa = embed_offsets(a, os);
    auto offb = embed_offsets(b, os);
    std::size_t k = 0;
    for (std::size_t d = 0; d < b.rank(); ++d) k += (b.extent(d) - 1) * os[d];

    std::vector<__int128> acc(shape_size(os_shape), 0);
    const auto& av = a.ints();
    const auto& bv = b.ints();
    for (std::size_t i = 0; i < av.size(); ++i) {
        if (av[i] == 0) continue;
        const __int128 x = av[i];
        const std::size_t base = offa[i] + k;
        for (std::size_t j = 0; j < bv.size(); ++j) {
            if (bv[j] == 0) continue;
            __int128& slot = acc[base - offb[j]];
            if (__builtin_add_overflow(slot, x * bv[j], &slot)) throw NumericalError("correlation overflow");
        }
    }
    std::vector<std::int64_t> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        if (acc[i] > INT64_MAX || acc[i] < INT64_MIN) throw NumericalError("correlation exceeds 64-bit range");
        out[i] = static_cast<std::int64_t>(acc[i]);
    }
    return Tensor::integers(os_shape, std::move(out));
}

Tensor direct_real(const Tensor& a, const Tensor& b)
{
    Shape os_shape = full_shape(a, b);
    auto os = strides_of(os_shape);
    auto offa = embed_offsets(a, os);
    auto offb = embed_offsets(b, os);
    std::size_t k = 0;
    for (std::size_t d = 0; d < b.rank(); ++d) k += (b.extent(d) - 1) * os[d];

    std::vector<double> acc(shape_size(os_shape), 0.0);
    std::vector<double> bv(b.size());
    for (std::size_t j = 0; j < bv.size(); ++j) bv[j] = b.value(j);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a.value(i);
        if (x == 0.0) continue;
        const std::size_t base = offa[i] + k;
        for (std::size_t j = 0; j < bv.size(); ++j) acc[base - offb[j]] += x * bv[j];
    }
    return Tensor::reals(os_shape, std::move(acc));
}

// correlate(a, b) == convolve(a, flip(b)); done with zero-padded FFTs.
Tensor fft_real(const Tensor& a, const Tensor& b)
{
    Shape os_shape = full_shape(a, b);
    auto os = strides_of(os_shape);
    std::size_t n = shape_size(os_shape);
    std::vector<std::complex<double>> fa(n), fb(n);
    auto offa = embed_offsets(a, os);
    auto offb = embed_offsets(b, os);
    for (std::size_t i = 0; i < a.size(); ++i) fa[offa[i]] = a.value(i);
    for (std::size_t j = 0; j < b.size(); ++j) fb[offb[b.size() - 1 - j]] = b.value(j);
    fa = dft(os_shape, std::move(fa), false);
    fb = dft(os_shape, std::move(fb), false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fa = dft(os_shape, std::move(fa), true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fa[i].real();
    return Tensor::reals(os_shape, std::move(out));
}

std::size_t count_nonzero(const Tensor& t)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < t.size(); ++i) c += !t.is_zero(i);
    return c;
}

Tensor support(const Tensor& t)
{
    std::vector<std::int64_t> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = t.is_zero(i) ? 0 : 1;
    return Tensor::integers(t.shape(), std::move(v));
}

Number number_at(const Tensor& t, std::size_t f)
{
    return t.is_integer() ? Number::of(t.ints()[f]) : Number::of_real(t.reals()[f]);
}

Number magnitude(const Number& n)
{
    if (n.exact) return Number::of(n.i < 0 ? -n.i : n.i);
    return Number::of_real(std::fabs(n.r));
}

// Boundary cells of {s : S(s) > 0}: support cells with an axis neighbour
// outside the support (or outside the array).
std::vector<char> boundary_mask(const Tensor& overlap)
{
    const auto& v = overlap.ints();
    auto st = overlap.strides();
    std::vector<char> mask(v.size(), 0);
    for (std::size_t f = 0; f < v.size(); ++f) {
        if (v[f] <= 0) continue;
        auto idx = overlap.unravel(f);
        bool edge = false;
        for (std::size_t d = 0; d < idx.size() && !edge; ++d) {
            if (idx[d] == 0 || v[f - st[d]] <= 0) edge = true;
            else if (idx[d] + 1 == overlap.extent(d) || v[f + st[d]] <= 0) edge = true;
        }
        mask[f] = edge;
    }
    return mask;
}

}  // namespace

std::vector<std::complex<double>> dft(const Shape& shape, std::vector<std::complex<double>> data, bool inverse)
{
    if (shape_size(shape) != data.size()) throw DomainError("dft data does not match shape");
    std::vector<int> n(shape.begin(), shape.end());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                             FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("FFTW plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(data.size());
        for (auto& z : data) z *= s;
    }
    return data;
}

CorrelationResult correlate(const Tensor& a, const Tensor& b, Backend backend)
{
    check_pair(a, b);
    const bool exact = a.is_integer() && b.is_integer();
    if (exact && backend == Backend::fft) throw DomainError("integer correlation is always computed directly");

    CorrelationResult res;
    if (exact) {
        res.values = direct_integer(a, b);
    } else {
        bool use_fft = backend == Backend::fft;
        if (backend == Backend::automatic) {
            double m = static_cast<double>(shape_size(full_shape(a, b)));
            double direct_cost = static_cast<double>(count_nonzero(a)) * static_cast<double>(b.size());
            use_fft = direct_cost > 12.0 * m * std::log2(m + 1.0) && m >= 64.0 * 64.0;
        }
        res.values = use_fft ? fft_real(a, b) : direct_real(a, b);
    }

    const Tensor& c = res.values;
    std::vector<std::size_t> zero(b.rank());
    for (std::size_t d = 0; d < b.rank(); ++d) zero[d] = b.extent(d) - 1;
    res.centre = c.flat_index(zero);
    res.peak = number_at(c, res.centre);

    if (a.shape() == b.shape()) {
        Tensor overlap = direct_integer(support(a), support(b));
        res.edge_mask = boundary_mask(overlap);
        res.edge_mask[res.centre] = 0;
        std::optional<std::size_t> best;
        for (std::size_t f = 0; f < c.size(); ++f) {
            if (!res.edge_mask[f]) continue;
            if (!best || std::fabs(c.value(f)) > std::fabs(c.value(*best))) best = f;
        }
        if (best) res.edge = number_at(c, *best);
    }

    Number off = exact ? Number::of(0) : Number::of_real(0.0);
    Number op = off;
    const double edge_mag = res.edge ? std::fabs(res.edge->value()) : -1.0;
    for (std::size_t f = 0; f < c.size(); ++f) {
        if (f == res.centre) continue;
        Number m = magnitude(number_at(c, f));
        if (m.value() > off.value()) off = m;
        bool is_edge_entry = !res.edge_mask.empty() && res.edge_mask[f] && m.value() == edge_mag;
        if (!is_edge_entry && m.value() > op.value()) op = m;
    }
    res.off_peak_max = off;
    res.op = op;
    return res;
}

Tensor convolve(const Tensor& a, const Tensor& b, Backend backend)
{
    return correlate(a, flip(b), backend).values;
}

Tensor flip(const Tensor& a)
{
    if (a.empty()) return a;
    if (a.is_integer()) {
        std::vector<std::int64_t> v(a.ints().rbegin(), a.ints().rend());
        return Tensor::integers(a.shape(), std::move(v));
    }
    std::vector<double> v(a.reals().rbegin(), a.reals().rend());
    return Tensor::reals(a.shape(), std::move(v));
}

Tensor outer_product(const std::vector<Tensor>& factors)
{
    if (factors.empty()) throw DomainError("outer_product needs at least one factor");
    Shape shape;
    bool exact = true;
    for (const auto& f : factors) {
        if (f.rank() != 1) throw DomainError("outer_product factors must be 1D");
        shape.push_back(f.extent(0));
        exact = exact && f.is_integer();
    }
    Tensor out = Tensor::zeros(shape, exact ? Mode::integer : Mode::real);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        auto idx = out.unravel(flat);
        if (exact) {
            std::int64_t p = 1;
            for (std::size_t d = 0; d < idx.size(); ++d)
                if (__builtin_mul_overflow(p, factors[d].ints()[idx[d]], &p))
                    throw NumericalError("outer product overflow");
            out.ints()[flat] = p;
        } else {
            double p = 1.0;
            for (std::size_t d = 0; d < idx.size(); ++d) p *= factors[d].value(idx[d]);
            out.reals()[flat] = p;
        }
    }
    return out;
}

Tensor dft_magnitudes(const Tensor& a)
{
    if (a.empty()) throw DomainError("empty tensor");
    std::vector<std::complex<double>> z(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) z[i] = a.value(i);
    z = dft(a.shape(), std::move(z), false);
    std::vector<double> m(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) m[i] = std::abs(z[i]);
    return Tensor::reals(a.shape(), std::move(m));
}

Tensor periodic_autocorrelation(const Tensor& a)
{
    if (a.empty()) throw DomainError("empty tensor");
    std::vector<std::complex<double>> z(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) z[i] = a.value(i);
    z = dft(a.shape(), std::move(z), false);
    for (auto& v : z) v = std::norm(v);
    z = dft(a.shape(), std::move(z), true);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
    return Tensor::reals(a.shape(), std::move(out));
}

}  // namespace huff
