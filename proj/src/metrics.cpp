#include "huffman/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "huffman/error.hpp"

namespace huff {

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::canonical: return "canonical";
    case Classification::quasi: return "quasi";
    default: return "other";
    }
}

namespace {

using u128 = unsigned __int128;

long double sum_off_peak_squares(const CorrelationResult& c)
{
    const Tensor& v = c.values;
    if (!v.is_integer()) {
        long double s = 0;
        for (std::size_t f = 0; f < v.size(); ++f)
            if (f != c.centre) s += static_cast<long double>(v.reals()[f]) * v.reals()[f];
        return s;
    }
    u128 s = 0;
    bool overflow = false;
    for (std::size_t f = 0; f < v.size() && !overflow; ++f) {
        if (f == c.centre) continue;
        std::int64_t x = v.ints()[f];
        u128 m = static_cast<u128>(x < 0 ? -static_cast<__int128>(x) : x);
        overflow = __builtin_add_overflow(s, m * m, &s);
    }
    if (!overflow) return static_cast<long double>(s);
    long double ls = 0;
    for (std::size_t f = 0; f < v.size(); ++f)
        if (f != c.centre) ls += static_cast<long double>(v.ints()[f]) * v.ints()[f];
    return ls;
}

long double peak_squared(const CorrelationResult& c)
{
    if (c.peak.exact) {
        u128 m = static_cast<u128>(c.peak.i < 0 ? -static_cast<__int128>(c.peak.i) : c.peak.i);
        return static_cast<long double>(m * m);
    }
    return static_cast<long double>(c.peak.r) * c.peak.r;
}

std::string fmt_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_number(const Number& n)
{
    return n.exact ? std::to_string(n.i) : fmt_double(n.r);
}

nlohmann::json json_number(const Number& n)
{
    if (n.exact) return n.i;
    return n.r;
}

nlohmann::json json_real(double v, bool infinite)
{
    if (infinite || std::isinf(v)) return "inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

}  // namespace

double merit_factor(const CorrelationResult& c, bool* infinite)
{
    if (infinite) *infinite = false;
    long double ss = sum_off_peak_squares(c);
    long double p2 = peak_squared(c);
    if (p2 == 0) return std::numeric_limits<double>::quiet_NaN();
    if (ss == 0) {
        if (infinite) *infinite = true;
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(p2 / ss);
}

double side_lobe_ratio(const CorrelationResult& c, bool* infinite)
{
    if (infinite) *infinite = false;
    if (c.peak.value() == 0) return std::numeric_limits<double>::quiet_NaN();
    if (c.off_peak_max.value() == 0) {
        if (infinite) *infinite = true;
        return std::numeric_limits<double>::infinity();
    }
    if (c.peak.exact && c.off_peak_max.exact)
        return static_cast<double>(static_cast<long double>(c.peak.i) / c.off_peak_max.i);
    return c.peak.value() / c.off_peak_max.value();
}

double efficiency(const Tensor& a)
{
    std::size_t nz = 0;
    for (std::size_t i = 0; i < a.size(); ++i) nz += !a.is_zero(i);
    return static_cast<double>(nz) / static_cast<double>(a.size());
}

double power(const Tensor& a)
{
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a.value(i)) * a.value(i);
    double m = max_abs(a);
    if (m == 0) return 0.0;
    return static_cast<double>(std::sqrt(s / a.size())) / m;
}

double spectral_flatness(const Tensor& a)
{
    Tensor mag = dft_magnitudes(a);
    double lo = min_value(mag), hi = max_value(mag);
    if (lo <= 0) return std::numeric_limits<double>::infinity();
    return (hi - lo) / lo;
}

int bits(const Tensor& a)
{
    long double range = static_cast<long double>(max_value(a)) - min_value(a);
    if (a.is_integer()) {
        auto [lo, hi] = std::minmax_element(a.ints().begin(), a.ints().end());
        range = static_cast<long double>(static_cast<__int128>(*hi) - *lo);
    }
    int b = 0;
    long double levels = range + 1;
    while (std::ldexp(1.0L, b) < levels) ++b;
    return std::max(b, 1);
}

bool is_canonical(const CorrelationResult& c)
{
    if (c.edge_mask.empty() && c.values.size() > 1) return false;
    for (std::size_t f = 0; f < c.values.size(); ++f) {
        if (f == c.centre || (!c.edge_mask.empty() && c.edge_mask[f])) continue;
        if (!c.values.is_zero(f)) return false;
    }
    return true;
}

bool is_quasi(const CorrelationResult& c)
{
    double edge = c.edge ? std::fabs(c.edge->value()) : 0.0;
    if (c.edge_mask.empty() && c.values.size() > 1) return false;
    return c.off_peak_max.value() <= edge;
}

QualityReport classify(const Tensor& a)
{
    return classify(a, correlate(a, a));
}

QualityReport classify(const Tensor& a, const CorrelationResult& c)
{
    QualityReport r;
    r.M = merit_factor(c, &r.M_infinite);
    r.R = side_lobe_ratio(c, &r.R_infinite);
    r.E = efficiency(a);
    r.P = power(a);
    r.S = spectral_flatness(a);
    r.C0 = c.peak;
    if (c.edge) {
        r.C_edge = c.edge->exact ? Number::of(c.edge->i < 0 ? -c.edge->i : c.edge->i)
                                 : Number::of_real(std::fabs(c.edge->r));
    } else {
        r.C_edge = c.peak.exact ? Number::of(0) : Number::of_real(0.0);
    }
    r.OP = c.op;
    r.bits = bits(a);
    if (is_canonical(c))
        r.classification = Classification::canonical;
    else if (is_quasi(c))
        r.classification = Classification::quasi;
    else
        r.classification = Classification::other;
    return r;
}

std::string QualityReport::to_json() const
{
    nlohmann::ordered_json j;
    j["M"] = json_real(M, M_infinite);
    j["R"] = json_real(R, R_infinite);
    j["E"] = E;
    j["P"] = P;
    j["S"] = json_real(S, false);
    j["C0"] = json_number(C0);
    j["Cedge"] = json_number(C_edge);
    j["OP"] = json_number(OP);
    j["bits"] = bits;
    j["class"] = to_string(classification);
    return j.dump();
}

std::string QualityReport::csv_header()
{
    return "R,M,S,bits,OP,C0,Cedge,E,P,class";
}

std::string QualityReport::csv_row() const
{
    return fmt_double(R) + "," + fmt_double(M) + "," + fmt_double(S) + "," + std::to_string(bits) + "," +
           fmt_number(OP) + "," + fmt_number(C0) + "," + fmt_number(C_edge) + "," + fmt_double(E) + "," +
           fmt_double(P) + "," + to_string(classification);
}

CrossMetrics cross_metrics(const CorrelationResult& c)
{
    const Tensor& v = c.values;
    if (v.size() < 2) throw DomainError("cross metrics need at least two correlation entries");
    std::size_t best = 0;
    for (std::size_t f = 1; f < v.size(); ++f)
        if (v.value(f) > v.value(best)) best = f;
    double second = -std::numeric_limits<double>::infinity();
    long double ss = 0;
    for (std::size_t f = 0; f < v.size(); ++f) {
        if (f == best) continue;
        second = std::max(second, v.value(f));
        ss += static_cast<long double>(v.value(f)) * v.value(f);
    }
    CrossMetrics m;
    m.peak = v.value(best);
    m.R = m.peak / second;
    m.M = static_cast<double>(static_cast<long double>(m.peak) * m.peak / ss);
    return m;
}

}  // namespace huff
