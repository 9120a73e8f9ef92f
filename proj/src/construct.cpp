#include "huffman/construct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "huffman/error.hpp"
#include "huffman/lattice.hpp"

namespace huff {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw NumericalError("integer overflow while constructing sequence");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw NumericalError("integer overflow while constructing sequence");
    return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

std::string to_string(Family f)
{
    switch (f) {
    case Family::fibonacci_binet: return "fibonacci_binet";
    case Family::h5_family: return "h5_family";
    case Family::catalog: return "catalog";
    case Family::outer_product: return "outer_product";
    case Family::diamond5: return "diamond5";
    case Family::diamond7: return "diamond7";
    case Family::even_length: return "even_length";
    }
    return "?";
}

Family parse_family(const std::string& name)
{
    static const std::map<std::string, Family> names{
        {"fibonacci_binet", Family::fibonacci_binet}, {"fibonacci", Family::fibonacci_binet},
        {"h5_family", Family::h5_family},             {"h5", Family::h5_family},
        {"catalog", Family::catalog},                 {"outer_product", Family::outer_product},
        {"diamond5", Family::diamond5},               {"diamond7", Family::diamond7},
        {"even_length", Family::even_length},
    };
    auto it = names.find(name);
    if (it == names.end()) throw DomainError("unknown family: " + name);
    return it->second;
}

std::string HuffmanSpec::to_text() const
{
    std::ostringstream os;
    os << "family=" << to_string(family);
    auto alpha = [&] {
        os << " alphabet=";
        for (std::size_t i = 0; i < alphabet.size(); ++i) os << (i ? "," : "") << alphabet[i];
    };
    switch (family) {
    case Family::fibonacci_binet: os << " N=" << N << " b=" << b; break;
    case Family::h5_family: os << " n=" << n << " odd=" << (odd ? 1 : 0); break;
    case Family::catalog:
    case Family::even_length: os << " key=" << key; break;
    case Family::outer_product:
        if (key.empty())
            os << " N=" << N << " b=" << b;
        else
            os << " key=" << key;
        os << " dims=" << dims;
        break;
    case Family::diamond5:
    case Family::diamond7: alpha(); break;
    }
    return os.str();
}

HuffmanSpec HuffmanSpec::parse(const std::string& text)
{
    HuffmanSpec s;
    std::istringstream is(text);
    std::string tok;
    bool have_family = false;
    try {
        while (is >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) throw DomainError("expected key=value, got '" + tok + "'");
            std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
            if (k == "family") {
                s.family = parse_family(v);
                have_family = true;
            } else if (k == "N") {
                s.N = std::stoul(v);
            } else if (k == "b") {
                s.b = std::stoll(v);
            } else if (k == "n") {
                s.n = std::stoll(v);
            } else if (k == "odd") {
                s.odd = v == "1" || v == "true";
            } else if (k == "key") {
                s.key = v;
            } else if (k == "dims") {
                s.dims = std::stoul(v);
            } else if (k == "alphabet") {
                std::istringstream as(v);
                std::string item;
                while (std::getline(as, item, ',')) s.alphabet.push_back(std::stoll(item));
            } else {
                throw DomainError("unknown spec key: " + k);
            }
        }
    } catch (const std::logic_error& ex) {
        if (dynamic_cast<const DomainError*>(&ex)) throw;
        throw DomainError(std::string("malformed spec value: ") + ex.what());
    }
    if (!have_family) throw DomainError("spec needs family=...");
    return s;
}

std::int64_t generalized_fibonacci(std::int64_t k, std::int64_t m)
{
    std::int64_t n = k < 0 ? -k : k;
    std::int64_t prev = 0, cur = 1;
    if (n == 0) return 0;
    for (std::int64_t i = 1; i < n; ++i) {
        std::int64_t next = checked_add(checked_mul(m, cur), prev);
        prev = cur;
        cur = next;
    }
    if (k < 0 && n % 2 == 0) return -cur;
    return cur;
}

Tensor fibonacci_huffman(std::size_t N, std::int64_t b)
{
    if (N < 7 || (N - 3) % 4 != 0) throw DomainError("length must be 4n+3 with n >= 1, got " + std::to_string(N));
    if (b < 2 || b % 2 != 0) throw DomainError("up-scaling b must be even and >= 2, got " + std::to_string(b));
    const std::size_t M = (N - 1) / 2;
    const std::int64_t m = b / 2;

    std::vector<std::int64_t> h(N, 0);
    h[0] = 1;
    for (std::size_t i = 1; i < M; ++i) h[i] = checked_mul(b, generalized_fibonacci(static_cast<std::int64_t>(i), m));
    // h_{N+1-n} = (-1)^n h_n, 1-indexed
    for (std::size_t n = 1; n <= M; ++n) h[N - n] = (n % 2 ? -1 : 1) * h[n - 1];

    // Even shifts are affine in the middle element x: C(s) = alpha + 2 x h[M-s].
    Tensor t0 = Tensor::integers({N}, h);
    CorrelationResult c0 = correlate(t0, t0);
    std::int64_t x = 0;
    bool solved = false;
    for (std::size_t s = 2; s < M && !solved; s += 2) {
        std::int64_t coeff = checked_mul(2, h[M - s]);
        if (coeff == 0) continue;
        std::int64_t alpha = c0.values.ints()[(N - 1) + s];
        if (alpha % coeff != 0)
            throw NumericalError("middle element is not an integer for N=" + std::to_string(N) + " b=" +
                                 std::to_string(b));
        x = -alpha / coeff;
        solved = true;
    }
    if (!solved) throw NumericalError("no even shift constrains the middle element");
    h[M] = x;

    Tensor out = Tensor::integers({N}, std::move(h));
    CorrelationResult c = correlate(out, out);
    const auto& v = c.values.ints();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == c.centre) continue;
        bool end = i == 0 || i + 1 == v.size();
        if (end ? (v[i] != 1 && v[i] != -1) : v[i] != 0)
            throw NumericalError("construction is not canonical for N=" + std::to_string(N) + " b=" +
                                 std::to_string(b));
    }
    return out;
}

Tensor h5_family(std::int64_t n, bool odd)
{
    if (odd) {
        std::int64_t u = checked_add(checked_mul(2, n), 1);
        return Tensor::vector({1, u, checked_mul(checked_mul(2, n), n + 1), -u, 1});
    }
    if (n == 0) throw DomainError("h5_family needs n != 0");
    std::int64_t u = checked_mul(2, n);
    return Tensor::vector({1, u, checked_mul(u, n), -u, 1});
}

std::vector<std::string> catalog_keys()
{
    return {"H5", "H7", "H8", "H8x8", "H9", "H15", "D5S", "D7A", "D7B"};
}

Tensor catalog(const std::string& key)
{
    if (key == "H5") return Tensor::vector({1, 2, 2, -2, 1});
    if (key == "H7") return Tensor::vector({1, 2, 2, 0, -2, 2, -1});
    if (key == "H8") return Tensor::vector({1, 3, 4, 0, -3, 3, -2, 1});
    if (key == "H9") return Tensor::vector({1, 3, 4, 2, -2, -2, 4, -3, 1});
    if (key == "H15") return Tensor::vector({1, 2, 2, 4, 6, 10, 16, -3, -16, 10, -6, 4, -2, 2, -1});
    // Hand-optimised outer product of H8.
    if (key == "H8x8")
        return Tensor::matrix({{1, 3, 4, 0, -3, 3, -2, 1},
                               {3, 11, 13, 0, -10, 10, -6, 2},
                               {4, 13, 15, 0, -12, 12, -7, 3},
                               {0, 0, 0, 0, 0, 0, 0, 0},
                               {-3, -10, -12, 0, 9, -9, 6, -2},
                               {3, 10, 12, 0, -9, 10, -6, 2},
                               {-2, -6, -7, 0, 6, -6, 3, -1},
                               {1, 2, 3, 0, -2, 2, -1, 1}});
    // 5-bit 5x5 diamond, alphabet [0,1,2,4,7,13].
    if (key == "D5S")
        return Tensor::matrix({{0, 1, 2, -1, 0},
                               {1, 4, 7, -4, 1},
                               {2, 7, 13, -7, 2},
                               {-1, -4, -7, 4, -1},
                               {0, 1, 2, -1, 0}});
    // 7x7 diamonds, alphabets [0,0,1,2,6,7,17,20] and [0,0,0,1,3,6,20,36].
    if (key == "D7A")
        return Tensor::matrix({{0, 0, 1, 2, -1, 0, 0},
                               {0, 2, 6, 7, -6, 2, 0},
                               {1, 6, 16, 17, -16, 6, -1},
                               {2, 7, 17, 20, -17, 7, -2},
                               {-1, -6, -16, -17, 16, -6, 1},
                               {0, 2, 6, 7, -6, 2, 0},
                               {0, 0, -1, -2, 1, 0, 0}});
    if (key == "D7B")
        return Tensor::matrix({{0, 0, 0, 1, 0, 0, 0},
                               {0, 0, 3, 6, -3, 0, 0},
                               {0, 3, 12, 20, -12, 3, 0},
                               {1, 6, 20, 36, -20, 6, -1},
                               {0, -3, -12, -20, 12, -3, 0},
                               {0, 0, 3, 6, -3, 0, 0},
                               {0, 0, 0, -1, 0, 0, 0}});
    throw DomainError("unknown catalog key: " + key);
}

namespace {

Tensor diamond5_raw(const std::vector<std::int64_t>& al)
{
    auto [a, b, c, k, d, e] = std::array<std::int64_t, 6>{al[0], al[1], al[2], al[3], al[4], al[5]};
    return Tensor::matrix({{a, b, c, -b, a},
                           {b, k, d, -k, b},
                           {c, d, e, -d, c},
                           {-b, -k, -d, k, -b},
                           {a, b, c, -b, a}});
}

Tensor diamond7_raw(const std::vector<std::int64_t>& al)
{
    auto [a, b, c, d, e, f, g, h] =
        std::array<std::int64_t, 8>{al[0], al[1], al[2], al[3], al[4], al[5], al[6], al[7]};
    const std::int64_t c2 = 2 * c, cf = 2 * (c + f);
    return Tensor::matrix({{a, b, c, d, -c, b, -a},
                           {b, c2, e, f, -e, c2, -b},
                           {c, e, cf, g, -cf, e, -c},
                           {d, f, g, h, -g, f, -d},
                           {-c, -e, -cf, -g, cf, -e, c},
                           {b, c2, e, f, -e, c2, -b},
                           {-a, -b, -c, -d, c, -b, a}});
}

AlphabetSolution make_solution(std::vector<std::int64_t> alphabet, const CorrelationResult& c)
{
    AlphabetSolution s;
    s.alphabet = std::move(alphabet);
    s.C_edge = c.edge ? std::llabs(c.edge->i) : 0;
    s.classification = is_canonical(c) ? Classification::canonical : Classification::quasi;
    return s;
}

}  // namespace

Tensor build_diamond(int size, const std::vector<std::int64_t>& alphabet, bool verify)
{
    Tensor t;
    if (size == 5) {
        if (alphabet.size() != 6) throw DomainError("5x5 diamond needs 6 alphabet values [a,b,c,k,d,e]");
        t = diamond5_raw(alphabet);
    } else if (size == 7) {
        if (alphabet.size() != 8) throw DomainError("7x7 diamond needs 8 alphabet values [a,b,c,d,e,f,g,h]");
        t = diamond7_raw(alphabet);
    } else {
        throw DomainError("diamond template size must be 5 or 7");
    }
    if (verify && !is_quasi(correlate(t, t))) throw DomainError("alphabet fails the quasi constraint");
    return t;
}

std::vector<AlphabetSolution> diamond5_solve(const Diamond5Search& search)
{
    if (search.prefix.size() != 4) throw DomainError("diamond5 prefix must be [a,b,c,k]");
    if (search.d_max < search.d_min || search.e_max < search.e_min) throw DomainError("empty search bounds");
    std::vector<AlphabetSolution> out;
    std::vector<std::int64_t> al = search.prefix;
    al.resize(6);
    for (std::int64_t d = search.d_min; d <= search.d_max; ++d) {
        for (std::int64_t e = search.e_min; e <= search.e_max; ++e) {
            al[4] = d;
            al[5] = e;
            Tensor t = diamond5_raw(al);
            CorrelationResult c = correlate(t, t);
            if (is_quasi(c)) out.push_back(make_solution(al, c));
        }
    }
    return out;
}

std::vector<AlphabetSolution> diamond7_solve(const Diamond7Search& search)
{
    if (search.e < 1) throw DomainError("diamond7 search needs e >= 1");
    if (search.f_min < 1 || search.f_max < search.f_min) throw DomainError("diamond7 search needs 1 <= f_min <= f_max");
    constexpr int n = 7, w = 2 * n - 1, centre = (w * w) / 2;

    // The zero pattern is fixed for a = b = c = 0, d = 1 and e, f, g, h >= 1,
    // so the edge cells are too.
    std::vector<std::int64_t> probe{0, 0, 0, 1, search.e, 1, 1, 1};
    Tensor pt = diamond7_raw(probe);
    const std::vector<char> edge_mask = correlate(pt, pt).edge_mask;

    std::vector<AlphabetSolution> out;
    std::array<std::int64_t, n * n> a{};
    std::array<std::int64_t, w * w> alpha{}, beta{};
    for (std::int64_t f = search.f_min; f <= search.f_max; ++f) {
        for (std::int64_t g = 1; g <= search.g_max; ++g) {
            std::vector<std::int64_t> al{0, 0, 0, 1, search.e, f, g, 0};
            Tensor t0 = diamond7_raw(al);
            std::copy(t0.ints().begin(), t0.ints().end(), a.begin());

            // alpha = correlation with h = 0; off-peak, h enters as h * (A(c+s) + A(c-s)).
            alpha.fill(0);
            for (int i0 = 0; i0 < n; ++i0)
                for (int j0 = 0; j0 < n; ++j0) {
                    std::int64_t x = a[i0 * n + j0];
                    if (!x) continue;
                    for (int i1 = 0; i1 < n; ++i1)
                        for (int j1 = 0; j1 < n; ++j1)
                            alpha[(i0 - i1 + n - 1) * w + (j0 - j1 + n - 1)] += x * a[i1 * n + j1];
                }
            for (int si = 0; si < w; ++si)
                for (int sj = 0; sj < w; ++sj) {
                    int di = si - (n - 1), dj = sj - (n - 1);
                    std::int64_t v = 0;
                    if (std::abs(di) <= 3 && std::abs(dj) <= 3) {
                        v += a[(3 + di) * n + (3 + dj)];
                        v += a[(3 - di) * n + (3 - dj)];
                    }
                    beta[si * w + sj] = v;
                }

            std::int64_t edge = 0;
            bool edge_depends_on_h = false;
            for (int s = 0; s < w * w; ++s) {
                if (!edge_mask[s]) continue;
                edge = std::max<std::int64_t>(edge, std::llabs(alpha[s]));
                edge_depends_on_h = edge_depends_on_h || beta[s] != 0;
            }
            if (edge_depends_on_h) throw NumericalError("edge correlation depends on h; template assumption broken");

            std::int64_t lo = 1, hi = search.h_max;
            for (int s = 0; s < w * w && lo <= hi; ++s) {
                if (s == centre) continue;
                if (beta[s] == 0) {
                    if (std::llabs(alpha[s]) > edge) lo = hi + 1;
                    continue;
                }
                std::int64_t l, u;
                if (beta[s] > 0) {
                    l = ceil_div(-edge - alpha[s], beta[s]);
                    u = floor_div(edge - alpha[s], beta[s]);
                } else {
                    l = ceil_div(edge - alpha[s], beta[s]);
                    u = floor_div(-edge - alpha[s], beta[s]);
                }
                lo = std::max(lo, l);
                hi = std::min(hi, u);
            }
            for (std::int64_t h = lo; h <= hi; ++h) {
                al[7] = h;
                Tensor t = diamond7_raw(al);
                CorrelationResult c = correlate(t, t);
                if (!is_quasi(c)) throw NumericalError("diamond7 interval solution failed verification");
                AlphabetSolution sol = make_solution(al, c);
                sol.closed_form = search.e == 3 && f % 2 == 0 && g == f * f / 2 + 1 && h == f * f * f / 8 + f;
                out.push_back(std::move(sol));
            }
        }
    }
    return out;
}

Tensor tensor_huffman(const std::vector<HuffmanSpec>& specs)
{
    std::vector<Tensor> factors;
    for (const auto& s : specs) {
        Tensor t = generate(s);
        if (t.rank() != 1) throw DomainError("tensor_huffman factors must be 1D");
        factors.push_back(std::move(t));
    }
    return outer_product(factors);
}

Tensor generate(const HuffmanSpec& spec)
{
    switch (spec.family) {
    case Family::fibonacci_binet: return fibonacci_huffman(spec.N, spec.b);
    case Family::h5_family: return h5_family(spec.n, spec.odd);
    case Family::catalog:
    case Family::even_length: return catalog(spec.key);
    case Family::outer_product: {
        if (spec.dims < 1) throw DomainError("outer_product needs dims >= 1");
        Tensor seed = spec.key.empty() ? fibonacci_huffman(spec.N, spec.b) : catalog(spec.key);
        if (seed.rank() != 1) throw DomainError("outer_product seed must be 1D");
        return outer_product(std::vector<Tensor>(spec.dims, seed));
    }
    case Family::diamond5: return build_diamond(5, spec.alphabet);
    case Family::diamond7: return build_diamond(7, spec.alphabet);
    }
    throw DomainError("unhandled family");
}

}  // namespace huff
