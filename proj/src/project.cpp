#include "huffman/project.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "huffman/error.hpp"
#include "huffman/lattice.hpp"

namespace huff {

namespace {

std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c)
{
    return std::gcd(std::gcd(a, b), c);
}

// Returns g = gcd(a, b) >= 0 and x, y with a x + b y = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y)
{
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        std::int64_t q = a / b;
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

template <class T>
void accumulate_bin(T& dst, T v)
{
    if constexpr (std::is_same_v<T, std::int64_t>) {
        if (__builtin_add_overflow(dst, v, &dst)) throw NumericalError("projection overflows 64-bit range");
    } else {
        dst += v;
    }
}

}  // namespace

std::string ProjectionDirection::to_string() const
{
    std::ostringstream os;
    os << p << ":" << q;
    if (r) os << ":" << *r;
    return os.str();
}

ProjectionDirection ProjectionDirection::parse(const std::string& text)
{
    std::vector<std::int64_t> v;
    std::stringstream ss(text);
    std::string item;
    try {
        while (std::getline(ss, item, ':')) v.push_back(std::stoll(item));
    } catch (const std::logic_error&) {
        throw DomainError("malformed direction: " + text);
    }
    if (v.size() != 2 && v.size() != 3) throw DomainError("direction must be p:q or p:q:r, got " + text);
    ProjectionDirection d{v[0], v[1], std::nullopt};
    if (v.size() == 3) d.r = v[2];
    d.validate();
    return d;
}

void ProjectionDirection::validate() const
{
    std::int64_t g = gcd3(p, q, r.value_or(0));
    if (g == 0) throw DomainError("direction must not be all zero");
    if (g != 1) throw DomainError("direction " + to_string() + " is not coprime");
}

Tensor project(const Tensor& a, const ProjectionDirection& dir)
{
    if (a.rank() != 2) throw DomainError("project needs a 2D array");
    if (dir.r) throw DomainError("project takes a 2-component direction");
    dir.validate();
    const std::int64_t rows = a.extent(0), cols = a.extent(1);
    const std::int64_t tmin = std::min<std::int64_t>(0, dir.q * (cols - 1)) + std::min<std::int64_t>(0, -dir.p * (rows - 1));
    const std::size_t len = std::llabs(dir.q) * (cols - 1) + std::llabs(dir.p) * (rows - 1) + 1;
    Tensor out = Tensor::zeros({len}, a.mode());
    for (std::int64_t y = 0; y < rows; ++y)
        for (std::int64_t x = 0; x < cols; ++x) {
            std::size_t t = dir.q * x - dir.p * y - tmin;
            std::size_t f = y * cols + x;
            if (a.is_integer())
                accumulate_bin(out.ints()[t], a.ints()[f]);
            else
                accumulate_bin(out.reals()[t], a.reals()[f]);
        }
    return out;
}

Tensor project3(const Tensor& a, const ProjectionDirection& dir)
{
    if (a.rank() != 3) throw DomainError("project3 needs a 3D array");
    if (!dir.r) throw DomainError("project3 takes a 3-component direction");
    dir.validate();
    const std::int64_t nz = a.extent(0), ny = a.extent(1), nx = a.extent(2);
    std::int64_t L1[3], L2[3];  // coefficients on (x, y, z)
    std::int64_t alpha = 0, beta = 0;
    std::int64_t g = ext_gcd(dir.p, dir.q, alpha, beta);
    if (g == 0) {
        L1[0] = 0, L1[1] = 1, L1[2] = 0;
        L2[0] = 1, L2[1] = 0, L2[2] = 0;
    } else {
        L1[0] = dir.q / g, L1[1] = -dir.p / g, L1[2] = 0;
        L2[0] = -alpha * *dir.r, L2[1] = -beta * *dir.r, L2[2] = g;
    }
    auto range = [&](const std::int64_t* L, std::int64_t& lo) {
        std::int64_t hi = 0;
        lo = 0;
        const std::int64_t ext[3] = {nx - 1, ny - 1, nz - 1};
        for (int k = 0; k < 3; ++k) {
            lo += std::min<std::int64_t>(0, L[k] * ext[k]);
            hi += std::max<std::int64_t>(0, L[k] * ext[k]);
        }
        return static_cast<std::size_t>(hi - lo + 1);
    };
    std::int64_t umin, vmin;
    std::size_t nu = range(L1, umin), nv = range(L2, vmin);
    Tensor out = Tensor::zeros({nu, nv}, a.mode());
    for (std::int64_t z = 0; z < nz; ++z)
        for (std::int64_t y = 0; y < ny; ++y)
            for (std::int64_t x = 0; x < nx; ++x) {
                std::size_t u = L1[0] * x + L1[1] * y + L1[2] * z - umin;
                std::size_t v = L2[0] * x + L2[1] * y + L2[2] * z - vmin;
                std::size_t f = (z * ny + y) * nx + x, o = u * nv + v;
                if (a.is_integer())
                    accumulate_bin(out.ints()[o], a.ints()[f]);
                else
                    accumulate_bin(out.reals()[o], a.reals()[f]);
            }
    return out;
}

Tensor twin(const Tensor& a)
{
    if (a.empty()) return a;
    Tensor out = a;
    const std::size_t stride = a.strides()[0];
    for (std::size_t f = 0; f < a.size(); ++f) {
        if ((f / stride) % 2 == 0) continue;
        if (out.is_integer())
            out.ints()[f] = -out.ints()[f];
        else
            out.reals()[f] = -out.reals()[f];
    }
    return out;
}

std::vector<ProjectionDirection> default_directions(std::int64_t max_order)
{
    std::vector<ProjectionDirection> dirs;
    for (std::int64_t n = 1; n <= max_order; ++n)
        for (std::int64_t p = 0; p <= n; ++p) {
            std::int64_t q = n - p;
            if (std::gcd(p, q) != 1) continue;
            if (p > 0 && q > 0) dirs.push_back({p, -q, std::nullopt});
            dirs.push_back({p, q, std::nullopt});
        }
    return dirs;
}

std::vector<FamilyMember> spectrally_equivalent_family(const Tensor& seed, const std::vector<ProjectionDirection>& dirs)
{
    if (seed.rank() != 1) throw DomainError("family seed must be 1D");
    Tensor parent = outer_product({seed, seed});
    std::vector<FamilyMember> out;
    for (const auto& d : dirs) {
        Tensor p = project(parent, d);
        out.push_back({d, p, classify(p)});
    }
    return out;
}

}  // namespace huff
