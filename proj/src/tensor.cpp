#include "huffman/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "huffman/error.hpp"

namespace huff {

std::size_t shape_size(const Shape& shape)
{
    if (shape.empty()) return 0;
    std::size_t n = 1;
    for (auto e : shape) n *= e;
    return n;
}

std::string shape_string(const Shape& shape)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
    return os.str();
}

static void check_shape(const Shape& shape)
{
    if (shape.empty()) throw DomainError("tensor shape must have at least one axis");
    for (auto e : shape)
        if (e == 0) throw DomainError("tensor extents must be >= 1");
}

Tensor Tensor::zeros(const Shape& shape, Mode mode)
{
    check_shape(shape);
    Tensor t;
    t.mode_ = mode;
    t.shape_ = shape;
    if (mode == Mode::integer)
        t.ints_.assign(shape_size(shape), 0);
    else
        t.reals_.assign(shape_size(shape), 0.0);
    return t;
}

Tensor Tensor::integers(const Shape& shape, std::vector<std::int64_t> values)
{
    check_shape(shape);
    if (values.size() != shape_size(shape))
        throw DomainError("element count " + std::to_string(values.size()) + " does not match shape " +
                          shape_string(shape));
    Tensor t;
    t.mode_ = Mode::integer;
    t.shape_ = shape;
    t.ints_ = std::move(values);
    return t;
}

Tensor Tensor::reals(const Shape& shape, std::vector<double> values)
{
    check_shape(shape);
    if (values.size() != shape_size(shape))
        throw DomainError("element count " + std::to_string(values.size()) + " does not match shape " +
                          shape_string(shape));
    Tensor t;
    t.mode_ = Mode::real;
    t.shape_ = shape;
    t.reals_ = std::move(values);
    return t;
}

Tensor Tensor::vector(std::initializer_list<std::int64_t> values)
{
    return integers({values.size()}, std::vector<std::int64_t>(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
{
    std::vector<std::int64_t> v;
    std::size_t cols = rows.size() ? rows.begin()->size() : 0;
    for (auto& r : rows) {
        if (r.size() != cols) throw DomainError("ragged matrix literal");
        v.insert(v.end(), r.begin(), r.end());
    }
    return integers({rows.size(), cols}, std::move(v));
}

std::size_t Tensor::size() const { return shape_size(shape_); }

std::vector<std::int64_t>& Tensor::ints()
{
    if (mode_ != Mode::integer) throw DomainError("integer access on a real tensor");
    return ints_;
}

const std::vector<std::int64_t>& Tensor::ints() const
{
    if (mode_ != Mode::integer) throw DomainError("integer access on a real tensor");
    return ints_;
}

std::vector<double>& Tensor::reals()
{
    if (mode_ != Mode::real) throw DomainError("real access on an integer tensor");
    return reals_;
}

const std::vector<double>& Tensor::reals() const
{
    if (mode_ != Mode::real) throw DomainError("real access on an integer tensor");
    return reals_;
}

double Tensor::value(std::size_t flat) const
{
    return mode_ == Mode::integer ? static_cast<double>(ints_[flat]) : reals_[flat];
}

bool Tensor::is_zero(std::size_t flat) const
{
    return mode_ == Mode::integer ? ints_[flat] == 0 : reals_[flat] == 0.0;
}

std::vector<std::size_t> Tensor::strides() const
{
    std::vector<std::size_t> s(shape_.size(), 1);
    for (std::size_t d = shape_.size(); d-- > 1;) s[d - 1] = s[d] * shape_[d];
    return s;
}

std::size_t Tensor::flat_index(const std::vector<std::size_t>& idx) const
{
    if (idx.size() != shape_.size()) throw DomainError("index rank mismatch");
    std::size_t f = 0;
    for (std::size_t d = 0; d < idx.size(); ++d) {
        if (idx[d] >= shape_[d]) throw DomainError("index out of range");
        f = f * shape_[d] + idx[d];
    }
    return f;
}

std::vector<std::size_t> Tensor::unravel(std::size_t flat) const
{
    std::vector<std::size_t> idx(shape_.size());
    for (std::size_t d = shape_.size(); d-- > 0;) {
        idx[d] = flat % shape_[d];
        flat /= shape_[d];
    }
    return idx;
}

Tensor Tensor::as_real() const
{
    if (mode_ == Mode::real) return *this;
    std::vector<double> v(ints_.begin(), ints_.end());
    return reals(shape_, std::move(v));
}

Tensor Tensor::rounded() const
{
    if (mode_ == Mode::integer) return *this;
    std::vector<std::int64_t> v(reals_.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double r = std::round(reals_[i]);
        if (!std::isfinite(r) || std::fabs(r) > 9.2e18) throw NumericalError("value out of integer range");
        v[i] = static_cast<std::int64_t>(r);
    }
    return integers(shape_, std::move(v));
}

Tensor Tensor::reshaped(const Shape& shape) const
{
    if (shape_size(shape) != size()) throw DomainError("reshape changes element count");
    Tensor t = *this;
    t.shape_ = shape;
    return t;
}

bool Tensor::operator==(const Tensor& other) const
{
    return mode_ == other.mode_ && shape_ == other.shape_ && ints_ == other.ints_ && reals_ == other.reals_;
}

std::string Tensor::describe() const
{
    std::ostringstream os;
    os << (is_integer() ? "int" : "real") << "[" << shape_string(shape_) << "]{";
    for (std::size_t i = 0; i < size() && i < 32; ++i) os << (i ? "," : "") << value(i);
    if (size() > 32) os << ",...";
    os << "}";
    return os.str();
}

namespace {

void require_same_shape(const Tensor& a, const Tensor& b)
{
    if (a.shape() != b.shape())
        throw DomainError("shape mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
}

template <class IntOp, class RealOp>
Tensor binary(const Tensor& a, const Tensor& b, IntOp iop, RealOp rop)
{
    require_same_shape(a, b);
    if (a.is_integer() && b.is_integer()) {
        std::vector<std::int64_t> v(a.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!iop(a.ints()[i], b.ints()[i], v[i])) throw NumericalError("integer overflow in elementwise op");
        }
        return Tensor::integers(a.shape(), std::move(v));
    }
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rop(a.value(i), b.value(i));
    return Tensor::reals(a.shape(), std::move(v));
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b)
{
    return binary(
        a, b, [](std::int64_t x, std::int64_t y, std::int64_t& r) { return !__builtin_add_overflow(x, y, &r); },
        [](double x, double y) { return x + y; });
}

Tensor subtract(const Tensor& a, const Tensor& b)
{
    return binary(
        a, b, [](std::int64_t x, std::int64_t y, std::int64_t& r) { return !__builtin_sub_overflow(x, y, &r); },
        [](double x, double y) { return x - y; });
}

Tensor multiply(const Tensor& a, const Tensor& b)
{
    return binary(
        a, b, [](std::int64_t x, std::int64_t y, std::int64_t& r) { return !__builtin_mul_overflow(x, y, &r); },
        [](double x, double y) { return x * y; });
}

Tensor negate(const Tensor& a)
{
    if (a.is_integer()) {
        std::vector<std::int64_t> v(a.ints());
        for (auto& x : v) x = -x;
        return Tensor::integers(a.shape(), std::move(v));
    }
    std::vector<double> v(a.reals());
    for (auto& x : v) x = -x;
    return Tensor::reals(a.shape(), std::move(v));
}

Tensor scale(const Tensor& a, double factor)
{
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.value(i) * factor;
    return Tensor::reals(a.shape(), std::move(v));
}

Tensor add_scalar(const Tensor& a, double value)
{
    if (a.is_integer() && value == std::round(value)) {
        std::vector<std::int64_t> v(a.ints());
        auto k = static_cast<std::int64_t>(value);
        for (auto& x : v) x += k;
        return Tensor::integers(a.shape(), std::move(v));
    }
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.value(i) + value;
    return Tensor::reals(a.shape(), std::move(v));
}

Tensor crop(const Tensor& a, const Shape& offset, const Shape& extents)
{
    if (offset.size() != a.rank() || extents.size() != a.rank()) throw DomainError("crop rank mismatch");
    for (std::size_t d = 0; d < a.rank(); ++d)
        if (offset[d] + extents[d] > a.extent(d)) throw DomainError("crop window exceeds tensor");
    Tensor out = Tensor::zeros(extents, a.mode());
    auto as = a.strides();
    for (std::size_t f = 0; f < out.size(); ++f) {
        auto idx = out.unravel(f);
        std::size_t src = 0;
        for (std::size_t d = 0; d < idx.size(); ++d) src += (idx[d] + offset[d]) * as[d];
        if (a.is_integer())
            out.ints()[f] = a.ints()[src];
        else
            out.reals()[f] = a.reals()[src];
    }
    return out;
}

Tensor crop_center(const Tensor& a, const Shape& extents)
{
    if (extents.size() != a.rank()) throw DomainError("crop rank mismatch");
    Shape off(a.rank());
    for (std::size_t d = 0; d < a.rank(); ++d) {
        if (extents[d] > a.extent(d)) throw DomainError("crop window exceeds tensor");
        off[d] = (a.extent(d) - extents[d]) / 2;
    }
    return crop(a, off, extents);
}

Tensor add_patch(const Tensor& base, const Tensor& patch, const Shape& offset)
{
    if (patch.rank() != base.rank() || offset.size() != base.rank()) throw DomainError("patch rank mismatch");
    for (std::size_t d = 0; d < base.rank(); ++d)
        if (offset[d] + patch.extent(d) > base.extent(d)) throw DomainError("patch does not fit");
    bool exact = base.is_integer() && patch.is_integer();
    Tensor out = exact ? base : base.as_real();
    auto bs = base.strides();
    for (std::size_t f = 0; f < patch.size(); ++f) {
        auto idx = patch.unravel(f);
        std::size_t dst = 0;
        for (std::size_t d = 0; d < idx.size(); ++d) dst += (idx[d] + offset[d]) * bs[d];
        if (exact)
            out.ints()[dst] += patch.ints()[f];
        else
            out.reals()[dst] += patch.value(f);
    }
    return out;
}

double sum(const Tensor& a)
{
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.value(i);
    return static_cast<double>(s);
}

double max_value(const Tensor& a)
{
    double m = -INFINITY;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a.value(i));
    return m;
}

double min_value(const Tensor& a)
{
    double m = INFINITY;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, a.value(i));
    return m;
}

double max_abs(const Tensor& a)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.value(i)));
    return m;
}

double max_abs_difference(const Tensor& a, const Tensor& b)
{
    require_same_shape(a, b);
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.value(i) - b.value(i)));
    return m;
}

}  // namespace huff
