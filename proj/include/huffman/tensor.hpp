#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace huff {

using Shape = std::vector<std::size_t>;

enum class Mode { integer, real };

// Dense row-major n-dimensional array. Holds either exact 64-bit integers or
// doubles; the two never mix and conversion is always explicit.
class Tensor {
public:
    Tensor() = default;  // empty, rank 0

    static Tensor zeros(const Shape& shape, Mode mode);
    static Tensor integers(const Shape& shape, std::vector<std::int64_t> values);
    static Tensor reals(const Shape& shape, std::vector<double> values);
    static Tensor vector(std::initializer_list<std::int64_t> values);
    static Tensor matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    Mode mode() const { return mode_; }
    bool is_integer() const { return mode_ == Mode::integer; }
    bool empty() const { return shape_.empty(); }
    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const;

    std::vector<std::int64_t>& ints();
    const std::vector<std::int64_t>& ints() const;
    std::vector<double>& reals();
    const std::vector<double>& reals() const;

    // Element as double, whatever the mode.
    double value(std::size_t flat) const;
    bool is_zero(std::size_t flat) const;

    std::size_t flat_index(const std::vector<std::size_t>& idx) const;
    std::vector<std::size_t> unravel(std::size_t flat) const;
    std::vector<std::size_t> strides() const;

    Tensor as_real() const;
    // Round-half-away-from-zero into integer mode. Integer tensors copy.
    Tensor rounded() const;
    Tensor reshaped(const Shape& shape) const;

    bool operator==(const Tensor& other) const;
    bool operator!=(const Tensor& other) const { return !(*this == other); }

    std::string describe() const;

private:
    Mode mode_ = Mode::integer;
    Shape shape_;
    std::vector<std::int64_t> ints_;
    std::vector<double> reals_;
};

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Elementwise helpers. Binary ops require equal shapes; integer op integer
// stays integer, anything involving a real becomes real.
Tensor add(const Tensor& a, const Tensor& b);
Tensor subtract(const Tensor& a, const Tensor& b);
Tensor negate(const Tensor& a);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double value);
Tensor multiply(const Tensor& a, const Tensor& b);

// Sub-block starting at offset with the given extents.
Tensor crop(const Tensor& a, const Shape& offset, const Shape& extents);
// Central crop to extents (offset = (a - extents) / 2 per axis).
Tensor crop_center(const Tensor& a, const Shape& extents);
// Copy of base with patch added at offset; patch must fit.
Tensor add_patch(const Tensor& base, const Tensor& patch, const Shape& offset);

double sum(const Tensor& a);
double max_value(const Tensor& a);
double min_value(const Tensor& a);
double max_abs(const Tensor& a);
double max_abs_difference(const Tensor& a, const Tensor& b);

}  // namespace huff
