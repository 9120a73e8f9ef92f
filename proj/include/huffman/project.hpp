#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "huffman/metrics.hpp"
#include "huffman/tensor.hpp"

namespace huff {

// Discrete direction p:q (2D) or p:q:r (3D). x is the last axis, y the one
// before it, z axis 0 of a 3D array.
struct ProjectionDirection {
    std::int64_t p = 0;
    std::int64_t q = 1;
    std::optional<std::int64_t> r;

    std::string to_string() const;
    // "p:q" or "p:q:r"
    static ProjectionDirection parse(const std::string& text);
    void validate() const;  // throws DomainError unless coprime and non-zero
};

// Mojette projection of a 2D array. Bin t = q*x - p*y, shifted so the
// smallest bin is 0. Length is |q|(cols-1) + |p|(rows-1) + 1.
Tensor project(const Tensor& a, const ProjectionDirection& dir);

// 3D projection onto a 2D bin lattice. With g = gcd(p, q) > 0 and
// alpha*p + beta*q = g, the bins are
//   u = (q x - p y)/g,   v = g z - r (alpha x + beta y),
// stored as out[u - umin][v - vmin]. Direction 0:0:1 uses out[y][x].
Tensor project3(const Tensor& a, const ProjectionDirection& dir);

// Alternate signs (+, -, +, ...) along axis 0.
Tensor twin(const Tensor& a);

struct FamilyMember {
    ProjectionDirection dir;
    Tensor array;
    QualityReport report;
};

// All primitive directions with |p| + |q| <= max_order, one per line pair
// (p > 0, or p = 0 and q = 1), sorted by order then p then q.
std::vector<ProjectionDirection> default_directions(std::int64_t max_order = 5);

// Outer product of the seed with itself, projected along each direction.
std::vector<FamilyMember> spectrally_equivalent_family(const Tensor& seed,
                                                       const std::vector<ProjectionDirection>& dirs);

}  // namespace huff
