#pragma once

#include <iosfwd>
#include <string>

#include "huffman/tensor.hpp"

namespace huff {

// Text format: first line extents, then row-major values (one last-axis row
// per line). Integers verbatim, reals with 17 significant digits.
void write_tensor(std::ostream& os, const Tensor& t);
Tensor read_tensor(std::istream& is);
void save_tensor(const std::string& path, const Tensor& t);
Tensor load_tensor(const std::string& path);

// Binary PGM (P5), 8-bit when maxval <= 255 else 16-bit big endian. With
// rescale the value range is mapped linearly onto [0, maxval]; otherwise
// values are rounded and must already lie in [0, maxval].
void save_pgm(const std::string& path, const Tensor& image, unsigned maxval = 255, bool rescale = false);
// Reads P5 or P2; returns an integer tensor of shape {rows, cols}.
Tensor load_pgm(const std::string& path);

}  // namespace huff
