#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "huffman/metrics.hpp"
#include "huffman/tensor.hpp"

namespace huff {

enum class Family { fibonacci_binet, h5_family, catalog, outer_product, diamond5, diamond7, even_length };

std::string to_string(Family f);
Family parse_family(const std::string& name);

// Recipe that regenerates an array bit-exactly. Text form is flat key=value
// pairs, e.g. "family=fibonacci_binet N=15 b=2".
struct HuffmanSpec {
    Family family = Family::fibonacci_binet;
    std::size_t N = 7;                    // fibonacci_binet, outer_product seed
    std::int64_t b = 2;                   // up-scaling, even
    std::int64_t n = 1;                   // h5_family
    bool odd = false;                     // h5_family odd variant
    std::vector<std::int64_t> alphabet;   // diamond5 (6 values) / diamond7 (8 values)
    std::string key;                      // catalog / even_length / outer_product seed
    std::size_t dims = 2;                 // outer_product

    std::string to_text() const;
    static HuffmanSpec parse(const std::string& text);
};

Tensor generate(const HuffmanSpec& spec);

// Generalised Fibonacci numbers F_{k+1} = m F_k + F_{k-1}, F_0 = 0, F_1 = 1,
// for signed k (F_{-k} = (-1)^{k+1} F_k).
std::int64_t generalized_fibonacci(std::int64_t k, std::int64_t m);

// Canonical sequence of length N = 4n+3 with up-scaling b (even).
Tensor fibonacci_huffman(std::size_t N, std::int64_t b);

// [1, 2n, 2n^2, -2n, 1] (canonical) or, with odd, [1, 2n+1, 2n(n+1), -(2n+1), 1] (quasi).
Tensor h5_family(std::int64_t n, bool odd = false);

Tensor catalog(const std::string& key);
std::vector<std::string> catalog_keys();

struct AlphabetSolution {
    std::vector<std::int64_t> alphabet;
    std::int64_t C_edge = 0;
    Classification classification = Classification::other;
    bool closed_form = false;  // diamond7 e=3 rows from g = f^2/2 + 1, h = f^3/8 + f
};

// 5x5 template over [a, b, c, k, d, e]:
//   a  b  c -b  a
//   b  k  d -k  b
//   c  d  e -d  c
//  -b -k -d  k -b
//   a  b  c -b  a
struct Diamond5Search {
    std::vector<std::int64_t> prefix{0, 1, 4, 8};  // a, b, c, k
    std::int64_t d_min = -64, d_max = 64;
    std::int64_t e_min = -160, e_max = 160;
};
std::vector<AlphabetSolution> diamond5_solve(const Diamond5Search& search = {});

// 7x7 template over [a, b, c, d, e, f, g, h]:
//   a   b   c       d  -c       b  -a
//   b   2c  e       f  -e       2c -b
//   c   e   2(c+f)  g  -2(c+f)  e  -c
//   d   f   g       h  -g       f  -d
//  -c  -e  -2(c+f) -g   2(c+f) -e   c
//   b   2c  e       f  -e       2c -b
//  -a  -b  -c      -d   c      -b   a
// diamond7_solve fixes a = b = c = 0, d = 1 and searches f, g, h >= 1.
struct Diamond7Search {
    std::int64_t e = 3;
    std::int64_t f_min = 1, f_max = 32;
    std::int64_t g_max = 4096;
    std::int64_t h_max = 65536;
};
std::vector<AlphabetSolution> diamond7_solve(const Diamond7Search& search);

// Materialise a 5x5 (6-value alphabet) or 7x7 (8-value alphabet) array.
// With verify, an alphabet that is not quasi is rejected.
Tensor build_diamond(int size, const std::vector<std::int64_t>& alphabet, bool verify = true);

// nD outer product of 1D specs.
Tensor tensor_huffman(const std::vector<HuffmanSpec>& specs);

}  // namespace huff
