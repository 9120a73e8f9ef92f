#include "huffman/tensor_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "huffman/error.hpp"

namespace huff {

void write_tensor(std::ostream& os, const Tensor& t)
{
    if (t.empty()) throw DomainError("cannot write an empty tensor");
    for (std::size_t d = 0; d < t.rank(); ++d) os << (d ? " " : "") << t.extent(d);
    os << "\n";
    const std::size_t row = t.extent(t.rank() - 1);
    os << std::setprecision(17);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.is_integer())
            os << t.ints()[i];
        else
            os << t.reals()[i];
        os << ((i + 1) % row == 0 ? "\n" : " ");
    }
}

Tensor read_tensor(std::istream& is)
{
    std::string header;
    while (std::getline(is, header))
        if (header.find_first_not_of(" \t\r") != std::string::npos) break;
    std::istringstream hs(header);
    Shape shape;
    long long e;
    while (hs >> e) {
        if (e < 1) throw IoError("tensor extents must be >= 1");
        shape.push_back(static_cast<std::size_t>(e));
    }
    if (shape.empty()) throw IoError("missing tensor header line");

    std::vector<std::string> tokens;
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    if (tokens.size() != shape_size(shape))
        throw IoError("expected " + std::to_string(shape_size(shape)) + " values, found " +
                      std::to_string(tokens.size()));

    bool real = false;
    for (const auto& s : tokens)
        if (s.find_first_of(".eEnN") != std::string::npos) real = true;

    try {
        if (real) {
            std::vector<double> v;
            v.reserve(tokens.size());
            for (const auto& s : tokens) v.push_back(std::stod(s));
            return Tensor::reals(shape, std::move(v));
        }
        std::vector<std::int64_t> v;
        v.reserve(tokens.size());
        for (const auto& s : tokens) v.push_back(std::stoll(s));
        return Tensor::integers(shape, std::move(v));
    } catch (const std::logic_error& ex) {
        throw IoError(std::string("malformed tensor value: ") + ex.what());
    }
}

void save_tensor(const std::string& path, const Tensor& t)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_tensor(os, t);
    if (!os) throw IoError("write failed: " + path);
}

Tensor load_tensor(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_tensor(is);
}

void save_pgm(const std::string& path, const Tensor& image, unsigned maxval, bool rescale)
{
    if (image.rank() != 2) throw DomainError("PGM needs a 2D tensor");
    if (maxval == 0 || maxval > 65535) throw DomainError("PGM maxval must be in [1, 65535]");
    const double lo = min_value(image), hi = max_value(image);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << "P5\n" << image.extent(1) << " " << image.extent(0) << "\n" << maxval << "\n";
    for (std::size_t i = 0; i < image.size(); ++i) {
        double v = image.value(i);
        if (rescale) v = hi > lo ? (v - lo) / (hi - lo) * maxval : 0.0;
        long q = std::lround(v);
        if (q < 0 || q > static_cast<long>(maxval))
            throw DomainError("pixel value " + std::to_string(v) + " outside [0, " + std::to_string(maxval) + "]");
        if (maxval > 255) os.put(static_cast<char>((q >> 8) & 0xff));
        os.put(static_cast<char>(q & 0xff));
    }
    if (!os) throw IoError("write failed: " + path);
}

namespace {

void skip_ws_and_comments(std::istream& is)
{
    for (;;) {
        int c = is.peek();
        if (c == '#') {
            is.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        } else if (std::isspace(c)) {
            is.get();
        } else {
            return;
        }
    }
}

long read_header_int(std::istream& is)
{
    skip_ws_and_comments(is);
    long v;
    if (!(is >> v)) throw IoError("malformed PGM header");
    return v;
}

}  // namespace

Tensor load_pgm(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::string magic;
    is >> magic;
    if (magic != "P5" && magic != "P2") throw IoError("not a PGM file: " + path);
    long w = read_header_int(is), h = read_header_int(is), maxval = read_header_int(is);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw IoError("bad PGM header in " + path);
    std::vector<std::int64_t> v(static_cast<std::size_t>(w * h));
    if (magic == "P2") {
        for (auto& x : v)
            if (!(is >> x)) throw IoError("truncated PGM: " + path);
    } else {
        is.get();  // single whitespace after maxval
        for (auto& x : v) {
            int hi = 0, lo = is.get();
            if (maxval > 255) {
                hi = lo;
                lo = is.get();
            }
            if (!is) throw IoError("truncated PGM: " + path);
            x = (hi << 8) | lo;
        }
    }
    return Tensor::integers({static_cast<std::size_t>(h), static_cast<std::size_t>(w)}, std::move(v));
}

}  // namespace huff
