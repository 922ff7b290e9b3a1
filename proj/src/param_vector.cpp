#include "pfedgame/param_vector.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace pfedgame {

std::size_t TensorShape::element_count() const {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return dims.empty() ? 0 : n;
}

std::size_t layout_element_count(const std::vector<TensorShape>& layout) {
    std::size_t n = 0;
    for (const auto& t : layout) n += t.element_count();
    return n;
}

void ParamVector::validate() const {
    if (layout_element_count(layout) != values.size()) {
        throw std::invalid_argument("ParamVector: layout covers " +
                                    std::to_string(layout_element_count(layout)) +
                                    " elements but values has " + std::to_string(values.size()));
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("ParamVector: non-finite value");
        }
    }
}

std::size_t ParamVector::offset_of(const std::string& name) const {
    std::size_t off = 0;
    for (const auto& t : layout) {
        if (t.name == name) return off;
        off += t.element_count();
    }
    throw std::invalid_argument("ParamVector: unknown tensor '" + name + "'");
}

namespace {

constexpr char kMagic[4] = {'P', 'F', 'P', 'V'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("param vector stream: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_param_vector(std::ostream& os, const ParamVector& pv) {
    pv.validate();
    os.write(kMagic, 4);
    put_u64(os, 1);  // format version
    put_u64(os, pv.layout.size());
    for (const auto& t : pv.layout) {
        put_u64(os, t.name.size());
        os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        put_u64(os, t.dims.size());
        for (std::size_t d : t.dims) put_u64(os, d);
    }
    put_u64(os, pv.values.size());
    for (double v : pv.values) put_f64(os, v);
}

ParamVector read_param_vector(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("param vector stream: bad magic");
    }
    std::uint64_t version = get_u64(is);
    if (version != 1) {
        throw std::runtime_error("param vector stream: unsupported version " +
                                 std::to_string(version));
    }
    ParamVector pv;
    std::uint64_t ntensors = get_u64(is);
    pv.layout.resize(ntensors);
    for (auto& t : pv.layout) {
        std::uint64_t name_len = get_u64(is);
        t.name.resize(name_len);
        is.read(t.name.data(), static_cast<std::streamsize>(name_len));
        std::uint64_t ndims = get_u64(is);
        t.dims.resize(ndims);
        for (auto& d : t.dims) d = get_u64(is);
    }
    std::uint64_t nvalues = get_u64(is);
    pv.values.resize(nvalues);
    for (auto& v : pv.values) v = get_f64(is);
    if (!is) throw std::runtime_error("param vector stream: truncated values");
    pv.validate();
    return pv;
}

void save_param_vector(const std::string& path, const ParamVector& pv) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    write_param_vector(os, pv);
    if (!os) throw std::runtime_error("write failed: " + path);
}

ParamVector load_param_vector(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for read: " + path);
    return read_param_vector(is);
}

}  // namespace pfedgame
