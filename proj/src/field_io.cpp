#include "yfl/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace yfl {

namespace {

constexpr char kMagic[4] = {'Y', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "field container I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    os.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    char buf[sizeof(T)];
    if (!is.read(buf, sizeof(T))) throw std::runtime_error("field container: truncated input");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f, const std::string& metadata) {
    const GridSpec& g = f.grid();
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(metadata.size()));
    for (auto n : g.nodes) put<std::uint64_t>(os, n);
    for (double p : g.periods) put<double>(os, p);
    os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
    os.write(reinterpret_cast<const char*>(f.values().data()),
             static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!os) throw std::runtime_error("field container: write failed");
}

void write_field(const std::filesystem::path& path, const ScalarField& f,
                 const std::string& metadata) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_field(os, f, metadata);
}

FieldFile read_field(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("field container: bad magic");
    }
    const auto version = get<std::uint32_t>(is);
    if (version != kVersion) throw std::runtime_error("field container: unsupported version");
    const auto n = static_cast<int>(get<std::uint32_t>(is));
    const auto meta_len = get<std::uint32_t>(is);
    if (n < 1 || n > 16) throw std::runtime_error("field container: bad dimension");
    std::vector<std::size_t> nodes(n);
    std::vector<double> periods(n);
    for (auto& m : nodes) m = static_cast<std::size_t>(get<std::uint64_t>(is));
    for (auto& p : periods) p = get<double>(is);
    std::string meta(meta_len, '\0');
    if (meta_len > 0 && !is.read(meta.data(), meta_len)) {
        throw std::runtime_error("field container: truncated metadata");
    }
    auto grid = make_grid(n, std::move(nodes), std::move(periods));
    std::vector<double> values(grid->size());
    if (!is.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * sizeof(double)))) {
        throw std::runtime_error("field container: truncated payload");
    }
    FieldFile out{ScalarField(grid, std::move(values)), std::move(meta)};
    out.field.require_finite("field container");
    return out;
}

FieldFile read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_field(is);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
    const GridSpec& g = f.grid();
    for (int a = 0; a < g.dim; ++a) os << 'x' << (a + 1) << ',';
    os << "value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (double x : node_coordinates(g, i)) os << format_double(x) << ',';
        os << format_double(f[i]) << '\n';
    }
}

}  // namespace yfl

namespace yfl {

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace yfl
