#include "dynbif/dump.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dynbif {

namespace {

static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");

constexpr char kMagic[5] = {'B', 'M', 'O', 'D', '1'};

template <class T>
void put(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is)
{
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("dump: truncated stream");
    return v;
}

}  // namespace

void write_dump(std::ostream& os, const FieldDump& d)
{
    const std::size_t cells = static_cast<std::size_t>(d.nx) * (d.ny > 0 ? d.ny : 1);
    for (const auto& c : d.components)
        if (c.size() != cells) throw std::invalid_argument("dump: component size does not match nx * ny");
    os.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(os, d.model_id);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(d.components.size()));
    put<std::uint32_t>(os, d.dim);
    put<std::uint32_t>(os, d.nx);
    put<std::uint32_t>(os, d.ny);
    put<double>(os, d.time);
    put<double>(os, d.mu);
    put<double>(os, d.eps);
    for (const auto& c : d.components) os.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
    if (!os) throw std::runtime_error("dump: write failed");
}

FieldDump read_dump(std::istream& is)
{
    char magic[5];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("dump: bad magic");
    FieldDump d;
    d.model_id = get<std::uint32_t>(is);
    const auto n = get<std::uint32_t>(is);
    d.dim = get<std::uint32_t>(is);
    d.nx = get<std::uint32_t>(is);
    d.ny = get<std::uint32_t>(is);
    d.time = get<double>(is);
    d.mu = get<double>(is);
    d.eps = get<double>(is);
    const std::size_t cells = static_cast<std::size_t>(d.nx) * (d.ny > 0 ? d.ny : 1);
    d.components.assign(n, std::vector<double>(cells));
    for (auto& c : d.components)
        if (!is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(cells * sizeof(double))))
            throw std::runtime_error("dump: truncated stream");
    return d;
}

}  // namespace dynbif
