#pragma once

// Binary field dump: "BMOD1", little-endian u32 (model id, N, dim, nx, ny),
// f64 time, mu, eps, then the N components in row-major f64.
// Physical states use model ids 1..4; modulation states use 101..104 and
// store real and imaginary parts as separate components.

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dynbif {

struct FieldDump {
    std::uint32_t model_id = 0;
    std::uint32_t dim = 1;
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    double time = 0;
    double mu = 0;
    double eps = 0;
    std::vector<std::vector<double>> components;
};

void write_dump(std::ostream& os, const FieldDump& d);
FieldDump read_dump(std::istream& is);

}  // namespace dynbif
