#pragma once

#include <stdexcept>
#include <string>

namespace dynbif {

enum class ModelId { M1, M2, M3, M4 };

// M1 Swift-Hohenberg, M2 shifted Brusselator, M3 coupled KS-type system,
// M4 Kolmogorov flow.
struct BrusselatorParams {
    double a = 1.0;
    double d1 = 1.0;
    double d2 = 0.5;

    bool operator==(const BrusselatorParams&) const = default;
};

struct ModelSpec {
    ModelId id = ModelId::M1;
    BrusselatorParams brusselator;  // used by M2 only
    int space_dims = 1;             // unbounded directions p (M2 may use 2)

    static ModelSpec m1() { return {ModelId::M1, {}, 1}; }
    static ModelSpec m2(BrusselatorParams p = {}, int dims = 1) { return {ModelId::M2, p, dims}; }
    static ModelSpec m3() { return {ModelId::M3, {}, 1}; }
    static ModelSpec m4() { return {ModelId::M4, {}, 1}; }

    int components() const;     // N
    int beta() const;           // temporal weight of the blow-up
    std::string name() const;   // "m1".."m4"
    void validate() const;      // throws std::invalid_argument

    bool operator==(const ModelSpec&) const = default;
};

constexpr double kolmogorov_critical_reynolds() { return 1.41421356237309504880; }

ModelId model_from_name(const std::string& name);

}  // namespace dynbif
