#include "dynbif/model.hpp"

#include <cmath>

namespace dynbif {

int ModelSpec::components() const
{
    switch (id) {
    case ModelId::M1: return 1;
    case ModelId::M2: return 2;
    case ModelId::M3: return 2;
    case ModelId::M4: return 2;
    }
    return 0;
}

int ModelSpec::beta() const { return id == ModelId::M4 ? 4 : 2; }

std::string ModelSpec::name() const
{
    switch (id) {
    case ModelId::M1: return "m1";
    case ModelId::M2: return "m2";
    case ModelId::M3: return "m3";
    case ModelId::M4: return "m4";
    }
    return "?";
}

void ModelSpec::validate() const
{
    if (id == ModelId::M2) {
        const auto& p = brusselator;
        if (!(p.a > 0 && p.d1 > 0 && p.d2 > 0))
            throw std::invalid_argument("brusselator parameters must be positive");
        // Excludes the Turing branch so the primary instability is the Hopf one.
        if (!(std::sqrt(p.d1 / p.d2) > (std::sqrt(1 + p.a * p.a) - 1) / p.a))
            throw std::invalid_argument("brusselator parameters admit a Turing instability");
        if (space_dims != 1 && space_dims != 2)
            throw std::invalid_argument("brusselator supports 1 or 2 space dimensions");
    } else if (space_dims != 1) {
        throw std::invalid_argument(name() + " supports one unbounded direction");
    }
}

ModelId model_from_name(const std::string& name)
{
    if (name == "m1" || name == "M1" || name == "swift-hohenberg") return ModelId::M1;
    if (name == "m2" || name == "M2" || name == "brusselator") return ModelId::M2;
    if (name == "m3" || name == "M3" || name == "coupled-ks") return ModelId::M3;
    if (name == "m4" || name == "M4" || name == "kolmogorov") return ModelId::M4;
    throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace dynbif
