#pragma once

// Experiment configuration: line-oriented `key = value` text with [section]
// headers and # comments. Every key has a default; unknown keys are errors.

#include "dynbif/model.hpp"

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynbif {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Spectra, Simulate, Derive, Validate, Sweep };

std::string experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& s);

struct ExperimentConfig {
    // [experiment]
    ExperimentKind kind = ExperimentKind::Spectra;
    std::uint64_t seed = 1;
    std::string out = "out";
    int workers = 0;  // 0: logical cores

    // [model]
    ModelSpec model;

    // [grid] (0: model default)
    int nx = 0;
    double length = 0;
    int ny = 0;
    double width = 0;

    // [solver]
    std::string level = "physical";  // physical | modulation
    std::string scheme = "etdrk4";
    double dt = 0;                   // 0: model default
    bool dealias = true;
    int record_stride = 100;
    double t_end = 100;
    double mu = 0.01;
    double eps = 0;
    double amplitude = 0.01;
    double band = 0.25;

    // [spectra]
    double spectra_mu = 0.01;
    double xi_min = 0;
    double xi_max = 2;
    int points = 201;
    std::string m4_path = "quartic";  // quartic | numeric

    // [modulation]
    std::string chart = "frozen";  // frozen | k1 | k2 | k3
    double r = 0.1;
    double slow = 0;               // eps1, mu2 or eps3
    double bar_mu = 1;             // frozen coefficient
    int envelope_nx = 256;
    double envelope_length = 0;    // 0: 8 pi
    double envelope_dt = 0.01;

    // [validate]
    std::vector<double> deltas{0.2, 0.1, 0.05};
    std::vector<double> epsilons{1e-3, 1e-4};
    double mu0 = -0.05;
    double threshold = 1e-2;
    double initial_sup = 1e-6;
    bool residual = true;
    int replicas = 1;  // sweep: seeded repetitions per eps

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses a whole document; `source` prefixes error messages ("file:line: ...").
ExperimentConfig parse_config(std::istream& in, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

// Sets one key ("section.key" or a bare key that is unique across sections).
void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value);

// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& c);

// Keys in canonical order, "section.key".
std::vector<std::string> config_keys();

}  // namespace dynbif
