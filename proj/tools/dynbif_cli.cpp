// Command-line runner: dynbif [run] <spectra|simulate|derive|validate|sweep> [options]

#include "dynbif/config.hpp"
#include "dynbif/experiments.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace dynbif;

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    // Shortcut flags by config key; `--mu` targets the key the subcommand reads.
    std::map<std::string, std::string> shortcuts;
};

void add_common(CLI::App* sub, Overrides& o, const std::vector<std::pair<std::string, std::string>>& shortcuts)
{
    sub->add_option("--config", o.config, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "64-bit random seed");
    sub->add_option("--set", o.sets, "override, section.key=value (repeatable)");
    for (const auto& [flag, key] : shortcuts) {
        const std::string k = key;
        sub->add_option_function<std::string>(
            "--" + flag, [&o, k](const std::string& v) { o.shortcuts[k] = v; }, "sets " + key);
    }
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args.front() == "run") args.erase(args.begin());
    std::reverse(args.begin(), args.end());

    CLI::App app{"Slow-passage pattern-formation experiments"};
    app.require_subcommand(1);
    Overrides o;
    const std::vector<std::pair<std::string, std::string>> common_flags = {
        {"model", "model.id"}, {"a", "model.a"}, {"d1", "model.d1"}, {"d2", "model.d2"}, {"dims", "model.dims"},
        {"workers", "experiment.workers"}};
    auto with = [&](std::vector<std::pair<std::string, std::string>> extra) {
        extra.insert(extra.begin(), common_flags.begin(), common_flags.end());
        return extra;
    };

    std::map<CLI::App*, ExperimentKind> kinds;
    auto* spectra = app.add_subcommand("spectra", "dispersion relation lambda(xi, mu) over a xi range");
    add_common(spectra, o, with({{"mu", "spectra.mu"}, {"xi-max", "spectra.xi_max"}, {"points", "spectra.points"}, {"m4-path", "spectra.m4_path"}}));
    kinds[spectra] = ExperimentKind::Spectra;
    auto* simulate = app.add_subcommand("simulate", "direct or envelope simulation");
    add_common(simulate, o, with({{"mu", "solver.mu"}, {"eps", "solver.eps"}, {"t-end", "solver.t_end"}, {"dt", "solver.dt"},
                                  {"level", "solver.level"}, {"chart", "modulation.chart"}, {"scheme", "solver.scheme"}}));
    kinds[simulate] = ExperimentKind::Simulate;
    auto* derive = app.add_subcommand("derive", "exact modulation-equation derivation");
    add_common(derive, o, with({}));
    kinds[derive] = ExperimentKind::Derive;
    auto* validate = app.add_subcommand("validate", "error scaling, residual order and delayed take-off");
    add_common(validate, o, with({{"deltas", "validate.deltas"}, {"epsilons", "validate.epsilons"}, {"mu0", "validate.mu0"}}));
    kinds[validate] = ExperimentKind::Validate;
    auto* sweep = app.add_subcommand("sweep", "parallel slow-passage sweep over eps");
    add_common(sweep, o, with({{"epsilons", "validate.epsilons"}, {"replicas", "validate.replicas"}, {"mu0", "validate.mu0"}}));
    kinds[sweep] = ExperimentKind::Sweep;

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    ExperimentConfig cfg;
    try {
        if (!o.config.empty()) cfg = load_config(o.config);
        for (const auto& [sub, kind] : kinds)
            if (sub->parsed()) cfg.kind = kind;
        for (const auto& [key, value] : o.shortcuts) set_config_value(cfg, key, value);
        for (const auto& s : o.sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
            set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (o.out) set_config_value(cfg, "experiment.out", *o.out);
        if (o.seed) cfg.seed = *o.seed;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const int code = run_experiment(cfg, std::cout);
        if (code == kExitCheckFailed) std::cerr << experiment_name(cfg.kind) << ": acceptance check failed\n";
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << experiment_name(cfg.kind) << " (" << cfg.model.name() << "): " << e.what() << "\n";
        return kExitRuntime;
    }
}
