#include "dynbif/config.hpp"

#include "dynbif/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace dynbif {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v)
{
    double out = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || std::isnan(out)) throw ConfigError("expected a number, got '" + v + "'");
    return out;
}

long long parse_int(const std::string& v)
{
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError("expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v)
{
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item)));
    if (out.empty()) throw ConfigError("expected a comma-separated list");
    return out;
}

std::string list_str(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

std::string one_of(const std::string& v, std::initializer_list<const char*> allowed)
{
    std::string names;
    for (const char* a : allowed) {
        if (v == a) return v;
        names += names.empty() ? a : std::string(", ") + a;
    }
    throw ConfigError("expected one of " + names + ", got '" + v + "'");
}

int positive_int(const std::string& v)
{
    const long long n = parse_int(v);
    if (n < 0 || n > 1 << 24) throw ConfigError("integer out of range: " + v);
    return static_cast<int>(n);
}

struct Field {
    const char* section;
    const char* key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define DOUBLE_FIELD(sec, name, member)                                                          \
    Field{sec, name, [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(v); }, \
          [](const ExperimentConfig& c) { return format_double(c.member); }}
#define INT_FIELD(sec, name, member)                                                             \
    Field{sec, name, [](ExperimentConfig& c, const std::string& v) { c.member = positive_int(v); }, \
          [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define BOOL_FIELD(sec, name, member)                                                            \
    Field{sec, name, [](ExperimentConfig& c, const std::string& v) { c.member = parse_bool(v); },   \
          [](const ExperimentConfig& c) { return std::string(c.member ? "true" : "false"); }}
#define LIST_FIELD(sec, name, member)                                                            \
    Field{sec, name, [](ExperimentConfig& c, const std::string& v) { c.member = parse_list(v); },   \
          [](const ExperimentConfig& c) { return list_str(c.member); }}

const std::vector<Field>& fields()
{
    static const std::vector<Field> f = {
        Field{"experiment", "kind",
              [](ExperimentConfig& c, const std::string& v) {
                  try {
                      c.kind = experiment_from_name(v);
                  } catch (const std::invalid_argument& e) {
                      throw ConfigError(e.what());
                  }
              },
              [](const ExperimentConfig& c) { return experiment_name(c.kind); }},
        Field{"experiment", "seed",
              [](ExperimentConfig& c, const std::string& v) {
                  std::uint64_t s = 0;
                  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
                  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError("expected a seed, got '" + v + "'");
                  c.seed = s;
              },
              [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
        Field{"experiment", "out",
              [](ExperimentConfig& c, const std::string& v) {
                  if (v.empty()) throw ConfigError("output directory must not be empty");
                  c.out = v;
              },
              [](const ExperimentConfig& c) { return c.out; }},
        INT_FIELD("experiment", "workers", workers),
        Field{"model", "id",
              [](ExperimentConfig& c, const std::string& v) {
                  try {
                      c.model.id = model_from_name(v);
                  } catch (const std::invalid_argument& e) {
                      throw ConfigError(e.what());
                  }
              },
              [](const ExperimentConfig& c) { return c.model.name(); }},
        DOUBLE_FIELD("model", "a", model.brusselator.a),
        DOUBLE_FIELD("model", "d1", model.brusselator.d1),
        DOUBLE_FIELD("model", "d2", model.brusselator.d2),
        INT_FIELD("model", "dims", model.space_dims),
        INT_FIELD("grid", "nx", nx),
        DOUBLE_FIELD("grid", "length", length),
        INT_FIELD("grid", "ny", ny),
        DOUBLE_FIELD("grid", "width", width),
        Field{"solver", "level", [](ExperimentConfig& c, const std::string& v) { c.level = one_of(v, {"physical", "modulation"}); },
              [](const ExperimentConfig& c) { return c.level; }},
        Field{"solver", "scheme", [](ExperimentConfig& c, const std::string& v) { c.scheme = one_of(v, {"etdrk4", "imex-bdf2"}); },
              [](const ExperimentConfig& c) { return c.scheme; }},
        DOUBLE_FIELD("solver", "dt", dt),
        BOOL_FIELD("solver", "dealias", dealias),
        INT_FIELD("solver", "record_stride", record_stride),
        DOUBLE_FIELD("solver", "t_end", t_end),
        DOUBLE_FIELD("solver", "mu", mu),
        DOUBLE_FIELD("solver", "eps", eps),
        DOUBLE_FIELD("solver", "amplitude", amplitude),
        DOUBLE_FIELD("solver", "band", band),
        DOUBLE_FIELD("spectra", "mu", spectra_mu),
        DOUBLE_FIELD("spectra", "xi_min", xi_min),
        DOUBLE_FIELD("spectra", "xi_max", xi_max),
        INT_FIELD("spectra", "points", points),
        Field{"spectra", "m4_path", [](ExperimentConfig& c, const std::string& v) { c.m4_path = one_of(v, {"quartic", "numeric"}); },
              [](const ExperimentConfig& c) { return c.m4_path; }},
        Field{"modulation", "chart",
              [](ExperimentConfig& c, const std::string& v) { c.chart = one_of(v, {"frozen", "k1", "k2", "k3"}); },
              [](const ExperimentConfig& c) { return c.chart; }},
        DOUBLE_FIELD("modulation", "r", r),
        DOUBLE_FIELD("modulation", "slow", slow),
        DOUBLE_FIELD("modulation", "bar_mu", bar_mu),
        INT_FIELD("modulation", "nx", envelope_nx),
        DOUBLE_FIELD("modulation", "length", envelope_length),
        DOUBLE_FIELD("modulation", "dt", envelope_dt),
        LIST_FIELD("validate", "deltas", deltas),
        LIST_FIELD("validate", "epsilons", epsilons),
        DOUBLE_FIELD("validate", "mu0", mu0),
        DOUBLE_FIELD("validate", "threshold", threshold),
        DOUBLE_FIELD("validate", "initial_sup", initial_sup),
        BOOL_FIELD("validate", "residual", residual),
        INT_FIELD("validate", "replicas", replicas),
    };
    return f;
}

#undef DOUBLE_FIELD
#undef INT_FIELD
#undef BOOL_FIELD
#undef LIST_FIELD

const Field* find_field(const std::string& section, const std::string& key)
{
    for (const auto& f : fields())
        if (section == f.section && key == f.key) return &f;
    return nullptr;
}

}  // namespace

std::string experiment_name(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::Spectra: return "spectra";
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Derive: return "derive";
    case ExperimentKind::Validate: return "validate";
    case ExperimentKind::Sweep: return "sweep";
    }
    return "?";
}

ExperimentKind experiment_from_name(const std::string& s)
{
    for (auto k : {ExperimentKind::Spectra, ExperimentKind::Simulate, ExperimentKind::Derive, ExperimentKind::Validate,
                   ExperimentKind::Sweep})
        if (experiment_name(k) == s) return k;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source)
{
    ExperimentConfig c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& f : fields()) known |= section == f.section;
            if (!known) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + "key '" + key + "' outside a section");
        const Field* f = find_field(section, key);
        if (!f) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
        try {
            f->set(c, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + key + ": " + e.what());
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    return parse_config(in, path);
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value)
{
    const auto dot = key.find('.');
    const Field* f = nullptr;
    if (dot != std::string::npos) {
        f = find_field(key.substr(0, dot), key.substr(dot + 1));
    } else {
        for (const auto& g : fields()) {
            if (key != g.key) continue;
            if (f) throw ConfigError("key '" + key + "' is ambiguous; qualify it with its section");
            f = &g;
        }
    }
    if (!f) throw ConfigError("unknown key '" + key + "'");
    try {
        f->set(c, trim(value));
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::string to_text(const ExperimentConfig& c)
{
    std::string out, section;
    for (const auto& f : fields()) {
        if (section != f.section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += std::string(f.key) + " = " + f.get(c) + "\n";
    }
    return out;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(std::string(f.section) + "." + f.key);
    return k;
}

}  // namespace dynbif
