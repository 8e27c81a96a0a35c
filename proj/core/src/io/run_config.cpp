#include "qjump/io/run_config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qjump/error.hpp"
#include "qjump/io/csv.hpp"

namespace qjump::io {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"model", {"n_sites", "n_excitations", "hamiltonian", "strength", "kappa"}},
        {"backend", {"kind"}},
        {"mps", {"max_bond", "cutoff", "order", "substeps", "checkpoint_every"}},
        {"trajectory", {"m", "t_max", "master_seed", "dt", "entropy_every", "sample_every"}},
        {"analysis",
         {"scan", "gamma_grid", "sizes", "bin_width", "t_min", "fit_l_min", "fit_l_max", "sample_stride", "dip_spacing"}},
        {"output", {"directory"}},
    };
    return s;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    const std::string* raw(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return nullptr;
        const auto v = sec->get_child_optional(pt::ptree::path_type(key, '\0'));
        return v ? &v->data() : nullptr;
    }
    static std::string name(const std::string& s, const std::string& k) { return s + "." + k; }

    void get(const std::string& s, const std::string& k, double& out) const {
        if (const auto* v = raw(s, k)) out = parse_double(*v, name(s, k));
    }
    void get(const std::string& s, const std::string& k, int& out) const {
        if (const auto* v = raw(s, k)) {
            const long long x = parse_integer(*v, name(s, k));
            if (x < INT32_MIN || x > INT32_MAX) throw ConfigError(name(s, k) + " out of range");
            out = static_cast<int>(x);
        }
    }
    void get(const std::string& s, const std::string& k, long long& out) const {
        if (const auto* v = raw(s, k)) out = parse_integer(*v, name(s, k));
    }
    void get(const std::string& s, const std::string& k, std::uint64_t& out) const {
        if (const auto* v = raw(s, k)) {
            try {
                std::size_t pos = 0;
                out = std::stoull(*v, &pos, 0);
                if (pos != v->size() || v->find('-') != std::string::npos) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError("invalid unsigned integer '" + *v + "' for " + name(s, k));
            }
        }
    }
    void get(const std::string& s, const std::string& k, bool& out) const {
        if (const auto* v = raw(s, k)) {
            if (*v == "true" || *v == "1" || *v == "yes") out = true;
            else if (*v == "false" || *v == "0" || *v == "no") out = false;
            else throw ConfigError("invalid boolean '" + *v + "' for " + name(s, k));
        }
    }
    void get(const std::string& s, const std::string& k, std::string& out) const {
        if (const auto* v = raw(s, k)) out = *v;
    }
    template <typename T>
    void get_list(const std::string& s, const std::string& k, std::vector<T>& out) const {
        const auto* v = raw(s, k);
        if (!v) return;
        out.clear();
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            if constexpr (std::is_same_v<T, double>)
                out.push_back(parse_double(item, name(s, k)));
            else
                out.push_back(static_cast<T>(parse_integer(item, name(s, k))));
        }
    }

private:
    const pt::ptree& tree_;
};

void validate(const RunConfig& c) {
    auto fail = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };
    c.model.validate();
    if (c.model.n_sites < 2) fail("model.n_sites", "must be at least 2");
    if (!(c.model.kappa > 0.0)) fail("model.kappa", "must be positive");
    if (c.mps.max_bond < 1) fail("mps.max_bond", "must be positive");
    if (!(c.mps.cutoff >= 0.0 && c.mps.cutoff < 1.0)) fail("mps.cutoff", "must lie in [0, 1)");
    if (c.mps.order != 2 && c.mps.order != 4) fail("mps.order", "must be 2 or 4");
    if (c.mps.substeps < 1) fail("mps.substeps", "must be positive");
    if (c.mps.checkpoint_every < 1) fail("mps.checkpoint_every", "must be positive");
    if (c.trajectory.m < 1) fail("trajectory.m", "must be positive");
    if (!(c.trajectory.t_max > 0.0)) fail("trajectory.t_max", "must be positive");
    if (!(c.trajectory.dt > 0.0)) fail("trajectory.dt", "must be positive");
    if (c.trajectory.entropy_every < 1) fail("trajectory.entropy_every", "must be positive");
    if (c.trajectory.sample_every < 1) fail("trajectory.sample_every", "must be positive");
    if (!(c.analysis.bin_width > 0.0)) fail("analysis.bin_width", "must be positive");
    if (!(c.analysis.t_min >= 0.0)) fail("analysis.t_min", "must be nonnegative");
    if (c.analysis.sample_stride < 1) fail("analysis.sample_stride", "must be positive");
    if (!(c.analysis.dip_spacing > 0.0)) fail("analysis.dip_spacing", "must be positive");
    for (double g : c.analysis.gamma_grid)
        if (!(g >= 0.0)) fail("analysis.gamma_grid", "entries must be nonnegative");
    for (int n : c.analysis.sizes)
        if (n < 2) fail("analysis.sizes", "entries must be at least 2");
    if (c.output.directory.empty()) fail("output.directory", "must not be empty");
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_text(v[i]);
    return s;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

TrajectoryOptions RunConfig::trajectory_options() const {
    TrajectoryOptions o;
    o.backend = backend;
    o.mps.trunc = {mps.max_bond, mps.cutoff};
    o.mps.order = mps.order;
    o.mps.substeps = mps.substeps;
    o.dt = trajectory.dt;
    o.t_max = trajectory.t_max;
    o.entropy_every = trajectory.entropy_every;
    o.sample_every = trajectory.sample_every;
    o.checkpoint_every = mps.checkpoint_every;
    return o;
}

int table_bond_dimension(int n) {
    if (n <= 24) return 30;
    if (n <= 36) return 50;
    if (n <= 48) return 60;
    if (n <= 60) return 80;
    return 100;
}

double table_t_max(int n) { return n <= 48 ? 100.0 : 150.0; }

std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 20; ++i) g.push_back(i / 20.0);
    g.insert(g.end(), {1.5, 2.0, 5.0});
    return g;
}

RunConfig default_run_config(int n_sites) {
    RunConfig c;
    c.model.n_sites = n_sites;
    c.model.n_excitations = ModelConfig::default_excitations(n_sites);
    c.mps.max_bond = table_bond_dimension(n_sites);
    c.trajectory.t_max = table_t_max(n_sites);
    c.analysis.gamma_grid = default_gamma_grid();
    return c;
}

RunConfig parse_run_config(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) {
            if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& kv : body)
            if (!it->second.count(kv.first)) throw ConfigError("unknown key " + section + "." + kv.first);
    }

    const Reader r(tree);
    int n = ModelConfig{}.n_sites;
    r.get("model", "n_sites", n);
    RunConfig c = default_run_config(n);
    r.get("model", "n_excitations", c.model.n_excitations);
    if (const auto* h = r.raw("model", "hamiltonian")) {
        try {
            c.model.hamiltonian = hamiltonian_kind_from_string(*h);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("model.hamiltonian: ") + e.what());
        }
    }
    r.get("model", "strength", c.model.strength);
    r.get("model", "kappa", c.model.kappa);
    if (const auto* b = r.raw("backend", "kind")) {
        try {
            c.backend = backend_from_string(*b);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("backend.kind: ") + e.what());
        }
    }
    r.get("mps", "max_bond", c.mps.max_bond);
    r.get("mps", "cutoff", c.mps.cutoff);
    r.get("mps", "order", c.mps.order);
    r.get("mps", "substeps", c.mps.substeps);
    r.get("mps", "checkpoint_every", c.mps.checkpoint_every);
    r.get("trajectory", "m", c.trajectory.m);
    r.get("trajectory", "t_max", c.trajectory.t_max);
    r.get("trajectory", "master_seed", c.trajectory.master_seed);
    r.get("trajectory", "dt", c.trajectory.dt);
    r.get("trajectory", "entropy_every", c.trajectory.entropy_every);
    r.get("trajectory", "sample_every", c.trajectory.sample_every);
    r.get("analysis", "scan", c.analysis.scan);
    r.get_list("analysis", "gamma_grid", c.analysis.gamma_grid);
    r.get_list("analysis", "sizes", c.analysis.sizes);
    r.get("analysis", "bin_width", c.analysis.bin_width);
    r.get("analysis", "t_min", c.analysis.t_min);
    r.get("analysis", "fit_l_min", c.analysis.fit_l_min);
    r.get("analysis", "fit_l_max", c.analysis.fit_l_max);
    r.get("analysis", "sample_stride", c.analysis.sample_stride);
    r.get("analysis", "dip_spacing", c.analysis.dip_spacing);
    r.get("output", "directory", c.output.directory);
    validate(c);
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string serialize_run_config(const RunConfig& c) {
    std::ostringstream o;
    o << "[model]\n"
      << "n_sites = " << c.model.n_sites << "\n"
      << "n_excitations = " << c.model.n_excitations << "\n"
      << "hamiltonian = " << to_string(c.model.hamiltonian) << "\n"
      << "strength = " << to_text(c.model.strength) << "\n"
      << "kappa = " << to_text(c.model.kappa) << "\n\n"
      << "[backend]\n"
      << "kind = " << to_string(c.backend) << "\n\n"
      << "[mps]\n"
      << "max_bond = " << c.mps.max_bond << "\n"
      << "cutoff = " << to_text(c.mps.cutoff) << "\n"
      << "order = " << c.mps.order << "\n"
      << "substeps = " << c.mps.substeps << "\n"
      << "checkpoint_every = " << c.mps.checkpoint_every << "\n\n"
      << "[trajectory]\n"
      << "m = " << c.trajectory.m << "\n"
      << "t_max = " << to_text(c.trajectory.t_max) << "\n"
      << "master_seed = " << c.trajectory.master_seed << "\n"
      << "dt = " << to_text(c.trajectory.dt) << "\n"
      << "entropy_every = " << c.trajectory.entropy_every << "\n"
      << "sample_every = " << c.trajectory.sample_every << "\n\n"
      << "[analysis]\n"
      << "scan = " << (c.analysis.scan ? "true" : "false") << "\n"
      << "gamma_grid = " << join(c.analysis.gamma_grid) << "\n"
      << "sizes = " << join(c.analysis.sizes) << "\n"
      << "bin_width = " << to_text(c.analysis.bin_width) << "\n"
      << "t_min = " << to_text(c.analysis.t_min) << "\n"
      << "fit_l_min = " << c.analysis.fit_l_min << "\n"
      << "fit_l_max = " << c.analysis.fit_l_max << "\n"
      << "sample_stride = " << c.analysis.sample_stride << "\n"
      << "dip_spacing = " << to_text(c.analysis.dip_spacing) << "\n\n"
      << "[output]\n"
      << "directory = " << c.output.directory << "\n";
    return o.str();
}

}  // namespace qjump::io
