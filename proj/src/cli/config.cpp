#include "hilfer/cli/config.hpp"

#include <fstream>
#include <sstream>

namespace hilfer::cli {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + "/" + key, "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        // Constant expressions such as "1/6" are accepted for declared constants.
        try {
            const Expr e = Expr::parse(v.get<std::string>());
            if (e.uses_variable_a()) fail(where, "constant expression may not use 'a'");
            return e.eval(0.0, 0.0);
        } catch (const SyntaxError& err) {
            fail(where, err.what());
        } catch (const DomainError& err) {
            fail(where, err.what());
        }
    }
    fail(where, "expected a number");
}

template <typename T>
T as_count(const json& v, const std::string& where, T minimum) {
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
        fail(where, "expected an integer >= " + std::to_string(minimum));
    }
    return static_cast<T>(v.get<long long>());
}

double positive(const json& v, const std::string& where) {
    const double d = as_number(v, where);
    if (!(d > 0.0)) fail(where, "must be positive");
    return d;
}

std::optional<double> optional_positive(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return positive(*it, where + "/" + key);
}

NonlinearityConfig parse_nonlinearity(const json& v, const std::string& where) {
    NonlinearityConfig out;
    const json& expr = require(v, "expr", where);
    if (!expr.is_string()) fail(where + "/expr", "expected a string");
    out.expr = expr.get<std::string>();
    try {
        (void)Expr::parse(out.expr);
    } catch (const SyntaxError& err) {
        fail(where + "/expr", err.what());
    }
    out.lipschitz = as_number(require(v, "lipschitz", where), where + "/lipschitz");
    if (!(out.lipschitz >= 0.0)) fail(where + "/lipschitz", "must be non-negative");
    if (auto it = v.find("zero_at_zero"); it != v.end()) {
        if (!it->is_boolean()) fail(where + "/zero_at_zero", "expected true or false");
        out.zero_at_zero = it->get<bool>();
    }
    return out;
}

void check_params(const FracParams& p) {
    try {
        p.validate();
    } catch (const DomainError& err) {
        fail("/params", err.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("byte ") + std::to_string(err.byte) + ": " + err.what());
    }
    if (!root.is_object()) fail("", "top level must be an object");

    RunConfig cfg;
    const json& params = require(root, "params", "");
    cfg.params.k = as_number(require(params, "k", "/params"), "/params/k");
    cfg.params.rho = as_number(require(params, "rho", "/params"), "/params/rho");
    cfg.params.gamma_ord = as_number(require(params, "gamma", "/params"), "/params/gamma");
    cfg.params.T = as_number(require(params, "T", "/params"), "/params/T");
    check_params(cfg.params);

    const json& eqs = require(root, "equations", "");
    if (!eqs.is_array() || eqs.empty() || eqs.size() > 2) {
        fail("/equations", "expected an array of one or two equations");
    }
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        const std::string where = "/equations/" + std::to_string(i);
        EquationConfig eq;
        eq.name = eqs[i].value("name", i == 0 ? std::string("alpha") : std::string("beta"));
        eq.f = parse_nonlinearity(require(eqs[i], "F", where), where + "/F");
        eq.psi = parse_nonlinearity(require(eqs[i], "Psi", where), where + "/Psi");
        eq.g = parse_nonlinearity(require(eqs[i], "G", where), where + "/G");
        cfg.equations.push_back(std::move(eq));
    }
    if (cfg.equations.size() == 2 && cfg.equations[0].name == cfg.equations[1].name) {
        fail("/equations/1/name", "equation names must differ");
    }

    if (auto it = root.find("solver"); it != root.end()) {
        const json& s = *it;
        if (s.contains("tol")) cfg.solver.tol = positive(s["tol"], "/solver/tol");
        if (s.contains("max_iter")) cfg.solver.max_iter = as_count<int>(s["max_iter"], "/solver/max_iter", 1);
        if (s.contains("nodes")) cfg.solver.nodes = as_count<std::size_t>(s["nodes"], "/solver/nodes", 2);
        if (s.contains("seed_value")) cfg.solver.seed_value = as_number(s["seed_value"], "/solver/seed_value");
    }
    if (auto it = root.find("quadrature"); it != root.end()) {
        const json& q = *it;
        if (q.contains("panels")) cfg.quadrature.panels = as_count<std::size_t>(q["panels"], "/quadrature/panels", 1);
        if (q.contains("mesh")) {
            const std::string mesh = q["mesh"].is_string() ? q["mesh"].get<std::string>() : "";
            if (mesh == "uniform") {
                cfg.quadrature.mesh = MeshKind::uniform;
            } else if (mesh == "graded") {
                cfg.quadrature.mesh = MeshKind::graded;
            } else {
                fail("/quadrature/mesh", "expected \"uniform\" or \"graded\"");
            }
        }
        if (q.contains("grading")) {
            cfg.quadrature.grading = as_number(q["grading"], "/quadrature/grading");
            if (!(cfg.quadrature.grading >= 1.0)) fail("/quadrature/grading", "must be >= 1");
        }
    }
    cfg.gamma_k_override = optional_positive(root, "gamma_k_override", "");
    cfg.kernel_mass_override = optional_positive(root, "kernel_mass_override", "");
    cfg.r0 = optional_positive(root, "r0", "");
    if (root.contains("validation_radius")) {
        cfg.validation_radius = positive(root["validation_radius"], "/validation_radius");
    }

    if (auto it = root.find("mnc"); it != root.end()) {
        const json& m = *it;
        if (m.contains("deltas")) {
            const json& d = m["deltas"];
            if (!d.is_array() || d.size() < 3) fail("/mnc/deltas", "expected at least three values");
            cfg.mnc.deltas.clear();
            for (std::size_t i = 0; i < d.size(); ++i) {
                const std::string where = "/mnc/deltas/" + std::to_string(i);
                const double v = positive(d[i], where);
                if (i > 0 && !(v < cfg.mnc.deltas.back())) fail(where, "deltas must be strictly decreasing");
                if (v > cfg.params.T - 1.0) fail(where, "delta exceeds the domain length");
                cfg.mnc.deltas.push_back(v);
            }
        }
        if (m.contains("ensemble_size")) cfg.mnc.ensemble_size = as_count<std::size_t>(m["ensemble_size"], "/mnc/ensemble_size", 1);
        if (m.contains("p_max")) cfg.mnc.p_max = as_count<int>(m["p_max"], "/mnc/p_max", 1);
        if (m.contains("convex_samples")) cfg.mnc.convex_samples = as_count<std::size_t>(m["convex_samples"], "/mnc/convex_samples", 0);
        if (m.contains("seed")) cfg.mnc.seed = as_count<std::uint64_t>(m["seed"], "/mnc/seed", 0);
        if (m.contains("seed_radius")) cfg.mnc.seed_radius = positive(m["seed_radius"], "/mnc/seed_radius");
    }

    if (auto it = root.find("output"); it != root.end()) {
        const json& o = *it;
        if (o.contains("format")) {
            const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
            if (f == "csv") {
                cfg.output.format = OutputFormat::csv;
            } else if (f == "json-lines") {
                cfg.output.format = OutputFormat::json_lines;
            } else {
                fail("/output/format", "expected \"csv\" or \"json-lines\"");
            }
        }
        if (o.contains("path") && !o["path"].is_null()) {
            if (!o["path"].is_string()) fail("/output/path", "expected a string");
            cfg.output.path = o["path"].get<std::string>();
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    using ojson = nlohmann::ordered_json;
    auto nl = [](const NonlinearityConfig& n) {
        return ojson{{"expr", n.expr}, {"lipschitz", n.lipschitz}, {"zero_at_zero", n.zero_at_zero}};
    };
    ojson out;
    out["params"] = {{"k", c.params.k}, {"rho", c.params.rho}, {"gamma", c.params.gamma_ord}, {"T", c.params.T}};
    out["equations"] = ojson::array();
    for (const auto& eq : c.equations) {
        out["equations"].push_back({{"name", eq.name}, {"F", nl(eq.f)}, {"Psi", nl(eq.psi)}, {"G", nl(eq.g)}});
    }
    out["solver"] = {{"tol", c.solver.tol},
                     {"max_iter", c.solver.max_iter},
                     {"nodes", c.solver.nodes},
                     {"seed_value", c.solver.seed_value}};
    out["quadrature"] = {{"panels", c.quadrature.panels},
                         {"mesh", c.quadrature.mesh == MeshKind::graded ? "graded" : "uniform"},
                         {"grading", c.quadrature.grading}};
    out["gamma_k_override"] = c.gamma_k_override ? ojson(*c.gamma_k_override) : ojson(nullptr);
    out["kernel_mass_override"] = c.kernel_mass_override ? ojson(*c.kernel_mass_override) : ojson(nullptr);
    out["r0"] = c.r0 ? ojson(*c.r0) : ojson(nullptr);
    out["validation_radius"] = c.validation_radius;
    out["mnc"] = {{"deltas", c.mnc.deltas},
                  {"ensemble_size", c.mnc.ensemble_size},
                  {"p_max", c.mnc.p_max},
                  {"convex_samples", c.mnc.convex_samples},
                  {"seed", c.mnc.seed},
                  {"seed_radius", c.mnc.seed_radius}};
    out["output"] = {{"format", c.output.format == OutputFormat::csv ? "csv" : "json-lines"},
                     {"path", c.output.path ? ojson(*c.output.path) : ojson(nullptr)}};
    return out;
}

bool equivalent(const RunConfig& a, const RunConfig& b) {
    auto same_nl = [](const NonlinearityConfig& x, const NonlinearityConfig& y) {
        return Expr::parse(x.expr) == Expr::parse(y.expr) && x.lipschitz == y.lipschitz &&
               x.zero_at_zero == y.zero_at_zero;
    };
    if (a.params.k != b.params.k || a.params.rho != b.params.rho ||
        a.params.gamma_ord != b.params.gamma_ord || a.params.T != b.params.T) {
        return false;
    }
    if (a.equations.size() != b.equations.size()) return false;
    for (std::size_t i = 0; i < a.equations.size(); ++i) {
        const auto& x = a.equations[i];
        const auto& y = b.equations[i];
        if (x.name != y.name || !same_nl(x.f, y.f) || !same_nl(x.psi, y.psi) || !same_nl(x.g, y.g)) {
            return false;
        }
    }
    return a.solver.tol == b.solver.tol && a.solver.max_iter == b.solver.max_iter &&
           a.solver.nodes == b.solver.nodes && a.solver.seed_value == b.solver.seed_value &&
           a.quadrature.panels == b.quadrature.panels && a.quadrature.mesh == b.quadrature.mesh &&
           a.quadrature.grading == b.quadrature.grading && a.gamma_k_override == b.gamma_k_override &&
           a.kernel_mass_override == b.kernel_mass_override && a.r0 == b.r0 &&
           a.validation_radius == b.validation_radius && a.mnc.deltas == b.mnc.deltas &&
           a.mnc.ensemble_size == b.mnc.ensemble_size && a.mnc.p_max == b.mnc.p_max &&
           a.mnc.convex_samples == b.mnc.convex_samples && a.mnc.seed == b.mnc.seed &&
           a.mnc.seed_radius == b.mnc.seed_radius && a.output.format == b.output.format &&
           a.output.path == b.output.path;
}

RunConfig worked_example_config() {
    RunConfig cfg;
    cfg.params = FracParams{1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 3.0};
    const NonlinearityConfig f{"abs(a)/6", 1.0 / 6.0, true};
    const NonlinearityConfig psi{"abs(a)", 1.0, true};
    cfg.equations.push_back({"alpha", f, psi, {"a/(3 + log(x))", 1.0 / 3.0, true}});
    cfg.equations.push_back({"beta", f, psi, {"a/(2 + x)", 1.0 / 3.0, true}});
    cfg.r0 = 0.83;
    return cfg;
}

IntegralOptions integral_options(const RunConfig& config) {
    IntegralOptions opts;
    opts.panels = config.quadrature.panels;
    opts.mesh = config.quadrature.mesh;
    opts.grading = config.quadrature.grading;
    opts.gamma_k_override = config.gamma_k_override;
    return opts;
}

ArithmeticOverrides arithmetic_overrides(const RunConfig& config) {
    return {config.gamma_k_override, config.kernel_mass_override};
}

EquationSpec build_equation(const RunConfig& config, const EquationConfig& eq) {
    auto nl = [](const NonlinearityConfig& n) {
        return Nonlinearity{Expr::parse(n.expr), n.lipschitz, n.zero_at_zero};
    };
    return EquationSpec{eq.name, config.params, nl(eq.f), nl(eq.psi), nl(eq.g), integral_options(config)};
}

std::vector<EquationSpec> build_equations(const RunConfig& config) {
    std::vector<EquationSpec> out;
    for (const auto& eq : config.equations) out.push_back(build_equation(config, eq));
    return out;
}

}  // namespace hilfer::cli
