#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilfer/equation_model.hpp"
#include "hilfer/errors.hpp"
#include "hilfer/solvability.hpp"

namespace hilfer::cli {

/// Configuration problem; the message starts with the JSON pointer or byte
/// position of the offending input.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct NonlinearityConfig {
    std::string expr;
    double lipschitz = 0.0;
    bool zero_at_zero = false;
};

struct EquationConfig {
    std::string name;
    NonlinearityConfig f;
    NonlinearityConfig psi;
    NonlinearityConfig g;
};

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 200;
    std::size_t nodes = 201;
    double seed_value = 0.5;
};

struct QuadratureConfig {
    std::size_t panels = 1024;
    MeshKind mesh = MeshKind::uniform;
    double grading = 2.0;
};

struct MncConfig {
    std::vector<double> deltas{0.08, 0.04, 0.02, 0.01};
    std::size_t ensemble_size = 30;
    int p_max = 8;
    std::size_t convex_samples = 30;
    std::uint64_t seed = 42;
    double seed_radius = 0.1;
};

enum class OutputFormat { csv, json_lines };

struct OutputConfig {
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> path;
};

struct RunConfig {
    FracParams params;
    std::vector<EquationConfig> equations;
    SolverConfig solver;
    QuadratureConfig quadrature;
    std::optional<double> gamma_k_override;
    std::optional<double> kernel_mass_override;
    std::optional<double> r0;
    double validation_radius = 1.0;
    MncConfig mnc;
    OutputConfig output;
};

/// Parses and validates a JSON configuration.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

nlohmann::ordered_json to_json(const RunConfig& config);

/// Two configs describe the same run (floating fields compared exactly).
bool equivalent(const RunConfig& lhs, const RunConfig& rhs);

/// Both equations of the worked example on [1, 3] with k = ρ = 1/3, γ = 2/3,
/// declared constants 1/6, 1, 1/3 and r0 = 0.83.
RunConfig worked_example_config();

/// Γ_k(γ) and (T^ρ - 1)^(γ/k) exactly as printed in the worked example's hand arithmetic.
inline constexpr double kPrintedGammaK = 2.4047;
inline constexpr double kPrintedKernelMass = 0.5358;

IntegralOptions integral_options(const RunConfig& config);
ArithmeticOverrides arithmetic_overrides(const RunConfig& config);
EquationSpec build_equation(const RunConfig& config, const EquationConfig& eq);
std::vector<EquationSpec> build_equations(const RunConfig& config);

}  // namespace hilfer::cli
