#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctb/fixture.hpp"
#include "json.hpp"

namespace ctb
{

class InsufficientData : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// ε(N_T) = 10^(-N_T/10).
double model_eps(int n_t);

struct SweepRow
{
    std::string system;
    int n_qubits = 0;
    std::size_t L = 0;
    int n_t = 0;
    double eps_max = 0;
    double eps_mean = 0;
    std::size_t total_t_count = 0;
    double energy = 0;
    double fidelity = 0;
    double wall_time_s = 0;
};

/// Sweep output plus the reference values written into the CSV header.
struct Sweep
{
    std::map<std::string, std::string> meta;
    std::vector<SweepRow> rows;

    std::optional<double> meta_number(const std::string& key) const;
};

/// Ideal (unapproximated) UCC state and the exact ground state for a fixture.
struct Reference
{
    Circuit circuit;
    StateVector initial;
    StateVector ideal_state;
    double e_ideal = 0;
    double f_ideal = 0;
    GroundState ground;
};

Reference prepare_reference(const Fixture& f);

/// One row per N_T in [nt_min, nt_max] by step; row seed = splitmix(seed, N_T).
Sweep run_sweep(const Fixture& f, int nt_min, int nt_max, int step, std::uint64_t seed);
Sweep run_sweep(const Fixture& f, const Reference& ref, const std::vector<int>& n_ts, std::uint64_t seed);

void write_sweep_csv(std::ostream& out, const Sweep& s);
Sweep read_sweep_csv(std::istream& in);
Sweep read_sweep_csv_file(const std::string& path);
nlohmann::ordered_json sweep_to_json(const Sweep& s);

struct EnergyFit
{
    double c = 0;
    double e_ideal = 0;
    std::size_t L = 0;
    double residual = 0;  // RMS over fitted points
    std::size_t points = 0;
    bool abs_model = false;
    bool at_bracket_edge = false;  // optimum pinned to c = 1e-4 or 1e4
};

/// E_ideal + 2·E_ideal·(1 - (1 - c·ε(N_T)²)^L); with abs_model, 2|E_ideal| instead.
double energy_model(double c, double e_ideal, std::size_t L, int n_t, bool abs_model = false);

/// Golden-section search for c on log10 c ∈ [-4, 4], rows with N_T ≥ nt_fit_min.
EnergyFit fit_energy(const std::vector<SweepRow>& rows, double e_ideal, std::size_t L, int nt_fit_min = 32,
                     bool abs_model = false);

/// |F - F_ideal| / F_ideal.
double delta_rel(double fidelity, double f_ideal);

struct Threshold
{
    std::optional<int> first;   // first N_T with δ_rel < tol
    std::optional<int> stable;  // first N_T after which every sampled N_T has δ_rel < tol
};

constexpr double kThresholdTol = 1e-4;

Threshold find_threshold(std::vector<SweepRow> rows, double f_ideal, double tol = kThresholdTol);

struct QuarticPoint
{
    double n = 0;  // qubits
    double y = 0;  // total threshold T-count
};

/// a minimizing Σ(a·n⁴ - y)².
double quartic_fit(const std::vector<QuarticPoint>& points);
double quartic_extrapolate(double a, double n);

struct BoundRow
{
    int n_t = 0;
    std::size_t L = 0;
    double eps_max = 0;
    double eps_mean = 0;
    double measured = 0;  // |E_approx - E_ideal|
    double averaged = 0;  // 2‖H‖(1 - (1 - p(ε_max))^L)
    double naive = 0;     // 2‖H‖·L·ε_max
};

std::vector<BoundRow> compare_bounds(const Fixture& f, const std::vector<int>& n_ts, std::uint64_t seed);
void write_bounds_csv(std::ostream& out, const std::vector<BoundRow>& rows, const std::string& system);

/// One report per δ; δ = 0 yields the exact identity report without sampling.
nlohmann::ordered_json validate_noise_report(const std::vector<double>& deltas, std::size_t samples,
                                             std::uint64_t seed);

/// Least-squares slope of y against x.
double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

} // namespace ctb
