#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ctb/exact_synthesis.hpp"
#include "ctb/synthesis.hpp"

namespace ctb
{

class IdentityPauli : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class NonUnitaryEvent : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class TooManyQubits : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Qubit 0 is the leftmost character and the most significant bit of a basis index.
class PauliString
{
public:
    PauliString() = default;
    explicit PauliString(std::string label);  // throws std::invalid_argument

    const std::string& label() const { return label_; }
    int n_qubits() const { return static_cast<int>(label_.size()); }
    bool is_identity() const;
    char at(int q) const { return label_[q]; }

    /// P|x⟩ = phase(x)·|x ^ flip_mask⟩.
    std::uint64_t flip_mask() const;
    std::uint64_t sign_mask() const;  // qubits carrying Y or Z
    int y_count() const;

    bool operator==(const PauliString&) const = default;

private:
    std::string label_;
};

struct Hamiltonian
{
    int n_qubits = 0;
    std::vector<std::pair<PauliString, double>> terms;

    /// Σ|coeff|, an upper bound on ‖H‖.
    double h_norm_bound() const;
};

enum class CliffordKind
{
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    CNOT
};

struct CliffordGate
{
    CliffordKind kind;
    int qubit;      // control for CNOT
    int target = -1;
};

/// Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2}).
struct RzGate
{
    int qubit;
    double angle;
};

struct GateStringGate
{
    int qubit;
    GateString gates;
    Eigen::Matrix2cd matrix;  // floating image of the exact product

    GateStringGate(int q, GateString g);
};

struct DepolarizeEvent
{
    int qubit;
    double p;
};

using Event = std::variant<CliffordGate, RzGate, GateStringGate, DepolarizeEvent>;

class Circuit
{
public:
    explicit Circuit(int n_qubits = 0) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    const std::vector<Event>& events() const { return events_; }

    void add(Event e);  // validates qubit indices
    void append(const Circuit& other);

    /// Number of Rz events (L).
    std::size_t rz_count() const;
    std::size_t t_count() const;

private:
    int n_qubits_;
    std::vector<Event> events_;
};

using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

/// exp(i·angle·P) as basis changes, a CNOT ladder and one Rz(-2·angle).
Circuit compile_pauli_rotation(const PauliString& p, double angle);

struct PauliRotation
{
    PauliString pauli;
    double angle = 0;
};

/// First-order Trotter product; element 0 is applied first.
Circuit build_trotter_ucc(const std::vector<PauliRotation>& generators, int n_qubits);

struct ApproximationReport
{
    Circuit circuit;
    std::size_t total_t_count = 0;
    double eps_max = 0;
    double eps_mean = 0;  // over Rz events
    std::size_t distinct_angles = 0;
};

/// Replace every Rz by its budgeted Clifford+T word; equal angles share one synthesis.
ApproximationReport approximate_circuit(const Circuit& c, SynthCache& cache);
ApproximationReport approximate_circuit(const Circuit& c, int n_t, std::uint64_t seed = 0);

/// Depolarize(q, p) right after each Rz on q.
Circuit depolarized_model_circuit(const Circuit& c, double p);

constexpr int kMaxStatevectorQubits = 20;
constexpr int kMaxDensityQubits = 10;
constexpr int kMaxGroundStateQubits = 12;

StateVector basis_state(int n_qubits, std::uint64_t index);
DensityMatrix pure_density(const StateVector& psi);

StateVector run_statevector(const Circuit& c, const StateVector& initial, int max_qubits = kMaxStatevectorQubits);
DensityMatrix run_density(const Circuit& c, const DensityMatrix& initial, int max_qubits = kMaxDensityQubits);

/// Dense matrix of a unitary-only circuit (small n; used as an oracle).
Eigen::MatrixXcd circuit_unitary(const Circuit& c);
Eigen::MatrixXcd pauli_matrix(const PauliString& p);

StateVector apply_pauli(const PauliString& p, const StateVector& psi);
StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& psi);

double expectation(const StateVector& psi, const Hamiltonian& h);
double expectation(const DensityMatrix& rho, const Hamiltonian& h);

/// |⟨a|b⟩|².
double fidelity(const StateVector& a, const StateVector& b);

/// ‖ρ - σ‖₁ for Hermitian arguments.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

struct GroundState
{
    double energy = 0;
    StateVector psi;
    double residual = 0;  // ‖Hψ - E₀ψ‖
};

GroundState ground_state(const Hamiltonian& h, int max_qubits = kMaxGroundStateQubits);

} // namespace ctb
