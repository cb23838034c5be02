#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctb/circuit.hpp"
#include "json.hpp"

namespace ctb
{

/// Malformed or unreadable fixture / input file.
class FixtureError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Fixture
{
    std::string system;
    Hamiltonian hamiltonian;
    std::vector<PauliRotation> generators;
    nlohmann::json meta;  // Hamiltonian metadata

    int n_qubits() const { return hamiltonian.n_qubits; }
    /// Basis index of the Hartree–Fock state: the first n_electrons qubits occupied.
    std::uint64_t hf_index() const;
    std::optional<double> meta_number(const std::string& key) const;
};

Hamiltonian hamiltonian_from_json(const nlohmann::json& j);
std::vector<PauliRotation> generators_from_json(const nlohmann::json& j, int n_qubits);

/// Combined file {"system", "hamiltonian", "generators"}.
Fixture load_fixture(const std::filesystem::path& path);
/// Separate Hamiltonian and generator files.
Fixture load_fixture(const std::filesystem::path& hamiltonian, const std::filesystem::path& generators);

nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace ctb
