#include "ctb/fixture.hpp"

#include <fstream>

namespace ctb
{

namespace
{

template <class T>
T field(const nlohmann::json& j, const char* key, const char* where)
{
    if (!j.is_object() || !j.contains(key))
        throw FixtureError(std::string(where) + ": missing field '" + key + "'");
    try
    {
        return j.at(key).get<T>();
    }
    catch (const nlohmann::json::exception& e)
    {
        throw FixtureError(std::string(where) + ": bad field '" + key + "': " + e.what());
    }
}

PauliString pauli_field(const nlohmann::json& j, int n_qubits, const char* where)
{
    const auto label = field<std::string>(j, "pauli", where);
    if (static_cast<int>(label.size()) != n_qubits)
        throw FixtureError(std::string(where) + ": Pauli '" + label + "' does not have n_qubits characters");
    try
    {
        return PauliString(label);
    }
    catch (const std::invalid_argument& e)
    {
        throw FixtureError(std::string(where) + ": " + e.what());
    }
}

int qubit_count(const nlohmann::json& j, const char* where)
{
    const int n = field<int>(j, "n_qubits", where);
    if (n < 1 || n > 63)
        throw FixtureError(std::string(where) + ": n_qubits out of range");
    return n;
}

} // namespace

std::uint64_t Fixture::hf_index() const
{
    const auto ne = meta_number("n_electrons");
    if (!ne || *ne < 0 || *ne > n_qubits())
        throw FixtureError(system + ": metadata lacks a valid n_electrons");
    std::uint64_t idx = 0;
    for (int q = 0; q < static_cast<int>(*ne); ++q)
        idx |= std::uint64_t(1) << (n_qubits() - 1 - q);
    return idx;
}

std::optional<double> Fixture::meta_number(const std::string& key) const
{
    if (meta.is_object() && meta.contains(key) && meta[key].is_number())
        return meta[key].get<double>();
    return std::nullopt;
}

Hamiltonian hamiltonian_from_json(const nlohmann::json& j)
{
    Hamiltonian h;
    h.n_qubits = qubit_count(j, "hamiltonian");
    const auto& terms = j.contains("terms") ? j["terms"] : nlohmann::json();
    if (!terms.is_array())
        throw FixtureError("hamiltonian: 'terms' must be an array");
    for (const auto& t : terms)
        h.terms.emplace_back(pauli_field(t, h.n_qubits, "hamiltonian term"), field<double>(t, "coeff", "hamiltonian term"));
    return h;
}

std::vector<PauliRotation> generators_from_json(const nlohmann::json& j, int n_qubits)
{
    if (qubit_count(j, "generators") != n_qubits)
        throw FixtureError("generators: n_qubits differs from the Hamiltonian");
    const auto& list = j.contains("generators") ? j["generators"] : nlohmann::json();
    if (!list.is_array())
        throw FixtureError("generators: 'generators' must be an array");
    std::vector<PauliRotation> out;
    for (const auto& g : list)
    {
        PauliRotation r{pauli_field(g, n_qubits, "generator"), field<double>(g, "angle", "generator")};
        if (r.pauli.is_identity())
            throw FixtureError("generator: identity Pauli string");
        out.push_back(std::move(r));
    }
    return out;
}

nlohmann::json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FixtureError("cannot open " + path.string());
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw FixtureError(path.string() + ": " + e.what());
    }
}

Fixture load_fixture(const std::filesystem::path& path)
{
    const auto doc = read_json_file(path);
    if (!doc.is_object() || !doc.contains("hamiltonian") || !doc.contains("generators"))
        throw FixtureError(path.string() + ": expected 'hamiltonian' and 'generators' objects");
    Fixture f;
    f.hamiltonian = hamiltonian_from_json(doc["hamiltonian"]);
    f.generators = generators_from_json(doc["generators"], f.hamiltonian.n_qubits);
    f.meta = doc["hamiltonian"].value("meta", nlohmann::json::object());
    f.system = doc.value("system", f.meta.value("system", path.stem().string()));
    return f;
}

Fixture load_fixture(const std::filesystem::path& hamiltonian, const std::filesystem::path& generators)
{
    const auto hj = read_json_file(hamiltonian);
    Fixture f;
    f.hamiltonian = hamiltonian_from_json(hj);
    f.generators = generators_from_json(read_json_file(generators), f.hamiltonian.n_qubits);
    f.meta = hj.value("meta", nlohmann::json::object());
    f.system = f.meta.value("system", hamiltonian.stem().string());
    return f;
}

} // namespace ctb
