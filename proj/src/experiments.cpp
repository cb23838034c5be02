#include "ctb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ctb/noise.hpp"
#include "ctb/seed.hpp"

namespace ctb
{

namespace
{

const char* const kSweepHeader = "system,n_qubits,L,n_t,eps_max,eps_mean,total_t_count,energy,fidelity,wall_time_s";
const char* const kSweepVersion = "ctb-sweep v1";

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep))
        out.push_back(cell);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const char* what)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (const std::exception&)
    {
        throw FixtureError(std::string("sweep CSV: bad ") + what + " value '" + s + "'");
    }
}

std::vector<double> ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();)
    {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double avg = (double(i) + double(j)) / 2 + 1;
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double model_eps(int n_t)
{
    return std::pow(10.0, -n_t / 10.0);
}

std::optional<double> Sweep::meta_number(const std::string& key) const
{
    const auto it = meta.find(key);
    if (it == meta.end())
        return std::nullopt;
    try
    {
        return std::stod(it->second);
    }
    catch (const std::exception&)
    {
        return std::nullopt;
    }
}

Reference prepare_reference(const Fixture& f)
{
    Reference r;
    r.circuit = build_trotter_ucc(f.generators, f.n_qubits());
    r.initial = basis_state(f.n_qubits(), f.hf_index());
    r.ideal_state = run_statevector(r.circuit, r.initial);
    r.e_ideal = expectation(r.ideal_state, f.hamiltonian);
    r.ground = ground_state(f.hamiltonian);
    r.f_ideal = fidelity(r.ideal_state, r.ground.psi);
    return r;
}

Sweep run_sweep(const Fixture& f, int nt_min, int nt_max, int step, std::uint64_t seed)
{
    if (step < 1 || nt_min < 1 || nt_max < nt_min)
        throw std::invalid_argument("N_T range must satisfy 1 ≤ nt_min ≤ nt_max and step ≥ 1");
    std::vector<int> n_ts;
    for (int n = nt_min; n <= nt_max; n += step)
        n_ts.push_back(n);
    return run_sweep(f, prepare_reference(f), n_ts, seed);
}

Sweep run_sweep(const Fixture& f, const Reference& ref, const std::vector<int>& n_ts, std::uint64_t seed)
{
    Sweep s;
    s.meta["format"] = kSweepVersion;
    s.meta["system"] = f.system;
    s.meta["n_qubits"] = std::to_string(f.n_qubits());
    s.meta["L"] = std::to_string(ref.circuit.rz_count());
    s.meta["seed"] = std::to_string(seed);
    s.meta["e_ideal"] = fmt17(ref.e_ideal);
    s.meta["f_ideal"] = fmt17(ref.f_ideal);
    s.meta["e_ground"] = fmt17(ref.ground.energy);
    s.meta["h_norm_bound"] = fmt17(f.hamiltonian.h_norm_bound());

    for (int n_t : n_ts)
    {
        const auto t0 = std::chrono::steady_clock::now();
        SynthCache cache(n_t, derive_seed(seed, std::uint64_t(n_t)));
        const ApproximationReport rep = approximate_circuit(ref.circuit, cache);
        const StateVector psi = run_statevector(rep.circuit, ref.initial);
        SweepRow row;
        row.system = f.system;
        row.n_qubits = f.n_qubits();
        row.L = ref.circuit.rz_count();
        row.n_t = n_t;
        row.eps_max = rep.eps_max;
        row.eps_mean = rep.eps_mean;
        row.total_t_count = rep.total_t_count;
        row.energy = expectation(psi, f.hamiltonian);
        row.fidelity = fidelity(psi, ref.ground.psi);
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        s.rows.push_back(row);
    }
    return s;
}

void write_sweep_csv(std::ostream& out, const Sweep& s)
{
    // format line first, the rest of the metadata in key order
    out << "# format=" << kSweepVersion << '\n';
    for (const auto& [k, v] : s.meta)
        if (k != "format")
            out << "# " << k << '=' << v << '\n';
    out << kSweepHeader << '\n';
    for (const auto& r : s.rows)
        out << r.system << ',' << r.n_qubits << ',' << r.L << ',' << r.n_t << ',' << fmt17(r.eps_max) << ','
            << fmt17(r.eps_mean) << ',' << r.total_t_count << ',' << fmt17(r.energy) << ',' << fmt17(r.fidelity)
            << ',' << fmt17(r.wall_time_s) << '\n';
}

Sweep read_sweep_csv(std::istream& in)
{
    Sweep s;
    std::string line;
    bool header = false;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            const auto eq = line.find('=');
            if (eq != std::string::npos)
            {
                const auto key_start = line.find_first_not_of("# ");
                s.meta[line.substr(key_start, eq - key_start)] = line.substr(eq + 1);
            }
            continue;
        }
        if (!header)
        {
            if (line != kSweepHeader)
                throw FixtureError("sweep CSV: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 10)
            throw FixtureError("sweep CSV: expected 10 columns in '" + line + "'");
        SweepRow r;
        r.system = cells[0];
        r.n_qubits = static_cast<int>(parse_double(cells[1], "n_qubits"));
        r.L = static_cast<std::size_t>(parse_double(cells[2], "L"));
        r.n_t = static_cast<int>(parse_double(cells[3], "n_t"));
        r.eps_max = parse_double(cells[4], "eps_max");
        r.eps_mean = parse_double(cells[5], "eps_mean");
        r.total_t_count = static_cast<std::size_t>(parse_double(cells[6], "total_t_count"));
        r.energy = parse_double(cells[7], "energy");
        r.fidelity = parse_double(cells[8], "fidelity");
        r.wall_time_s = parse_double(cells[9], "wall_time_s");
        s.rows.push_back(r);
    }
    if (!header)
        throw FixtureError("sweep CSV: missing header");
    return s;
}

Sweep read_sweep_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FixtureError("cannot open " + path);
    return read_sweep_csv(in);
}

nlohmann::ordered_json sweep_to_json(const Sweep& s)
{
    nlohmann::ordered_json j;
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.meta)
        j["meta"][k] = v;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : s.rows)
        j["rows"].push_back({{"system", r.system},
                             {"n_qubits", r.n_qubits},
                             {"L", r.L},
                             {"n_t", r.n_t},
                             {"eps_max", r.eps_max},
                             {"eps_mean", r.eps_mean},
                             {"total_t_count", r.total_t_count},
                             {"energy", r.energy},
                             {"fidelity", r.fidelity},
                             {"wall_time_s", r.wall_time_s}});
    return j;
}

double energy_model(double c, double e_ideal, std::size_t L, int n_t, bool abs_model)
{
    const double eps = model_eps(n_t);
    const double x = c * eps * eps;
    // 1 - (1 - x)^L, accurate for tiny x
    const double decay = x < 1 ? -std::expm1(double(L) * std::log1p(-x)) : 1 - std::pow(1 - x, double(L));
    const double scale = abs_model ? std::abs(e_ideal) : e_ideal;
    return e_ideal + 2 * scale * decay;
}

EnergyFit fit_energy(const std::vector<SweepRow>& rows, double e_ideal, std::size_t L, int nt_fit_min, bool abs_model)
{
    std::vector<const SweepRow*> pts;
    for (const auto& r : rows)
        if (r.n_t >= nt_fit_min)
            pts.push_back(&r);
    if (pts.size() < 4)
        throw InsufficientData("energy fit needs at least 4 rows with N_T ≥ " + std::to_string(nt_fit_min));

    auto rms = [&](double log_c) {
        const double c = std::pow(10.0, log_c);
        double s = 0;
        for (const auto* r : pts)
        {
            const double d = energy_model(c, e_ideal, L, r->n_t, abs_model) - r->energy;
            s += d * d;
        }
        return std::sqrt(s / double(pts.size()));
    };

    // golden section on log10 c; bracket width 1e-8 in log10 is ~2e-8 relative in c
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = -4, b = 4;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = rms(x1), f2 = rms(x2);
    while (b - a > 1e-8)
    {
        if (f1 <= f2)
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = rms(x1);
        }
        else
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = rms(x2);
        }
    }
    const double best = (a + b) / 2;
    EnergyFit fit;
    fit.c = std::pow(10.0, best);
    fit.e_ideal = e_ideal;
    fit.L = L;
    fit.residual = rms(best);
    fit.points = pts.size();
    fit.abs_model = abs_model;
    fit.at_bracket_edge = best < -4 + 1e-6 || best > 4 - 1e-6;
    return fit;
}

double delta_rel(double fidelity, double f_ideal)
{
    return std::abs(fidelity - f_ideal) / f_ideal;
}

Threshold find_threshold(std::vector<SweepRow> rows, double f_ideal, double tol)
{
    if (!(f_ideal > 0))
        throw std::invalid_argument("F_ideal must be positive");
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.n_t < b.n_t; });
    Threshold t;
    for (const auto& r : rows)
        if (delta_rel(r.fidelity, f_ideal) < tol)
        {
            t.first = r.n_t;
            break;
        }
    // walk back from the largest N_T while the criterion keeps holding
    for (auto it = rows.rbegin(); it != rows.rend() && delta_rel(it->fidelity, f_ideal) < tol; ++it)
        t.stable = it->n_t;
    return t;
}

double quartic_fit(const std::vector<QuarticPoint>& points)
{
    if (points.size() < 2)
        throw InsufficientData("quartic fit needs at least 2 points");
    double num = 0, den = 0;
    for (const auto& p : points)
    {
        const double n4 = std::pow(p.n, 4);
        num += n4 * p.y;
        den += n4 * n4;
    }
    if (den == 0)
        throw InsufficientData("quartic fit needs a point with n ≠ 0");
    return num / den;
}

double quartic_extrapolate(double a, double n)
{
    return a * std::pow(n, 4);
}

std::vector<BoundRow> compare_bounds(const Fixture& f, const std::vector<int>& n_ts, std::uint64_t seed)
{
    const Reference ref = prepare_reference(f);
    const double h = f.hamiltonian.h_norm_bound();
    std::vector<BoundRow> out;
    for (int n_t : n_ts)
    {
        SynthCache cache(n_t, derive_seed(seed, std::uint64_t(n_t)));
        const ApproximationReport rep = approximate_circuit(ref.circuit, cache);
        const StateVector psi = run_statevector(rep.circuit, ref.initial);
        BoundRow r;
        r.n_t = n_t;
        r.L = ref.circuit.rz_count();
        r.eps_max = rep.eps_max;
        r.eps_mean = rep.eps_mean;
        r.measured = std::abs(expectation(psi, f.hamiltonian) - ref.e_ideal);
        const EnergyBounds b = energy_error_bounds(std::min(rep.eps_max, 2.0), r.L, h);
        r.averaged = b.averaged;
        r.naive = b.naive;
        out.push_back(r);
    }
    return out;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundRow>& rows, const std::string& system)
{
    out << "# format=ctb-bounds v1\n# system=" << system << '\n';
    out << "n_t,L,eps_max,eps_mean,measured,averaged_bound,naive_bound\n";
    for (const auto& r : rows)
        out << r.n_t << ',' << r.L << ',' << fmt17(r.eps_max) << ',' << fmt17(r.eps_mean) << ','
            << fmt17(r.measured) << ',' << fmt17(r.averaged) << ',' << fmt17(r.naive) << '\n';
}

nlohmann::ordered_json validate_noise_report(const std::vector<double>& deltas, std::size_t samples, std::uint64_t seed)
{
    nlohmann::ordered_json out;
    out["samples"] = samples;
    out["seed"] = seed;
    out["reports"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < deltas.size(); ++i)
    {
        const double d = deltas[i];
        nlohmann::ordered_json r;
        r["delta"] = d;
        if (d == 0)
        {
            r["p_formula"] = 0.0;
            r["p_exact"] = 0.0;
            r["p_fitted_from_mc"] = 0.0;
            r["p_fitted_stderr"] = 0.0;
            r["ptm_distance"] = 0.0;
            r["ptm_sigma"] = 0.0;
            r["tolerance"] = 0.0;
            r["ptm_within_tolerance"] = true;
            r["p_within_tolerance"] = true;
            r["samples"] = 0;
            r["acceptance_rate"] = 1.0;
        }
        else
        {
            const NoiseValidation v = validate_noise(d, samples, derive_seed(seed, i));
            const double floor = 2 * std::pow(d, 4);
            r["p_formula"] = v.p_formula;
            r["p_exact"] = v.p_exact;
            r["p_fitted_from_mc"] = v.p_fitted;
            r["p_fitted_stderr"] = v.p_fitted_stderr;
            r["ptm_distance"] = v.ptm_distance;
            r["ptm_sigma"] = v.ptm_sigma;
            r["tolerance"] = std::max(3 * v.ptm_sigma, floor);
            r["ptm_within_tolerance"] = v.ptm_distance <= std::max(3 * v.ptm_sigma, floor);
            r["p_within_tolerance"] = std::abs(v.p_fitted - v.p_formula) <= std::max(3 * v.p_fitted_stderr, floor);
            r["samples"] = v.samples;
            r["acceptance_rate"] = v.acceptance_rate;
        }
        out["reports"].push_back(r);
    }
    return out;
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InsufficientData("slope needs at least 2 paired points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InsufficientData("rank correlation needs at least 2 paired points");
    const auto rx = ranks(x), ry = ranks(y);
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / double(rx.size());
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / double(ry.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0;
}

} // namespace ctb
