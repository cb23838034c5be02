// ctb: command-line front end for synthesis, sweeps and fits.

#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "ctb/experiments.hpp"
#include "ctb/noise.hpp"
#include "ctb/synthesis.hpp"

using namespace ctb;

namespace
{

enum Exit
{
    kOk = 0,
    kFailure = 1,
    kSchema = 2,
    kCeiling = 3,
    kInsufficient = 4
};

// Write to --out if given, stdout otherwise.
template <class F>
void emit(const std::string& path, F&& write)
{
    if (path.empty() || path == "-")
    {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    write(out);
}

std::vector<int> nt_range(int lo, int hi, int step)
{
    if (step < 1 || lo < 1 || hi < lo)
        throw std::invalid_argument("N_T range must satisfy 1 ≤ nt-min ≤ nt-max and nt-step ≥ 1");
    std::vector<int> v;
    for (int n = lo; n <= hi; n += step)
        v.push_back(n);
    return v;
}

double require_meta(const Sweep& s, const std::optional<double>& flag, const char* key, const char* flag_name)
{
    if (flag)
        return *flag;
    if (const auto v = s.meta_number(key))
        return *v;
    throw FixtureError(std::string("sweep CSV has no '") + key + "' metadata; pass " + flag_name);
}

nlohmann::ordered_json json_or_null(const std::optional<int>& v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Clifford+T rotation synthesis and error-averaging experiments"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Approximate Rz(theta) with at most N_T T gates");
    double theta = 0;
    int n_t = 30;
    std::uint64_t seed = 0;
    std::optional<double> eps_tilde;
    synth->add_option("--theta", theta, "rotation angle (radians)")->required();
    synth->add_option("--nt", n_t, "T-count budget")->required();
    synth->add_option("--seed", seed, "seed for the norm-equation solver");
    synth->add_option("--eps-tilde", eps_tilde, "initial search radius (default 4*10^(-N_T/10))");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Approximate a fixture's UCC circuit over a range of budgets");
    std::string fixture, out_path, format = "csv";
    int nt_min = 22, nt_max = 50, nt_step = 2;
    sweep->add_option("--fixture", fixture, "fixture JSON")->required();
    sweep->add_option("--nt-min", nt_min);
    sweep->add_option("--nt-max", nt_max);
    sweep->add_option("--nt-step", nt_step);
    sweep->add_option("--seed", seed);
    sweep->add_option("--out", out_path, "output file (default stdout)");
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // fit-energy
    auto* fit = app.add_subcommand("fit-energy", "Fit the energy-deviation model parameter c");
    std::string in_path;
    std::optional<double> e_ideal_flag, l_flag;
    int nt_fit_min = 32;
    bool abs_model = false;
    fit->add_option("--in", in_path, "sweep CSV")->required();
    fit->add_option("--e-ideal", e_ideal_flag, "override E_ideal from the CSV metadata");
    fit->add_option("--L", l_flag, "override the rotation count");
    fit->add_option("--nt-fit-min", nt_fit_min);
    fit->add_flag("--abs-model", abs_model, "use 2|E_ideal| in the model (sensitivity check, not the literal model)");

    // threshold
    auto* thr = app.add_subcommand("threshold", "Smallest N_T with relative fidelity error below 1e-4");
    std::optional<double> f_ideal_flag;
    thr->add_option("--in", in_path, "sweep CSV")->required();
    thr->add_option("--f-ideal", f_ideal_flag, "override F_ideal from the CSV metadata");

    // quartic-fit
    auto* quart = app.add_subcommand("quartic-fit", "Fit total threshold T-count to a*n^4");
    std::vector<std::string> points, sweeps;
    std::optional<double> a_flag;
    std::vector<double> extrapolate;
    quart->add_option("--point", points, "n:total_t_count pair (repeatable)");
    quart->add_option("--sweep", sweeps, "sweep CSV; contributes (n_qubits, N_T* x L) using the stable threshold");
    quart->add_option("--a", a_flag, "skip fitting and use this coefficient");
    quart->add_option("--extrapolate", extrapolate, "report a*n^4 for these qubit counts");

    // validate-noise
    auto* noise = app.add_subcommand("validate-noise", "Monte-Carlo check of the averaged depolarizing channel");
    std::vector<double> deltas{0.05, 0.1, 0.2, 0.4};
    std::size_t samples = 1'000'000;
    noise->add_option("--delta", deltas, "noise radius delta (repeatable)");
    noise->add_option("--samples", samples);
    noise->add_option("--seed", seed);
    noise->add_option("--out", out_path);

    // compare-bounds
    auto* bounds = app.add_subcommand("compare-bounds", "Measured energy deviation versus averaged and naive bounds");
    std::vector<int> nts;
    bounds->add_option("--fixture", fixture)->required();
    bounds->add_option("--nt", nts, "budgets (repeatable); default nt-min..nt-max");
    bounds->add_option("--nt-min", nt_min);
    bounds->add_option("--nt-max", nt_max);
    bounds->add_option("--nt-step", nt_step);
    bounds->add_option("--seed", seed);
    bounds->add_option("--out", out_path);

    for (auto* sc : {fit, thr, quart})
        sc->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    bounds->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*synth)
        {
            SynthesisRequest req;
            req.theta = theta;
            req.n_t = n_t;
            req.seed = seed;
            req.eps_tilde_init = eps_tilde;
            std::cout << to_json(synthesize_budgeted(req)).dump(2) << '\n';
        }
        else if (*sweep)
        {
            const Fixture f = load_fixture(fixture);
            const Sweep s = run_sweep(f, nt_min, nt_max, nt_step, seed);
            emit(out_path, [&](std::ostream& os) {
                if (format == "json")
                    os << sweep_to_json(s).dump(2) << '\n';
                else
                    write_sweep_csv(os, s);
            });
        }
        else if (*fit)
        {
            const Sweep s = read_sweep_csv_file(in_path);
            const double e_ideal = require_meta(s, e_ideal_flag, "e_ideal", "--e-ideal");
            const auto L = static_cast<std::size_t>(require_meta(s, l_flag, "L", "--L"));
            const EnergyFit r = fit_energy(s.rows, e_ideal, L, nt_fit_min, abs_model);
            if (format == "csv")
                std::cout << std::setprecision(17) << "c,e_ideal,L,residual,points,abs_model,at_bracket_edge\n"
                          << r.c << ',' << r.e_ideal << ',' << r.L << ',' << r.residual << ',' << r.points << ','
                          << r.abs_model << ',' << r.at_bracket_edge << '\n';
            else
            {
                nlohmann::ordered_json j{{"c", r.c},           {"e_ideal", r.e_ideal}, {"L", r.L},
                                         {"residual", r.residual}, {"points", r.points},   {"abs_model", r.abs_model},
                                         {"at_bracket_edge", r.at_bracket_edge}, {"nt_fit_min", nt_fit_min}};
                std::cout << j.dump(2) << '\n';
            }
        }
        else if (*thr)
        {
            const Sweep s = read_sweep_csv_file(in_path);
            const double f_ideal = require_meta(s, f_ideal_flag, "f_ideal", "--f-ideal");
            const Threshold t = find_threshold(s.rows, f_ideal);
            if (format == "csv")
                std::cout << "first,stable\n" << (t.first ? std::to_string(*t.first) : "") << ','
                          << (t.stable ? std::to_string(*t.stable) : "") << '\n';
            else
            {
                nlohmann::ordered_json j;
                j["f_ideal"] = f_ideal;
                j["tolerance"] = kThresholdTol;
                j["first"] = json_or_null(t.first);
                j["stable"] = json_or_null(t.stable);
                j["rows"] = nlohmann::ordered_json::array();
                for (const auto& r : s.rows)
                    j["rows"].push_back({{"n_t", r.n_t}, {"delta_rel", delta_rel(r.fidelity, f_ideal)}});
                std::cout << j.dump(2) << '\n';
            }
        }
        else if (*quart)
        {
            std::vector<QuarticPoint> pts;
            for (const auto& p : points)
            {
                const auto colon = p.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("--point expects n:total, got " + p);
                pts.push_back({std::stod(p.substr(0, colon)), std::stod(p.substr(colon + 1))});
            }
            nlohmann::ordered_json used = nlohmann::ordered_json::array();
            for (const auto& path : sweeps)
            {
                const Sweep s = read_sweep_csv_file(path);
                const double f_ideal = require_meta(s, std::nullopt, "f_ideal", "a sweep with metadata");
                const Threshold t = find_threshold(s.rows, f_ideal);
                if (!t.stable)
                    throw InsufficientData(path + ": fidelity threshold never reached");
                const double L = require_meta(s, std::nullopt, "L", "a sweep with metadata");
                const double n = require_meta(s, std::nullopt, "n_qubits", "a sweep with metadata");
                pts.push_back({n, *t.stable * L});
                used.push_back({{"sweep", path}, {"n_qubits", n}, {"threshold_first", json_or_null(t.first)},
                                {"threshold_stable", *t.stable}, {"L", L}, {"total", *t.stable * L}});
            }
            const double a = a_flag ? *a_flag : quartic_fit(pts);
            if (format == "csv")
            {
                std::cout << std::setprecision(17) << "a\n" << a << '\n';
                for (double n : extrapolate)
                    std::cout << "# a*" << n << "^4=" << quartic_extrapolate(a, n) << '\n';
            }
            else
            {
                nlohmann::ordered_json j;
                j["a"] = a;
                j["fitted"] = !a_flag.has_value();
                j["points"] = nlohmann::ordered_json::array();
                for (const auto& p : pts)
                    j["points"].push_back({{"n", p.n}, {"total_t_count", p.y}});
                if (!used.empty())
                    j["from_sweeps"] = used;
                j["extrapolation"] = nlohmann::ordered_json::array();
                for (double n : extrapolate)
                    j["extrapolation"].push_back({{"n", n}, {"total_t_count", quartic_extrapolate(a, n)}});
                std::cout << j.dump(2) << '\n';
            }
        }
        else if (*noise)
        {
            const auto report = validate_noise_report(deltas, samples, seed);
            emit(out_path, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
        }
        else if (*bounds)
        {
            const Fixture f = load_fixture(fixture);
            const auto list = nts.empty() ? nt_range(nt_min, nt_max, nt_step) : nts;
            const auto rows = compare_bounds(f, list, seed);
            emit(out_path, [&](std::ostream& os) {
                if (format == "json")
                {
                    nlohmann::ordered_json j = nlohmann::ordered_json::array();
                    for (const auto& r : rows)
                        j.push_back({{"n_t", r.n_t},           {"L", r.L},
                                     {"eps_max", r.eps_max},   {"eps_mean", r.eps_mean},
                                     {"measured", r.measured}, {"averaged_bound", r.averaged},
                                     {"naive_bound", r.naive}});
                    os << j.dump(2) << '\n';
                }
                else
                    write_bounds_csv(os, rows, f.system);
            });
        }
    }
    catch (const FixtureError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kSchema;
    }
    catch (const TooManyQubits& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kCeiling;
    }
    catch (const EnumerationCapExceeded& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kCeiling;
    }
    catch (const InsufficientData& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kInsufficient;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
