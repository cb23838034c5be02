#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ctb/experiments.hpp"
#include "ctb/noise.hpp"

using namespace ctb;

namespace
{

const std::string kFixtures = CTB_FIXTURE_DIR;

std::vector<SweepRow> model_rows(double c, double e_ideal, std::size_t L, double noise_rel, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0, 1);
    std::vector<SweepRow> rows;
    for (int n_t = 22; n_t <= 50; n_t += 2)
    {
        SweepRow r;
        r.n_t = n_t;
        r.energy = energy_model(c, e_ideal, L, n_t);
        // noise relative to the deviation term, so it stays visible at every N_T
        r.energy += noise_rel * (r.energy - e_ideal) * gauss(rng);
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepRow> fidelity_rows(const std::vector<std::pair<int, double>>& pts)
{
    std::vector<SweepRow> rows;
    for (const auto& [n_t, f] : pts)
    {
        SweepRow r;
        r.n_t = n_t;
        r.fidelity = f;
        rows.push_back(r);
    }
    return rows;
}

// Shared across tests: the H2 sweep is the expensive part.
const Sweep& h2_sweep()
{
    static const Sweep s = run_sweep(load_fixture(kFixtures + "/H2.json"), 22, 50, 2, 1);
    return s;
}

std::string without_wall_time(const Sweep& s)
{
    Sweep copy = s;
    for (auto& r : copy.rows)
        r.wall_time_s = 0;
    std::ostringstream out;
    write_sweep_csv(out, copy);
    return out.str();
}

} // namespace

TEST(ModelEps, Values)
{
    EXPECT_DOUBLE_EQ(model_eps(10), 0.1);
    EXPECT_NEAR(model_eps(30), 1e-3, 1e-18);
}

TEST(EnergyModel, VerbatimSign)
{
    // with E_ideal < 0 the literal model lies below E_ideal; the abs variant above
    EXPECT_LT(energy_model(0.5, -1.0, 50, 22), -1.0);
    EXPECT_GT(energy_model(0.5, -1.0, 50, 22, true), -1.0);
    EXPECT_DOUBLE_EQ(energy_model(0.0, -1.0, 50, 22), -1.0);
}

TEST(FitEnergy, NoiselessRoundTrip)
{
    const auto rows = model_rows(0.5, -1.0, 50, 0.0, 0);
    const EnergyFit f = fit_energy(rows, -1.0, 50);
    EXPECT_NEAR(f.c, 0.5, 1e-6);
    EXPECT_EQ(f.points, 10u);
    EXPECT_LT(f.residual, 1e-12);
    EXPECT_FALSE(f.at_bracket_edge);
}

TEST(FitEnergy, NoisyRoundTrip)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto rows = model_rows(0.5, -1.0, 50, 0.01, seed);
        EXPECT_NEAR(fit_energy(rows, -1.0, 50).c, 0.5, 0.05) << seed;
    }
}

TEST(FitEnergy, AbsModelRoundTrip)
{
    std::vector<SweepRow> rows;
    for (int n_t = 32; n_t <= 50; n_t += 2)
    {
        SweepRow r;
        r.n_t = n_t;
        r.energy = energy_model(2.0, -1.5, 20, n_t, true);
        rows.push_back(r);
    }
    const EnergyFit f = fit_energy(rows, -1.5, 20, 32, true);
    EXPECT_NEAR(f.c, 2.0, 2e-6);
    EXPECT_TRUE(f.abs_model);
}

TEST(FitEnergy, WrongSignedDataPinsToBracketEdge)
{
    // deviations above E_ideal cannot be matched by the literal model when E_ideal < 0
    const auto rows = model_rows(0.5, -1.0, 50, 0.0, 0);
    std::vector<SweepRow> flipped = rows;
    for (auto& r : flipped)
        r.energy = -2.0 - r.energy;
    const EnergyFit f = fit_energy(flipped, -1.0, 50);
    EXPECT_TRUE(f.at_bracket_edge);
    EXPECT_NEAR(f.c, 1e-4, 1e-10);
}

TEST(FitEnergy, InsufficientData)
{
    auto rows = model_rows(0.5, -1.0, 50, 0.0, 0);
    EXPECT_THROW(fit_energy(rows, -1.0, 50, 46), InsufficientData);
    EXPECT_NO_THROW(fit_energy(rows, -1.0, 50, 44));
}

TEST(Threshold, IdenticalSeriesGivesFirstSample)
{
    const auto rows = fidelity_rows({{26, 0.9}, {22, 0.9}, {24, 0.9}});
    const Threshold t = find_threshold(rows, 0.9);
    EXPECT_EQ(t.first, 22);
    EXPECT_EQ(t.stable, 22);
}

TEST(Threshold, NeverReached)
{
    const Threshold t = find_threshold(fidelity_rows({{22, 0.5}, {24, 0.6}}), 0.9);
    EXPECT_FALSE(t.first);
    EXPECT_FALSE(t.stable);
}

TEST(Threshold, FirstVersusStable)
{
    const auto rows = fidelity_rows({{22, 0.8}, {24, 0.99999}, {26, 0.98}, {28, 0.99995}, {30, 1.0}});
    const Threshold t = find_threshold(rows, 1.0);
    EXPECT_EQ(t.first, 24);
    EXPECT_EQ(t.stable, 28);
    EXPECT_THROW(find_threshold(rows, 0.0), std::invalid_argument);
}

TEST(Threshold, LastSampleFailingMeansNoStableCrossing)
{
    const Threshold t = find_threshold(fidelity_rows({{22, 1.0}, {24, 0.5}}), 1.0);
    EXPECT_EQ(t.first, 22);
    EXPECT_FALSE(t.stable);
}

TEST(Quartic, ExactFit)
{
    std::vector<QuarticPoint> pts;
    for (double n : {4.0, 8.0, 12.0})
        pts.push_back({n, 0.1 * std::pow(n, 4)});
    EXPECT_NEAR(quartic_fit(pts), 0.1, 1e-12);
}

TEST(Quartic, Extrapolation)
{
    const double v = quartic_extrapolate(0.078, 154);
    EXPECT_NEAR(v, 4.39e7, 0.01e7);
    EXPECT_EQ(std::floor(std::log10(v)), 7);
}

TEST(Quartic, InsufficientData)
{
    EXPECT_THROW(quartic_fit({{4, 10}}), InsufficientData);
    EXPECT_THROW(quartic_fit({{0, 1}, {0, 2}}), InsufficientData);
}

TEST(Stats, SlopeAndSpearman)
{
    EXPECT_NEAR(linear_slope({1, 2, 3}, {2, 4, 6}), 2.0, 1e-15);
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 25, 100}), 1.0, 1e-15);
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
    EXPECT_THROW(linear_slope({1}, {1}), InsufficientData);
}

TEST(SweepCsv, RoundTrip)
{
    const Sweep& s = h2_sweep();
    std::ostringstream out;
    write_sweep_csv(out, s);
    std::istringstream in(out.str());
    const Sweep back = read_sweep_csv(in);
    EXPECT_EQ(back.meta, s.meta);
    ASSERT_EQ(back.rows.size(), s.rows.size());
    for (std::size_t i = 0; i < s.rows.size(); ++i)
    {
        EXPECT_EQ(back.rows[i].n_t, s.rows[i].n_t);
        EXPECT_EQ(back.rows[i].energy, s.rows[i].energy);
        EXPECT_EQ(back.rows[i].fidelity, s.rows[i].fidelity);
        EXPECT_EQ(back.rows[i].eps_max, s.rows[i].eps_max);
        EXPECT_EQ(back.rows[i].total_t_count, s.rows[i].total_t_count);
    }
}

TEST(SweepCsv, RejectsMalformedInput)
{
    std::istringstream no_header("# format=ctb-sweep v1\n");
    EXPECT_THROW(read_sweep_csv(no_header), FixtureError);
    std::istringstream bad_header("a,b,c\n");
    EXPECT_THROW(read_sweep_csv(bad_header), FixtureError);
    std::istringstream short_row(
        "system,n_qubits,L,n_t,eps_max,eps_mean,total_t_count,energy,fidelity,wall_time_s\nH2,4,8\n");
    EXPECT_THROW(read_sweep_csv(short_row), FixtureError);
    std::istringstream bad_number(
        "system,n_qubits,L,n_t,eps_max,eps_mean,total_t_count,energy,fidelity,wall_time_s\nH2,4,8,22,x,1,1,1,1,1\n");
    EXPECT_THROW(read_sweep_csv(bad_number), FixtureError);
}

TEST(Sweep, H2Properties)
{
    const Sweep& s = h2_sweep();
    ASSERT_EQ(s.rows.size(), 15u);
    const double e_ideal = *s.meta_number("e_ideal");
    const double f_ideal = *s.meta_number("f_ideal");
    EXPECT_EQ(*s.meta_number("L"), 8);

    std::vector<double> n_ts, fids;
    for (const auto& r : s.rows)
    {
        EXPECT_GE(r.eps_max, r.eps_mean);
        EXPECT_GE(r.eps_mean, 0);
        EXPECT_GE(r.fidelity, 0);
        EXPECT_LE(r.fidelity, 1);
        EXPECT_LE(r.total_t_count, std::size_t(r.n_t) * r.L);
        n_ts.push_back(r.n_t);
        fids.push_back(r.fidelity);
    }
    EXPECT_EQ(s.rows.back().n_t, 50);
    EXPECT_NEAR(s.rows.back().energy, e_ideal, 1e-5);
    EXPECT_GT(spearman(n_ts, fids), 0.8);

    const Threshold t = find_threshold(s.rows, f_ideal);
    ASSERT_TRUE(t.stable);
    EXPECT_LE(*t.stable, 50);
}

TEST(Sweep, H2DeviationScalesAsEpsSquared)
{
    std::vector<double> x, y;
    const double e_ideal = *h2_sweep().meta_number("e_ideal");
    for (const auto& r : h2_sweep().rows)
        if (r.n_t >= 24 && r.n_t <= 44)
        {
            x.push_back(r.n_t);
            y.push_back(std::log10(std::abs(r.energy - e_ideal)));
        }
    const double slope = linear_slope(x, y);
    EXPECT_GE(slope, -0.26);
    EXPECT_LE(slope, -0.14);
}

TEST(Sweep, DeterministicApartFromWallTime)
{
    const Fixture f = load_fixture(kFixtures + "/H2.json");
    const Sweep a = run_sweep(f, 22, 30, 4, 99);
    const Sweep b = run_sweep(f, 22, 30, 4, 99);
    EXPECT_EQ(without_wall_time(a), without_wall_time(b));
    EXPECT_EQ(sweep_to_json(a)["rows"].size(), 3u);
}

TEST(Sweep, RejectsBadRange)
{
    const Fixture f = load_fixture(kFixtures + "/H2.json");
    EXPECT_THROW(run_sweep(f, 30, 22, 2, 0), std::invalid_argument);
    EXPECT_THROW(run_sweep(f, 22, 30, 0, 0), std::invalid_argument);
}

TEST(CompareBounds, H2Hierarchy)
{
    const Fixture f = load_fixture(kFixtures + "/H2.json");
    std::vector<int> n_ts;
    for (int n = 22; n <= 50; n += 4)
        n_ts.push_back(n);
    const auto rows = compare_bounds(f, n_ts, 1);
    ASSERT_EQ(rows.size(), n_ts.size());
    for (const auto& r : rows)
    {
        EXPECT_LE(r.measured, r.naive) << r.n_t;
        if (r.n_t >= 30)
            EXPECT_LT(r.averaged, r.naive) << r.n_t;
    }
    std::ostringstream out;
    write_bounds_csv(out, rows, f.system);
    EXPECT_EQ(out.str().rfind("# format=ctb-bounds v1\n", 0), 0u);
}

TEST(CompareBounds, VanishAtZeroEps)
{
    const EnergyBounds b = energy_error_bounds(0.0, 8, 2.0);
    EXPECT_EQ(b.averaged, 0.0);
    EXPECT_EQ(b.naive, 0.0);
}

TEST(ValidateNoiseReport, ZeroDeltaIsExactIdentity)
{
    const auto j = validate_noise_report({0.0}, 1000, 1);
    ASSERT_EQ(j["reports"].size(), 1u);
    const auto& r = j["reports"][0];
    EXPECT_EQ(r["p_exact"].get<double>(), 0.0);
    EXPECT_EQ(r["ptm_distance"].get<double>(), 0.0);
    EXPECT_TRUE(r["ptm_within_tolerance"].get<bool>());
}

TEST(ValidateNoiseReport, SchemaAndDeterminism)
{
    const auto a = validate_noise_report({0.1}, 20000, 3);
    const auto b = validate_noise_report({0.1}, 20000, 3);
    EXPECT_EQ(a.dump(), b.dump());
    const auto& r = a["reports"][0];
    for (const char* key : {"delta", "p_formula", "p_exact", "p_fitted_from_mc", "p_fitted_stderr", "ptm_distance",
                            "ptm_sigma", "tolerance", "ptm_within_tolerance", "p_within_tolerance", "samples",
                            "acceptance_rate"})
        EXPECT_TRUE(r.contains(key)) << key;
    EXPECT_NEAR(r["p_formula"].get<double>(), 8 * 0.01 / 15, 1e-15);
}
