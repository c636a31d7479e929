#pragma once

#include "mvdfv/harness.hpp"

#include <doctest.h>

#include <map>
#include <memory>
#include <random>
#include <string>

namespace testutil {

/// Committed gmsh fixtures and the reference mesh characteristics they were
/// generated to match.
struct FixtureRow
{
    int row;
    std::size_t M_D;
    double min_angle;
    double max_angle;
    std::size_t M_V;
    std::size_t M;
};

inline const std::vector<FixtureRow>& fixture_rows()
{
    static const std::vector<FixtureRow> rows{
        {1, 16, 42.7, 81.2, 30, 35},          {4, 36, 42.9, 83.3, 70, 87},
        {7, 129, 42.2, 85.3, 256, 346},       {10, 427, 43.9, 87.2, 852, 1204},
        {13, 1266, 42.9, 85.5, 2530, 3665},   {16, 4432, 40.3, 85.4, 8862, 13047},
    };
    return rows;
}

inline std::string fixture(int row)
{
    char name[32];
    std::snprintf(name, sizeof name, "/mesh%02d.msh", row);
    return std::string(MVD_FIXTURE_DIR) + name;
}

inline const mvd::MvdMesh& fixture_mvd(int row)
{
    static std::map<int, std::unique_ptr<mvd::MvdMesh>> cache;
    auto& slot = cache[row];
    if (!slot)
        slot = std::make_unique<mvd::MvdMesh>(mvd::build_mvd(mvd::parse_msh_file(fixture(row))));
    return *slot;
}

inline bool close_rel(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v)
        x = d(rng);
    return v;
}

} // namespace testutil
