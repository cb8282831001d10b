// Dataset ingestion (CSV) and seeded synthetic scenario generators.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>

#include "lqdepth/depth.hpp"

namespace lqdepth::data {

/// SplitMix64 (Steele, Lea & Flood; the java.util.SplittableRandom mixer).
/// A 64-bit counter-based generator with a published reference
/// implementation, chosen so that streams reproduce bit-for-bit across
/// platforms and languages. Uniform doubles take the top 53 bits; normal
/// variates come from the Marsaglia polar method.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double uniform_symmetric() { return 2.0 * uniform01() - 1.0; }

    /// Two independent standard normals (polar method).
    std::pair<double, double> normal_pair();

private:
    std::uint64_t state_;
};

enum class Scenario { S1, S2, S3 };

/// S1: uniform on [-1,1]^2. S2: standard bivariate normal. S3: (Y^2+Z, Z^2+Y)
/// with Y, Z independent standard normals.
struct ScenarioSpec {
    Scenario kind = Scenario::S1;
    std::size_t n = 1000;
    std::uint64_t seed = 42;
};

Scenario parse_scenario(std::string_view token);

/// Deterministic for a fixed spec: same seed, same cloud, on every platform.
DataCloud generate(const ScenarioSpec& spec);

/// Parses comma-separated numeric rows with an optional header row (detected
/// by a non-numeric first row). With `log_transform`, the natural log is
/// applied to every entry before the cloud is built; this requires strictly
/// positive data. Parse errors carry 1-based row numbers.
DataCloud load_csv(std::istream& in, bool log_transform = false);

/// Same parsing, but returns the raw row matrix without building a cloud
/// (used for query-point files, which may hold fewer than d+1 rows).
linalg::Matrix load_points_csv(std::istream& in);

}  // namespace lqdepth::data
