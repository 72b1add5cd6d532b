#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ocms {

struct Dataset {
  std::uint64_t d = 0;  // dictionary size; values lie in [0, d)
  std::vector<std::uint64_t> values;
  std::string name;
};

// Zipf(2) over R ranks with weight 1/r^2. mod_aligned spreads the mass onto
// multiples of 16 (R = d/16 ranks) so hash moduli interact with structure;
// otherwise R = d. Requires R >= 1.
Dataset gen_zipf(std::uint64_t d, std::uint64_t n, bool mod_aligned,
                 std::uint64_t seed);

// Rounded normal with a seed-chosen mean in [1000, 9000], clamped to
// [0, 10000]; d = 10001.
Dataset gen_gaussian(std::uint64_t n, std::uint64_t seed, double sigma = 50.0);

// One integer id per line; ids are remapped densely (sorted order) over the
// whole file, then each entry is kept independently with probability rate.
// Blank lines are skipped; parse failures report the line number.
Dataset ingest_kosarak(const std::string& path, double rate,
                       std::uint64_t seed);

// Empirical frequencies over [0, d).
std::vector<double> frequencies(const Dataset& ds);

void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace ocms
