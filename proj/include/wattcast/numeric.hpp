#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace wattcast {

// Canonical float formatting for all text outputs: 12 significant digits.
std::string fmt_g12(double v);

// Strict double parse; throws Error(SyntaxError) on trailing garbage.
double parse_double(const std::string& token, int line = 0);

// Uniform double in [0,1) with reproducible bits on every platform.
// std::uniform_real_distribution is implementation-defined, which would break
// golden files, so traces are generated from the raw engine stream instead.
inline double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace wattcast
