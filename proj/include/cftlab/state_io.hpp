#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cftlab/dense.hpp"
#include "cftlab/models.hpp"

namespace cftlab {

// Codeword file format (little-endian):
//   bytes 0-3   magic "CFTS"
//   u32         format version (1)
//   u32         n, sites per state
//   u32         D, state count
//   D * 2^n     f64 pairs (re, im), state-major
void write_codewords(const std::string& path, const std::vector<PureState>& states);
std::vector<PureState> read_codewords(const std::string& path);

/// Spectrum cache entry: <key>.json metadata next to <key>.state amplitudes.
void save_spectrum(const std::string& dir, const std::string& key, const SpectrumRecord& record);
std::optional<SpectrumRecord> load_spectrum(const std::string& dir, const std::string& key);

std::string spectrum_cache_key(int n, double g, int k, double tol);

}  // namespace cftlab
