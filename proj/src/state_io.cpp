#include "cftlab/state_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "cftlab/errors.hpp"

namespace cftlab {

namespace {

static_assert(std::endian::native == std::endian::little,
              "codeword files are little-endian; byte swapping is not implemented");

constexpr char kMagic[4] = {'C', 'F', 'T', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void write_codewords(const std::string& path, const std::vector<PureState>& states) {
    if (states.empty()) throw ArgumentError("nothing to write");
    const int n = static_cast<int>(states.front().dims.size());
    const Eigen::Index dim = states.front().dim();
    for (const auto& s : states)
        if (s.dims != states.front().dims) throw ArgumentError("states must share dims");

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ArgumentError("cannot open for writing: " + tmp);
        out.write(kMagic, 4);
        write_u32(out, kVersion);
        write_u32(out, static_cast<std::uint32_t>(n));
        write_u32(out, static_cast<std::uint32_t>(states.size()));
        for (const auto& s : states)
            for (Eigen::Index i = 0; i < dim; ++i) {
                const double re = s.amplitudes[i].real();
                const double im = s.amplitudes[i].imag();
                out.write(reinterpret_cast<const char*>(&re), sizeof re);
                out.write(reinterpret_cast<const char*>(&im), sizeof im);
            }
        if (!out) throw ArgumentError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::vector<PureState> read_codewords(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open codeword file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw ArgumentError("bad magic in codeword file");
    if (read_u32(in) != kVersion) throw ArgumentError("unsupported codeword file version");
    const std::uint32_t n = read_u32(in);
    const std::uint32_t count = read_u32(in);
    if (n > 24 || count == 0 || count > 4096) throw ArgumentError("implausible codeword file header");

    const Eigen::Index dim = Eigen::Index(1) << n;
    const Dims dims(n, 2);
    std::vector<PureState> states;
    states.reserve(count);
    for (std::uint32_t s = 0; s < count; ++s) {
        Vector amps(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), sizeof re);
            in.read(reinterpret_cast<char*>(&im), sizeof im);
            amps[i] = Complex(re, im);
        }
        if (!in) throw ArgumentError("truncated codeword file: " + path);
        states.emplace_back(std::move(amps), dims);
    }
    return states;
}

std::string spectrum_cache_key(int n, double g, int k, double tol) {
    char buffer[128];
    std::snprintf(buffer, sizeof buffer, "tfim_n%d_g%.12g_k%d_tol%.1e", n, g, k, tol);
    return buffer;
}

void save_spectrum(const std::string& dir, const std::string& key, const SpectrumRecord& record) {
    std::filesystem::create_directories(dir);
    const std::string base = (std::filesystem::path(dir) / key).string();
    write_codewords(base + ".state", record.states);

    nlohmann::json meta;
    meta["energies"] = record.energies;
    meta["parities"] = record.parities;
    meta["labels"] = record.labels;
    meta["degenerate"] = std::vector<int>(record.degenerate.begin(), record.degenerate.end());
    nlohmann::json dims_json = nlohmann::json::array();
    for (double d : record.assigned_dimensions)
        dims_json.push_back(std::isfinite(d) ? nlohmann::json(d) : nlohmann::json());
    meta["assigned_dimensions"] = dims_json;

    const std::string tmp = base + ".json.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ArgumentError("cannot open for writing: " + tmp);
        out << meta.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, base + ".json");
}

std::optional<SpectrumRecord> load_spectrum(const std::string& dir, const std::string& key) {
    const std::string base = (std::filesystem::path(dir) / key).string();
    if (!std::filesystem::exists(base + ".json") || !std::filesystem::exists(base + ".state"))
        return std::nullopt;
    try {
        std::ifstream in(base + ".json");
        const nlohmann::json meta = nlohmann::json::parse(in);
        SpectrumRecord record;
        record.states = read_codewords(base + ".state");
        record.energies = meta.at("energies").get<std::vector<double>>();
        record.parities = meta.at("parities").get<std::vector<int>>();
        record.labels = meta.at("labels").get<std::vector<std::string>>();
        for (const auto& flag : meta.at("degenerate")) record.degenerate.push_back(flag.get<int>() != 0);
        for (const auto& d : meta.at("assigned_dimensions"))
            record.assigned_dimensions.push_back(
                d.is_null() ? std::numeric_limits<double>::quiet_NaN() : d.get<double>());
        if (record.energies.size() != record.states.size()) return std::nullopt;
        return record;
    } catch (const std::exception&) {
        return std::nullopt;  // treat a corrupt cache entry as a miss
    }
}

}  // namespace cftlab
