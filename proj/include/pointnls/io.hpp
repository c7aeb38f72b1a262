#ifndef POINTNLS_IO_HPP
#define POINTNLS_IO_HPP

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/wavefunction.hpp"

namespace pointnls {

// All numeric output goes through std::to_chars: '.' decimal independent of
// locale, deterministic bytes across reruns.

inline std::string format_double(double v, int precision = 17) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                                   precision);
    return std::string(buf, res.ptr);
}

/// Shortest representation that round-trips exactly; used for config echoes.
inline std::string format_double_exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ValidationError("not a real number: '" + s + "'");
    return v;
}

inline long parse_long(const std::string& s) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError("not an integer: '" + s + "'");
    return v;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path.string());
    return out;
}

/// State CSV: a comment line recording L, M, t, then rows (x, re, im).
inline void write_state_csv(const std::filesystem::path& path, const WaveFunction& psi,
                            double t) {
    std::ofstream out = open_output(path);
    out << "# L=" << format_double_exact(psi.grid.half_width())
        << " M=" << psi.grid.num_points() << " t=" << format_double_exact(t) << "\n";
    out << "x,re,im\n";
    for (int j = 0; j < psi.grid.num_points(); ++j) {
        const cplx v = psi.values[static_cast<std::size_t>(j)];
        out << format_double(psi.grid.node(j)) << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << "\n";
    }
}

struct StateFile {
    WaveFunction psi;
    double t;
};

inline StateFile read_state_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open state file: " + path.string());
    std::string header;
    std::getline(in, header);
    double half_width = 0.0, t = 0.0;
    int m_count = 0;
    {
        std::istringstream hs(header);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("L=", 0) == 0) half_width = parse_double(tok.substr(2));
            if (tok.rfind("M=", 0) == 0) m_count = static_cast<int>(parse_long(tok.substr(2)));
            if (tok.rfind("t=", 0) == 0) t = parse_double(tok.substr(2));
        }
    }
    if (m_count == 0) throw ValidationError("state file missing header: " + path.string());
    std::string line;
    std::getline(in, line);  // column names
    WaveFunction psi{Grid1D(half_width, m_count)};
    for (int j = 0; j < m_count; ++j) {
        if (!std::getline(in, line))
            throw ValidationError("state file truncated: " + path.string());
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ValidationError("bad state row: '" + line + "'");
        psi.values[static_cast<std::size_t>(j)] =
            cplx(parse_double(line.substr(c1 + 1, c2 - c1 - 1)), parse_double(line.substr(c2 + 1)));
    }
    return {std::move(psi), t};
}

/// Two-column (x, w) profile table.
inline std::pair<std::vector<double>, std::vector<double>> read_profile_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open profile file: " + path.string());
    std::vector<double> xs, ws;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos) continue;
        const auto c = line.find(',');
        if (c == std::string::npos) throw ValidationError("bad profile row: '" + line + "'");
        std::string a = line.substr(0, c), b = line.substr(c + 1);
        while (!b.empty() && (b.back() == '\r' || b.back() == ' ')) b.pop_back();
        xs.push_back(parse_double(a));
        ws.push_back(parse_double(b));
    }
    return {std::move(xs), std::move(ws)};
}

inline bool files_identical(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

}  // namespace pointnls

#endif
