#ifndef POINTNLS_CONFIG_HPP
#define POINTNLS_CONFIG_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/io.hpp"
#include "pointnls/version.hpp"

namespace pointnls {

/// Flat key = value configuration. Keys are typed by the consuming command;
/// unknown keys are errors, so typos never pass silently.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open config file: " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str());
    }

    static Config parse_text(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": expected key = value, got '" + trimmed + "'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": empty key or value");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    /// Overrides entries of this config with those of other.
    void merge(const Config& other) {
        for (const auto& [k, v] : other.values_) values_[k] = v;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double get_real(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_double(it->second);
    }

    long get_int(const std::string& key, long fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_long(it->second);
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return it->second;
    }

    std::vector<double> get_real_list(const std::string& key,
                                      const std::vector<double>& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_real_list(it->second, key);
    }

    std::vector<long> get_int_list(const std::string& key,
                                   const std::vector<long>& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<long> out;
        for (double v : parse_real_list(it->second, key)) {
            const long n = std::lround(v);
            if (static_cast<double>(n) != v)
                throw ValidationError("config key '" + key + "': expected integers");
            out.push_back(n);
        }
        return out;
    }

    /// Every key must belong to the command's schema.
    void reject_unknown_keys(const std::set<std::string>& allowed) const {
        for (const auto& [k, v] : values_)
            if (allowed.count(k) == 0)
                throw ValidationError("unknown config key '" + k + "'");
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    /// Resolved key = value text, reparseable and byte-stable.
    std::string echo() const {
        std::ostringstream out;
        out << "# pointnls " << kVersion << "\n";
        for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
        return out.str();
    }

    void write_echo(const std::filesystem::path& path) const {
        std::ofstream out = open_output(path);
        out << echo();
    }

private:
    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }

    static std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
        std::vector<double> out;
        std::string item;
        std::istringstream in(text);
        while (std::getline(in, item, ',')) {
            const auto t = trim(item);
            if (t.empty()) throw ValidationError("config key '" + key + "': empty list entry");
            out.push_back(parse_double(t));
        }
        if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
        return out;
    }

    std::map<std::string, std::string> values_;
};

}  // namespace pointnls

#endif
