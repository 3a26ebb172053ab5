#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bpl/errors.hpp"

namespace bpl::bench {

/// Flat key=value configuration with '#' comments.  Later assignments win, so
/// command-line overrides are applied by inserting them after the file.
class Config {
  public:
    Config() = default;

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open config file: " + path);
        Config cfg;
        std::string line;
        while (std::getline(in, line)) cfg.parse_line(line);
        return cfg;
    }

    void parse_line(std::string line) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r\n") != std::string::npos)
                throw Error("config: malformed line (expected key=value): " + line);
            return;
        }
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback = "") const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (...) {
            throw Error("config: key '" + key + "' is not a number: " + it->second);
        }
    }

    long get_long(const std::string& key, long fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            return std::stol(it->second);
        } catch (...) {
            throw Error("config: key '" + key + "' is not an integer: " + it->second);
        }
    }

    /// Comma/space separated list of doubles.
    std::vector<double> get_list(const std::string& key) const {
        std::vector<double> out;
        const auto it = values_.find(key);
        if (it == values_.end()) return out;
        std::string s = it->second;
        for (auto& ch : s)
            if (ch == ',' || ch == ';') ch = ' ';
        std::istringstream is(s);
        double v;
        while (is >> v) out.push_back(v);
        return out;
    }

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

}  // namespace bpl::bench
