#pragma once

#include <map>
#include <string>

namespace rdlab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Flat key=value configuration. Precedence: command-line flag > config file
/// > built-in default; the fully resolved table is echoed into every output
/// file header. Unknown keys are rejected (typo safety).
class Config {
public:
    /// Built-in defaults for every known key.
    static Config defaults();

    /// Overlays "key=value" lines ('#' comments, blank lines ignored).
    void load_file(const std::string& path);

    /// Overlays one pair, marking it as flag-provenance.
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    const std::string& get_string(const std::string& key) const;

    /// Resolved key -> (value, provenance) table, sorted by key.
    const std::map<std::string, std::pair<std::string, std::string>>& entries() const {
        return values_;
    }

private:
    void assign(const std::string& key, const std::string& value,
                const std::string& provenance);

    std::map<std::string, std::pair<std::string, std::string>> values_;
};

} // namespace rdlab
