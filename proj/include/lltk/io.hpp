#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lltk::io {

// %.17g, enough digits that parse(format(x)) == x exactly.
std::string format_double(double x);
double parse_double(const std::string& s);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& contents);

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);
std::uint64_t fnv1a64_file(const std::filesystem::path& p);

// Ordered key = value document. Lines starting with '#' are comments; a
// [section] header prefixes following keys as "section.key". Parse errors
// carry the 1-based line number.
class KvDoc {
public:
    KvDoc() = default;

    static KvDoc parse(const std::string& text);
    static KvDoc load(const std::filesystem::path& p);

    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value);
    void set_u64(const std::string& key, std::uint64_t value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;  // throws if missing, names the key
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;        // comma separated
    std::vector<std::uint64_t> get_u64s(const std::string& key) const;    // comma separated
    std::vector<std::string> get_strings(const std::string& key) const;   // comma separated

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_string() const;
    void save(const std::filesystem::path& p) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::optional<std::size_t> index_of(const std::string& key) const;
};

// Thrown by KvDoc::parse with the offending line number.
struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

}  // namespace lltk::io
