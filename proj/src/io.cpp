#include "lltk/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lltk::io {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) throw std::invalid_argument("bad float '" + s + "'");
    return v;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& contents) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + p.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed: " + p.string());
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::uint64_t fnv1a64_file(const std::filesystem::path& p) {
    return fnv1a64(read_file(p));
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

KvDoc KvDoc::parse(const std::string& text) {
    KvDoc doc;
    std::istringstream in(text);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError(line_no, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ParseError(line_no, "empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
        std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (!section.empty()) key = section + "." + key;
        doc.set(key, value);
    }
    return doc;
}

KvDoc KvDoc::load(const std::filesystem::path& p) { return parse(read_file(p)); }

std::optional<std::size_t> KvDoc::index_of(const std::string& key) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first == key) return i;
    return std::nullopt;
}

void KvDoc::set(const std::string& key, const std::string& value) {
    if (auto i = index_of(key)) {
        entries_[*i].second = value;
    } else {
        entries_.emplace_back(key, value);
    }
}

void KvDoc::set_double(const std::string& key, double value) { set(key, format_double(value)); }

void KvDoc::set_u64(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

bool KvDoc::has(const std::string& key) const { return index_of(key).has_value(); }

const std::string& KvDoc::get(const std::string& key) const {
    if (auto i = index_of(key)) return entries_[*i].second;
    throw std::invalid_argument("missing required key '" + key + "'");
}

std::string KvDoc::get_or(const std::string& key, const std::string& fallback) const {
    if (auto i = index_of(key)) return entries_[*i].second;
    return fallback;
}

double KvDoc::get_double(const std::string& key) const { return parse_double(get(key)); }

double KvDoc::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::uint64_t KvDoc::get_u64(const std::string& key) const {
    const std::string& s = get(key);
    try {
        return std::stoull(s);
    } catch (...) {
        throw std::invalid_argument("key '" + key + "': bad unsigned integer '" + s + "'");
    }
}

std::uint64_t KvDoc::get_u64_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
}

std::vector<double> KvDoc::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& s : split(get(key), ','))
        if (!s.empty()) out.push_back(parse_double(s));
    return out;
}

std::vector<std::uint64_t> KvDoc::get_u64s(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const std::string& s : split(get(key), ','))
        if (!s.empty()) out.push_back(std::stoull(s));
    return out;
}

std::vector<std::string> KvDoc::get_strings(const std::string& key) const {
    std::vector<std::string> out;
    for (const std::string& s : split(get(key), ','))
        if (!s.empty()) out.push_back(s);
    return out;
}

std::string KvDoc::to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void KvDoc::save(const std::filesystem::path& p) const { write_file(p, to_string()); }

}  // namespace lltk::io
