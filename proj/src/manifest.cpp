#include "lltk/manifest.hpp"

#include <chrono>
#include <ctime>

namespace lltk {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunManifest::RunManifest(std::string command) : command_(std::move(command)) {
    doc_.set("tool", "lltk");
    doc_.set("version", kToolVersion);
    doc_.set("command", command_);
    doc_.set("started", utc_now());
}

void RunManifest::set_config(const io::KvDoc& config) {
    for (const auto& [k, v] : config.entries()) doc_.set("config." + k, v);
}

void RunManifest::set(const std::string& key, const std::string& value) { doc_.set(key, value); }

void RunManifest::set_u64(const std::string& key, std::uint64_t value) {
    doc_.set_u64(key, value);
}

void RunManifest::add_input(const std::filesystem::path& p) {
    const std::string idx = std::to_string(n_inputs_++);
    doc_.set("input." + idx + ".path", p.string());
    doc_.set("input." + idx + ".fnv1a64", std::to_string(io::fnv1a64_file(p)));
}

void RunManifest::add_output(const std::filesystem::path& p) {
    const std::string idx = std::to_string(n_outputs_++);
    doc_.set("output." + idx + ".path", p.string());
    doc_.set("output." + idx + ".fnv1a64", std::to_string(io::fnv1a64_file(p)));
}

std::filesystem::path RunManifest::save(const std::filesystem::path& dir) const {
    io::KvDoc out = doc_;
    out.set("finished", utc_now());
    const std::filesystem::path p = dir / (command_ + "_manifest.txt");
    out.save(p);
    return p;
}

}  // namespace lltk
