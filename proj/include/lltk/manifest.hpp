#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lltk/io.hpp"

namespace lltk {

inline constexpr const char* kToolVersion = "0.1.0";

// Replay record for one command invocation: full config echo, seeds, every
// file read or written with its content hash, timestamps. The manifest is
// metadata about a run; the data files it points at are the reproducible
// artifacts.
class RunManifest {
public:
    explicit RunManifest(std::string command);

    void set_config(const io::KvDoc& config);
    void set(const std::string& key, const std::string& value);
    void set_u64(const std::string& key, std::uint64_t value);

    // Records the file's FNV-1a content hash under inputs/outputs.
    void add_input(const std::filesystem::path& p);
    void add_output(const std::filesystem::path& p);

    // Writes "<command>_manifest.txt" into dir and returns the path.
    std::filesystem::path save(const std::filesystem::path& dir) const;

    const io::KvDoc& doc() const { return doc_; }

private:
    std::string command_;
    io::KvDoc doc_;
    std::size_t n_inputs_ = 0, n_outputs_ = 0;
};

}  // namespace lltk
