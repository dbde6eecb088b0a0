#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace w2s {

// Reproducibility sidecar written next to every file output: rerunning the
// recorded subcommand with the recorded flags reproduces the outputs
// byte for byte. Deliberately carries no timestamp.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> flags;                  // resolved values
    std::vector<std::pair<std::string, std::string>> inputs;   // path -> digest
    std::optional<std::uint64_t> seed;
    std::string tool_version;
};

// FNV-1a 64-bit digest, rendered "fnv1a64:<16 hex>".
std::string digest_bytes(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

std::string manifest_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

}  // namespace w2s
