#include "w2s/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "w2s/errors.hpp"

namespace w2s {

namespace {

std::string render_digest(std::uint64_t h) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace

std::string digest_bytes(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return render_digest(h);
}

std::string digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open input file '" + path.string() + "'");
    }
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
    }
    return render_digest(h);
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["tool_version"] = m.tool_version;
    j["flags"] = m.flags;
    auto inputs = nlohmann::json::array();
    for (const auto& [path, digest] : m.inputs) {
        inputs.push_back({{"path", path}, {"digest", digest}});
    }
    j["inputs"] = inputs;
    if (m.seed) j["seed"] = *m.seed;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ValidationError("cannot open output file '" + path.string() + "'");
    }
    out << manifest_json(m);
}

}  // namespace w2s
