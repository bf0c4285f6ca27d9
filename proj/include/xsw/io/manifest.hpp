#pragma once

// Run manifests. The digest covers everything that determines the outputs
// (command, config, input contents, seed, version) and nothing else, so it
// changes exactly when a rerun could produce different results.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "xsw/core/bytes.hpp"
#include "xsw/core/error.hpp"
#include "xsw/io/json.hpp"

namespace xsw::io {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kManifestPrefix = "# manifest-sha256: ";

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::Io, "sha256 failed");
    return to_hex(std::span<const std::uint8_t>(md, len)).substr(2);
}

struct InputDigest {
    std::string role; // e.g. "records"; the path itself is not part of the digest
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string command;
    Json config = Json::object();
    std::vector<InputDigest> inputs;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
    std::string tool_version{kToolVersion};

    void add_input(const std::string& role, const std::string& path, const std::string& contents) {
        inputs.push_back(InputDigest{role, path, sha256_hex(contents)});
    }

    std::string digest() const {
        Json ins = Json::array();
        for (const auto& i : inputs) ins.push_back(Json{{"role", i.role}, {"sha256", i.sha256}});
        Json core{{"command", command}, {"config", config}, {"inputs", std::move(ins)},
                  {"seed", seed ? Json(*seed) : Json(nullptr)}, {"tool_version", tool_version}};
        return sha256_hex(core.dump());
    }

    Json to_json() const {
        Json ins = Json::array();
        for (const auto& i : inputs) ins.push_back(Json{{"role", i.role}, {"path", i.path}, {"sha256", i.sha256}});
        return Json{{"digest", digest()},
                    {"command", command},
                    {"config", config},
                    {"inputs", std::move(ins)},
                    {"seed", seed ? Json(*seed) : Json(nullptr)},
                    {"outputs", outputs},
                    {"tool_version", tool_version}};
    }

    std::string header_line() const { return std::string(kManifestPrefix) + digest() + "\n"; }
};

inline void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

/// The digest named in a file's first line, if it carries one.
inline std::optional<std::string> manifest_digest_of(std::string_view contents) {
    if (contents.substr(0, kManifestPrefix.size()) != kManifestPrefix) return std::nullopt;
    auto end = contents.find('\n');
    return std::string(contents.substr(kManifestPrefix.size(), end - kManifestPrefix.size()));
}

} // namespace xsw::io
