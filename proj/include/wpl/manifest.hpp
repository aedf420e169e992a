#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wpl {

/// Lowercase hex SHA-256 of a file's bytes. Throws std::runtime_error when
/// the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

/// Reproducibility record written next to generated outputs. Holds no
/// timestamps, so identical runs give identical manifests.
nlohmann::json make_manifest(const std::vector<std::string>& command_line, const nlohmann::json& config,
                             const std::vector<std::filesystem::path>& outputs);

std::string library_version();

}  // namespace wpl
