#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace repnet {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Flat directory of pipeline artifacts plus `manifest.json`, which records
/// for every artifact its digest, the digests of the inputs it was derived
/// from and the configuration values it depends on.
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(const std::string& name) const { return root_ / name; }
  bool exists(const std::string& name) const;

  /// Reads an artifact produced by an earlier command. Unless `force` is
  /// set, throws ValidationError when the file was altered after it was
  /// written, when one of its recorded inputs changed since, or when a
  /// configuration value it depends on differs from `config`.
  std::string read_artifact(const std::string& name, const nlohmann::json& config, bool force) const;

  /// Atomically writes an artifact and records its provenance. `inputs`
  /// maps input names (artifact names or external paths) to digests.
  void write_artifact(const std::string& name, std::string_view content,
                      const std::map<std::string, std::string>& inputs, const nlohmann::json& config,
                      const nlohmann::json& extra = nlohmann::json::object());

  const nlohmann::json* record(const std::string& name) const;
  /// Digest recorded for an artifact; throws when absent.
  std::string digest(const std::string& name) const;

 private:
  void save_manifest() const;

  std::filesystem::path root_;
  nlohmann::json manifest_;
};

}  // namespace repnet
