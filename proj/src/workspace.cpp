#include "repnet/workspace.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "repnet/error.hpp"

namespace repnet {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

Workspace::Workspace(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  const auto manifest = root_ / "manifest.json";
  if (fs::exists(manifest)) {
    manifest_ = nlohmann::json::parse(read_file(manifest), nullptr, false);
    if (manifest_.is_discarded() || !manifest_.is_object()) {
      throw ValidationError("workspace manifest '" + manifest.string() + "' is not valid JSON");
    }
  } else {
    manifest_ = {{"artifacts", nlohmann::json::object()}};
  }
}

bool Workspace::exists(const std::string& name) const { return fs::exists(path(name)); }

const nlohmann::json* Workspace::record(const std::string& name) const {
  const auto& artifacts = manifest_["artifacts"];
  auto it = artifacts.find(name);
  return it == artifacts.end() ? nullptr : &*it;
}

std::string Workspace::digest(const std::string& name) const {
  const auto* rec = record(name);
  if (!rec) throw ValidationError("workspace has no record of '" + name + "'");
  return (*rec)["sha256"].get<std::string>();
}

std::string Workspace::read_artifact(const std::string& name, const nlohmann::json& config, bool force) const {
  if (!exists(name)) {
    throw InputError("workspace artifact '" + path(name).string() + "' is missing; run the producing command first");
  }
  auto content = read_file(path(name));
  if (force) return content;

  const auto* rec = record(name);
  const std::string hint = " (rerun the producing command or pass --force)";
  if (!rec) throw ValidationError("artifact '" + name + "' has no provenance record" + hint);
  if ((*rec)["sha256"] != sha256_hex(content)) {
    throw ValidationError("artifact '" + name + "' was modified after it was written" + hint);
  }
  for (const auto& [input, recorded] : (*rec)["inputs"].items()) {
    const auto* upstream = record(input);
    if (upstream && (*upstream)["sha256"] != recorded) {
      throw ValidationError("artifact '" + name + "' is stale: input '" + input + "' changed" + hint);
    }
  }
  for (const auto& [key, value] : (*rec)["config"].items()) {
    if (!config.contains(key) || config[key] != value) {
      throw ValidationError("artifact '" + name + "' was produced with " + key + "=" + value.dump() +
                            " but the current configuration has " +
                            (config.contains(key) ? config[key].dump() : std::string("no value")) + hint);
    }
  }
  return content;
}

void Workspace::write_artifact(const std::string& name, std::string_view content,
                               const std::map<std::string, std::string>& inputs, const nlohmann::json& config,
                               const nlohmann::json& extra) {
  write_file_atomic(path(name), content);
  nlohmann::json rec;
  rec["sha256"] = sha256_hex(content);
  rec["inputs"] = nlohmann::json(inputs);
  rec["config"] = config;
  for (const auto& [k, v] : extra.items()) rec[k] = v;
  manifest_["artifacts"][name] = std::move(rec);
  save_manifest();
}

void Workspace::save_manifest() const { write_file_atomic(root_ / "manifest.json", manifest_.dump(2) + "\n"); }

}  // namespace repnet
