#include "manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

#include "ipmix/io.hpp"

namespace ipmix::tools {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string RunManifest::str() const {
  KeyValueText kv;
  kv.set("command", command);
  kv.set("subcommand", subcommand);
  kv.set("tool_version", version);
  kv.set("seed", seed);
  for (const auto& [k, v] : parameters) kv.set("param." + k, v);
  for (const auto& p : inputs) kv.set("input." + p.filename().string(), "sha256:" + sha256_file(p));
  for (const auto& p : outputs) kv.set("output." + p.filename().string(), "sha256:" + sha256_file(p));
  kv.set("wall_time_s", wall_seconds);
  kv.set("exit_code", std::to_string(exit_code));
  if (!error.empty()) kv.set("error", error);
  return kv.str();
}

void RunManifest::write(const std::filesystem::path& path) const { atomic_write(path, str()); }

}  // namespace ipmix::tools
