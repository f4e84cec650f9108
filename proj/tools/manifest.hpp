#ifndef IPMIX_TOOLS_MANIFEST_HPP
#define IPMIX_TOOLS_MANIFEST_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ipmix::tools {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string subcommand;
  std::string version;
  std::string seed;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  double wall_seconds = 0.0;
  int exit_code = 0;
  std::string error;

  std::string str() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace ipmix::tools

#endif
