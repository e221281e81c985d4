#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtmap/config.hpp"

namespace rtmap {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

const std::vector<std::string>& commands();

// Output files of a run, written together by flush().
class ArtifactSet {
 public:
  void add(const std::string& name, std::string bytes);
  const std::map<std::string, std::string>& files() const { return files_; }
  // Writes every file plus manifest.json (name -> sha256) into dir.
  void flush(const std::string& dir) const;

 private:
  std::map<std::string, std::string> files_;
};

std::string sha256_hex(const std::string& bytes);

// Binary P5 graymap, one byte per cell, row-major.
std::string encode_pgm(int width, int height, const std::vector<unsigned char>& pixels);

// Runs `command` and fills `artifacts` (including report.json). Returns the exit
// code contract: 0 pass, 1 verification failure, 2 configuration/usage error.
int run_command(const std::string& command, const RunConfig& cfg, ArtifactSet& artifacts, std::string& log);

int dispatch(const std::string& command, const RunConfig& cfg, const std::string& out_dir);

}  // namespace rtmap
