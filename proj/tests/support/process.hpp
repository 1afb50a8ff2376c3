#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace pedaleval::testing {

struct RunResult {
  int exit_code;
  std::string out;
};

/// Runs a shell command, capturing stdout; stderr is discarded.
inline RunResult run(const std::string& command) {
  RunResult r{-1, {}};
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string quoted(const std::string& s) { return "'" + s + "'"; }

}  // namespace pedaleval::testing
