#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace accf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitMalformedTrace = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace accf::cli
