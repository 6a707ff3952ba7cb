#include "golden.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "accf/experiments.hpp"

namespace accf::testing {

Trace golden_run() {
  experiments::WorkloadSpec spec;
  spec.duration_ms = 500;
  auto config = make_system_config(four_server_topology(), "two-by-two");
  return experiments::run_app1(config, 100, 1, spec).trace;
}

std::filesystem::path golden_path() {
  return std::filesystem::path(ACCF_SOURCE_DIR) / "tests" / "golden" / "app1-two-by-two-seed1.tsv";
}

std::string compare_with_golden(const Trace& trace) {
  const auto text = render_trace(trace);
  const auto path = golden_path();
  if (const char* update = std::getenv("ACCF_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing golden file " + path.string();
  std::ostringstream stored;
  stored << in.rdbuf();
  if (stored.str() == text) return {};
  std::istringstream a(stored.str());
  std::istringstream b(text);
  std::string la;
  std::string lb;
  for (std::size_t line = 1;; ++line) {
    const bool more_a = static_cast<bool>(std::getline(a, la));
    const bool more_b = static_cast<bool>(std::getline(b, lb));
    if (!more_a || !more_b || la != lb) {
      return "golden trace differs at line " + std::to_string(line) + ": expected '" + (more_a ? la : "<eof>") +
             "', got '" + (more_b ? lb : "<eof>") + "'";
    }
  }
}

}  // namespace accf::testing
