#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cadefect::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes shared by every subcommand.
enum Exit : int { ok = 0, parse_error = 2, unsupported = 3, inadmissible = 4, no_condensation = 5 };

struct SpectrumArgs {
  std::string subshift;
  std::string ca;  // optional
};

struct ClassifyArgs {
  std::string subshift;
  std::string config;
  std::string ca;  // optional
  int r = 0;       // 0: default range
  std::string pgm; // optional heat map of the defect field
};

struct TrackArgs {
  std::string ca;
  std::string subshift;
  std::string init;  // optional; overrides width
  int width = 256;
  int steps = 256;
  std::uint64_t seed = 1;
  std::optional<int> burn_in;  // default 50 for random starts, 0 with --init
  int r = 0;
  std::string pgm;  // prefix: <prefix>_spacetime.pgm and <prefix>_defects.pgm
};

struct VerifyArgs {
  std::string ca;
  std::string subshift;
  std::optional<int> r;
};

// Each command returns the JSON report; failures throw cadefect::Error.
std::string cmd_spectrum(const SpectrumArgs& a);
std::string cmd_classify(const ClassifyArgs& a);
std::string cmd_track(const TrackArgs& a);
std::string cmd_verify(const VerifyArgs& a);

// Full command line; reports go to out, diagnostics to err. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Thread count requested through CADEFECT_THREADS (1 when unset); has no effect on results.
int requested_threads();

}  // namespace cadefect::cli
