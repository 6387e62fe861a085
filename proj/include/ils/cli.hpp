#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ils/smoother.hpp"

namespace ils::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `ils` tool. Subcommands: smooth, enhance, tonemap,
/// clipart, texture, hqs, bench. Returns 0 on success, 1 on usage or
/// parameter errors, 2 on I/O errors, 3 on numerical errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct Size {
  int width = 0;
  int height = 0;
};

/// Parses "320x240,640x480". Throws ParameterError on bad syntax.
std::vector<Size> parse_sizes(const std::string& text);

/// Parses "0.125,1,8" into its values. Throws ParameterError on bad syntax.
std::vector<double> parse_list(const std::string& text);

struct BenchConfig {
  std::vector<Size> sizes{{320, 240}};
  int channels = 3;
  int repeat = 10;
  int threads = 1;
  SmoothParams params{};
};

struct BenchRow {
  Size size;
  int channels = 0;
  int threads = 0;
  double mean_ms_per_iter = 0.0;
  double mean_ms_total = 0.0;
};

/// Times smooth_color on seeded random images, one discarded warm-up run per size.
std::vector<BenchRow> bench(const BenchConfig& config);

/// `width,height,channels,threads,mean_ms_per_iter,mean_ms_total`.
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace ils::cli
