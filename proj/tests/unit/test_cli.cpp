#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ils/cli.hpp"
#include "ils/errors.hpp"
#include "ils/io.hpp"

using namespace ils;
using testutil::temp_path;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ils");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string input_png() {
  static const std::string path = [] {
    std::mt19937_64 rng(401);
    const auto p = temp_path("cli_in.png");
    write_image(p, testutil::random_rgb(24, 20, rng));
    return p.string();
  }();
  return path;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("smooth happy path and determinism") {
  const std::string out = temp_path("cli_out.png").string();
  const std::string trace = temp_path("cli_trace.csv").string();
  const Result r = run({"smooth", "--input", input_png(), "--output", out, "--penalty", "charbonnier",
                        "--p", "0.8", "--lambda", "1", "--iters", "4", "--trace", trace});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(out));
  const std::string first = slurp(out);
  CHECK(run({"smooth", "-i", input_png(), "-o", out, "--lambda", "1", "--iters", "4"}).code == 0);
  CHECK(slurp(out) == first);

  std::istringstream csv(slurp(trace));
  std::string line;
  int rows = -1;
  std::string last;
  while (std::getline(csv, line)) ++rows, last = line;
  CHECK(rows == 5);
  CHECK(last.substr(last.rfind(',') + 1) == "1");
}

TEST_CASE("usage errors exit 1") {
  const Result missing = run({"smooth", "--output", temp_path("x.png").string()});
  CHECK(missing.code == 1);
  CHECK_FALSE(missing.err.empty());
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);

  const Result bad_p = run({"smooth", "-i", input_png(), "-o", temp_path("x.png").string(), "--p", "1.5"});
  CHECK(bad_p.code == 1);
  CHECK(bad_p.err.find("p must be in (0,1]") != std::string::npos);

  CHECK(run({"smooth", "-i", "nope.png", "-o", "x.png", "--lambda", "-1"}).code == 1);
  CHECK(run({"smooth", "-i", input_png(), "-o", "x.png", "--penalty", "cauchy"}).code == 1);
  CHECK(run({"smooth", "-i", input_png(), "-o", "x.png", "--c", "1"}).code == 1);
  CHECK(run({"smooth", "-i", input_png(), "-o", "x.png", "--threads", "0"}).code == 1);
  CHECK(run({"hqs", "-i", input_png(), "-o", "x.png", "--kappa", "0.5"}).code == 1);
  CHECK(run({"tonemap", "-i", "a.pfm", "-o", "b.png", "--lambda", "1,2"}).code == 1);
  CHECK(run({"tonemap", "-i", "a.pfm", "-o", "b.png", "--lambda", "8,1,0.125"}).code == 1);
  CHECK(run({"bench", "--sizes", "32by32"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("io errors exit 2") {
  CHECK(run({"smooth", "-i", temp_path("does_not_exist.png").string(), "-o", "x.png"}).code == 2);
  CHECK(run({"smooth", "-i", input_png(), "-o", temp_path("x.gif").string()}).code == 2);
}

TEST_CASE("numerical errors exit 3") {
  ImagePlane flat(8, 8, 2.0);
  const auto in = temp_path("flat.pfm");
  write_image(in, MultiImage::gray(flat));
  const Result r = run({"tonemap", "-i", in.string(), "-o", temp_path("flat_out.png").string()});
  CHECK(r.code == 3);
}

TEST_CASE("application subcommands") {
  const std::string out = temp_path("cli_app.png").string();
  CHECK(run({"enhance", "-i", input_png(), "-o", out, "--k", "3"}).code == 0);
  CHECK(run({"clipart", "-i", input_png(), "-o", out}).code == 0);
  CHECK(run({"texture", "-i", input_png(), "-o", out, "--sigma", "1"}).code == 0);
  CHECK(run({"hqs", "-i", input_png(), "-o", out, "--lambda", "0.25"}).code == 0);
  CHECK(run({"smooth", "-i", input_png(), "-o", out, "--penalty", "welsch", "--gamma", "0.04",
             "--color", "luminance", "--threads", "3"})
            .code == 0);

  const std::string hdr = (testutil::data_dir() / "hdr" / "sky.pfm").string();
  CHECK(run({"tonemap", "-i", hdr, "-o", out, "--iters", "2"}).code == 0);
  CHECK(run({"tonemap", "-i", hdr, "-o", out, "--lambda", "0.125,1,8", "--iters", "2"}).code == 0);
  const MultiImage tm = read_image(out);
  CHECK(tm.channel_count() == 3);
}

TEST_CASE("enhance with unit boost reproduces the input file") {
  const std::string out = temp_path("cli_id.png").string();
  CHECK(run({"enhance", "-i", input_png(), "-o", out, "--k", "1"}).code == 0);
  CHECK(read_image(out) == read_image(input_png()));
}

TEST_CASE("bench output") {
  const Result r = run({"bench", "--sizes", "32x24,48x40", "--repeat", "2", "--iters", "2"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "width,height,channels,threads,mean_ms_per_iter,mean_ms_total");
  std::getline(in, line);
  CHECK(line.rfind("32,24,3,1,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("48,40,3,1,", 0) == 0);
}

TEST_CASE("list parsing") {
  const auto sizes = cli::parse_sizes("320x240,640X480");
  REQUIRE(sizes.size() == 2);
  CHECK(sizes[1].width == 640);
  CHECK(sizes[1].height == 480);
  CHECK_THROWS_AS(cli::parse_sizes("320x"), ParameterError);
  CHECK_THROWS_AS(cli::parse_sizes("320x240,"), ParameterError);
  CHECK_THROWS_AS(cli::parse_sizes("0x10"), ParameterError);
  CHECK(cli::parse_list("0.125,1,8") == std::vector<double>{0.125, 1.0, 8.0});
  CHECK_THROWS_AS(cli::parse_list("1,,2"), ParameterError);
}
