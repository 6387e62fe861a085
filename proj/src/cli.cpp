#include "ils/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "ils/applications.hpp"
#include "ils/errors.hpp"
#include "ils/hqs.hpp"
#include "ils/io.hpp"
#include "ils/spectral.hpp"

namespace ils::cli {

namespace {

constexpr double kDefaultGamma = 10.0 / 255.0;
// Floor applied to the luminance of HDR inputs so black pixels keep a defined color ratio.
constexpr double kMinLuminance = 1e-9;

struct PenaltyFlags {
  std::string kind = "charbonnier";
  double p = 0.8;
  double eps = kDefaultEpsilon;
  double gamma = kDefaultGamma;

  PenaltySpec spec() const {
    if (kind == "welsch") return Welsch{gamma};
    return Charbonnier{p, eps};
  }
};

struct SmoothFlags {
  PenaltyFlags penalty;
  double lambda = 1.0;
  int iters = kDefaultIterations;
  double c = 0.0;
  CLI::Option* c_opt = nullptr;
  std::string color = "rgb";

  SmoothParams params() const {
    SmoothParams sp;
    sp.penalty = penalty.spec();
    sp.lambda = lambda;
    sp.iterations = iters;
    if (c_opt && c_opt->count() > 0) sp.c = c;
    sp.color_mode = color == "luminance" ? ColorMode::LuminanceOnly : ColorMode::PerChannelRGB;
    return sp;
  }
};

struct IoFlags {
  std::string input;
  std::string output;
};

void add_io(CLI::App* sub, IoFlags& io) {
  sub->add_option("-i,--input", io.input, "Input image (.png, .ppm, .pfm)")->required();
  sub->add_option("-o,--output", io.output, "Output image (.png, .ppm, .pfm)")->required();
}

void add_penalty(CLI::App* sub, PenaltyFlags& pf) {
  sub->add_option("--penalty", pf.kind, "charbonnier or welsch")
      ->check(CLI::IsMember({"charbonnier", "welsch"}))
      ->capture_default_str();
  sub->add_option("--p", pf.p, "Charbonnier exponent in (0,1]")->capture_default_str();
  sub->add_option("--eps", pf.eps, "Charbonnier epsilon")->capture_default_str();
  sub->add_option("--gamma", pf.gamma, "Welsch scale")->capture_default_str();
}

void add_smooth(CLI::App* sub, SmoothFlags& sf) {
  add_penalty(sub, sf.penalty);
  sub->add_option("--lambda", sf.lambda, "Smoothing strength")->capture_default_str();
  sub->add_option("--iters", sf.iters, "Iteration count N")->capture_default_str();
  sf.c_opt = sub->add_option("--c", sf.c, "Bound curvature (default c0 of the penalty)");
  sub->add_option("--color", sf.color, "rgb (per channel) or luminance")
      ->check(CLI::IsMember({"rgb", "luminance"}))
      ->capture_default_str();
}

void add_threads(CLI::App* sub, int& threads) {
  sub->add_option("--threads", threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

MultiImage as_rgb(const MultiImage& img) {
  if (img.channel_count() == 3) return img;
  return MultiImage({img.channel(0), img.channel(0), img.channel(0)}, ColorSpace::RGB);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

int parse_positive_int(const std::string& s, const std::string& whole) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || v <= 0 || v > 1 << 16) {
    throw ParameterError("bad size '" + whole + "', expected WxH");
  }
  return static_cast<int>(v);
}

ImagePlane random_plane(int h, int w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  ImagePlane p(h, w);
  for (double& v : p.values()) v = dist(rng);
  return p;
}

}  // namespace

std::vector<Size> parse_sizes(const std::string& text) {
  std::vector<Size> sizes;
  for (const std::string& item : split(text, ',')) {
    const auto x = item.find_first_of("xX");
    if (x == std::string::npos) throw ParameterError("bad size '" + item + "', expected WxH");
    sizes.push_back({parse_positive_int(item.substr(0, x), item),
                     parse_positive_int(item.substr(x + 1), item)});
  }
  if (sizes.empty()) throw ParameterError("no sizes given");
  return sizes;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& item : split(text, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ParameterError("bad number '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ParameterError("empty list");
  return values;
}

std::vector<BenchRow> bench(const BenchConfig& config) {
  config.params.validate();
  if (config.channels != 1 && config.channels != 3) throw ParameterError("channels must be 1 or 3");
  if (config.repeat < 1) throw ParameterError("repeat must be >= 1");
  if (config.threads < 1) throw ParameterError("threads must be >= 1");
  set_transform_threads(config.threads);

  std::vector<BenchRow> rows;
  std::mt19937_64 rng(20240501);
  for (const Size& s : config.sizes) {
    std::vector<ImagePlane> planes;
    for (int k = 0; k < config.channels; ++k) planes.push_back(random_plane(s.height, s.width, rng));
    const MultiImage img(std::move(planes),
                         config.channels == 1 ? ColorSpace::Gray : ColorSpace::RGB);

    (void)smooth_color(img, config.params, config.threads);
    double total_ms = 0.0;
    for (int r = 0; r < config.repeat; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const MultiImage out = smooth_color(img, config.params, config.threads);
      const auto t1 = std::chrono::steady_clock::now();
      total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    BenchRow row;
    row.size = s;
    row.channels = config.channels;
    row.threads = config.threads;
    row.mean_ms_total = total_ms / config.repeat;
    row.mean_ms_per_iter = row.mean_ms_total / config.params.iterations;
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "width,height,channels,threads,mean_ms_per_iter,mean_ms_total\n";
  for (const BenchRow& r : rows) {
    out << r.size.width << ',' << r.size.height << ',' << r.channels << ',' << r.threads << ','
        << std::setprecision(6) << r.mean_ms_per_iter << ',' << r.mean_ms_total << '\n';
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative least squares edge-preserving smoothing"};
  app.name("ils");
  app.require_subcommand(1);

  IoFlags io;
  int threads = 1;
  std::string trace_path;

  SmoothFlags smooth_f;
  auto* smooth = app.add_subcommand("smooth", "Edge-preserving smoothing");
  add_io(smooth, io);
  add_smooth(smooth, smooth_f);
  add_threads(smooth, threads);
  smooth->add_option("--trace", trace_path, "Write the energy trace CSV here");

  SmoothFlags enhance_f;
  double boost = 3.0;
  auto* enhance = app.add_subcommand("enhance", "Detail enhancement");
  add_io(enhance, io);
  add_smooth(enhance, enhance_f);
  add_threads(enhance, threads);
  enhance->add_option("--k", boost, "Detail boost factor")->capture_default_str();

  PenaltyFlags tone_pen;
  tone_pen.p = 1.0;
  std::string tone_lambda = "10";
  std::string tone_weights = "1,1,1";
  TonemapParams tone_defaults;
  int tone_iters = kDefaultIterations;
  double tone_range = tone_defaults.target_range;
  double tone_sat = tone_defaults.saturation;
  double tone_offset = tone_defaults.log_offset;
  auto* tonemap = app.add_subcommand("tonemap", "HDR tone mapping (one lambda or a fine,mid,coarse triple)");
  add_io(tonemap, io);
  add_penalty(tonemap, tone_pen);
  tonemap->add_option("--lambda", tone_lambda, "lambda, or lambda1,lambda2,lambda3 for multi-scale")
      ->capture_default_str();
  tonemap->add_option("--iters", tone_iters, "Iteration count N")->capture_default_str();
  tonemap->add_option("--weights", tone_weights, "Detail weights w0,w1,w2 (multi-scale)")
      ->capture_default_str();
  tonemap->add_option("--range", tone_range, "Target base range R (log10)")->capture_default_str();
  tonemap->add_option("--saturation", tone_sat, "Color saturation exponent s")->capture_default_str();
  tonemap->add_option("--offset", tone_offset, "Log offset")->capture_default_str();

  double clip_gamma = kDefaultGamma;
  double clip_lambda = 20.0;
  auto* clipart = app.add_subcommand("clipart", "Clip-art compression artifact removal");
  add_io(clipart, io);
  add_threads(clipart, threads);
  clipart->add_option("--gamma", clip_gamma, "Welsch scale")->capture_default_str();
  clipart->add_option("--lambda", clip_lambda, "Smoothing strength")->capture_default_str();

  double tex_gamma = kDefaultGamma;
  double tex_lambda = 30.0;
  double tex_sigma = kDefaultTextureSigma;
  auto* texture = app.add_subcommand("texture", "Texture smoothing");
  add_io(texture, io);
  add_threads(texture, threads);
  texture->add_option("--gamma", tex_gamma, "Welsch scale")->capture_default_str();
  texture->add_option("--lambda", tex_lambda, "Smoothing strength")->capture_default_str();
  texture->add_option("--sigma", tex_sigma, "Gaussian pre-smoothing sigma")->capture_default_str();

  HqsParams hqs_p;
  double hqs_beta0 = 0.0;
  auto* hqs = app.add_subcommand("hqs", "Half-quadratic splitting baseline (L1 penalty)");
  add_io(hqs, io);
  hqs->add_option("--lambda", hqs_p.lambda, "Smoothing strength")->capture_default_str();
  auto* beta_opt = hqs->add_option("--beta0", hqs_beta0, "Initial coupling weight (default 2 lambda)");
  hqs->add_option("--kappa", hqs_p.kappa, "Coupling growth factor")->capture_default_str();
  hqs->add_option("--iters", hqs_p.iterations, "Iteration count")->capture_default_str();

  SmoothFlags bench_f;
  std::string bench_sizes = "320x240,640x480";
  BenchConfig bench_cfg;
  auto* bench_cmd = app.add_subcommand("bench", "Time the smoother on random images, CSV to stdout");
  add_smooth(bench_cmd, bench_f);
  add_threads(bench_cmd, threads);
  bench_cmd->add_option("--sizes", bench_sizes, "Comma-separated WxH list")->capture_default_str();
  bench_cmd->add_option("--repeat", bench_cfg.repeat, "Timed runs per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--channels", bench_cfg.channels, "1 or 3")
      ->check(CLI::IsMember({1, 3}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_transform_threads(threads);
    if (smooth->parsed() || enhance->parsed()) {
      const SmoothParams sp = (smooth->parsed() ? smooth_f : enhance_f).params();
      sp.validate();
      if (enhance->parsed() && !(boost >= 0.0 && std::isfinite(boost))) {
        throw ParameterError("boost k must be >= 0");
      }
      const MultiImage img = read_image(io.input);
      if (smooth->parsed()) {
        EnergyTrace trace;
        const MultiImage result = smooth_color(img, sp, threads, trace_path.empty() ? nullptr : &trace);
        write_image(io.output, result);
        if (!trace_path.empty()) write_trace(trace, trace_path);
      } else {
        write_image(io.output, detail_enhance(img, sp, DetailBoost{boost}, threads));
      }
    } else if (tonemap->parsed()) {
      const std::vector<double> lambdas = parse_list(tone_lambda);
      const std::vector<double> weights = parse_list(tone_weights);
      if (lambdas.size() != 1 && lambdas.size() != 3) {
        throw ParameterError("--lambda takes one value or a fine,mid,coarse triple");
      }
      if (weights.size() != 3) throw ParameterError("--weights takes three values");
      TonemapParams tp;
      tp.base.penalty = tone_pen.spec();
      tp.base.lambda = lambdas[0];
      tp.base.iterations = tone_iters;
      tp.target_range = tone_range;
      tp.saturation = tone_sat;
      tp.log_offset = tone_offset;
      MultiScaleTonemapParams mp;
      if (lambdas.size() == 3) {
        if (!(lambdas[0] < lambdas[1] && lambdas[1] < lambdas[2])) {
          throw ParameterError("multi-scale lambdas must be strictly increasing");
        }
        mp.tone = tp;
        std::copy(lambdas.begin(), lambdas.end(), mp.lambdas.begin());
        std::copy(weights.begin(), weights.end(), mp.weights.begin());
        mp.validate();
      } else {
        tp.validate();
      }
      const MultiImage rgb = as_rgb(read_image(io.input));
      ImagePlane lum = luminance(rgb);
      for (double& v : lum.values()) v = std::max(v, kMinLuminance);
      const MultiImage result =
          lambdas.size() == 3 ? tonemap_multi(lum, rgb, mp) : tonemap_single(lum, rgb, tp);
      write_image(io.output, result);
    } else if (clipart->parsed()) {
      validate(Welsch{clip_gamma});
      if (!(clip_lambda > 0.0)) throw ParameterError("lambda must be > 0");
      write_image(io.output, clipart_clean(read_image(io.input), clip_gamma, clip_lambda, threads));
    } else if (texture->parsed()) {
      validate(Welsch{tex_gamma});
      if (!(tex_lambda > 0.0)) throw ParameterError("lambda must be > 0");
      if (!(tex_sigma >= 0.0)) throw ParameterError("pre-smoothing sigma must be >= 0");
      write_image(io.output,
                  texture_smooth(read_image(io.input), tex_gamma, tex_lambda, tex_sigma, threads));
    } else if (hqs->parsed()) {
      if (beta_opt->count() > 0) hqs_p.beta0 = hqs_beta0;
      hqs_p.validate();
      write_image(io.output, clip01(hqs_smooth(read_image(io.input), hqs_p)));
    } else if (bench_cmd->parsed()) {
      bench_cfg.params = bench_f.params();
      bench_cfg.params.validate();
      bench_cfg.sizes = parse_sizes(bench_sizes);
      bench_cfg.threads = threads;
      write_bench_csv(bench(bench_cfg), out);
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace ils::cli
