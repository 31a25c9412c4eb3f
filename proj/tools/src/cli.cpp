#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "mscodec/codec.hpp"
#include "mscodec/metrics.hpp"
#include "mscodec/pgm.hpp"
#include "mscodec/rd.hpp"
#include "mscodec/synth.hpp"

namespace msc {

namespace {

using namespace mscodec;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string psnr_text(double p) { return is_lossless(p) ? "lossless" : fmt(p, 4); }

const char* code_name(CodecError::Code c) {
  switch (c) {
    case CodecError::Code::InvalidConfig: return "invalid configuration";
    case CodecError::Code::OversizedImage: return "image too large";
    case CodecError::Code::DegenerateRate: return "degenerate segmentation";
    case CodecError::Code::BadMagic: return "bad magic";
    case CodecError::Code::UnsupportedVersion: return "unsupported version";
    case CodecError::Code::TruncatedHeader: return "truncated header";
    case CodecError::Code::InvalidHeader: return "invalid header";
    case CodecError::Code::BodyLengthMismatch: return "body length mismatch";
    case CodecError::Code::ChainOutOfBounds: return "chain out of bounds";
    case CodecError::Code::RegionCountMismatch: return "region count mismatch";
    case CodecError::Code::PayloadExhausted: return "payload exhausted";
  }
  return "codec error";
}

OperatorId operator_arg(const std::string& name) {
  const auto op = parse_operator(name);
  if (!op) throw UsageError("unknown operator '" + name + "' (expected p0, p1, p2, diffusion or shepard)");
  return *op;
}

struct EncodeArgs {
  std::string input, output, op = "shepard";
  double lambda = 0.0;
  std::optional<double> density;
  std::optional<int> q;
  int block = 1;
  int tonal_budget = 3;
};

int cmd_encode(const EncodeArgs& a, std::ostream& out) {
  EncoderConfig cfg;
  cfg.op = operator_arg(a.op);
  cfg.lambda = a.lambda;
  cfg.block_size = a.block;
  cfg.tonal_budget = a.tonal_budget;
  if (is_inpainting(cfg.op)) {
    if (!a.density) throw UsageError("--density is required for --op " + a.op);
    cfg.density = a.density;
    cfg.levels = a.q.value_or(256);
  } else if (a.density || a.q) {
    throw UsageError("--density and --q apply to diffusion and shepard only");
  }
  try {
    model_for(cfg);
  } catch (const CodecError& e) {
    throw UsageError(e.what());
  }
  const Image img = read_pgm_file(a.input);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::uint8_t> bytes = encode(img, cfg);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  write_file_bytes(a.output, bytes);
  out << "bpp=" << fmt(bits_per_pixel(bytes.size(), img), 6) << " time_ms=" << fmt(ms, 3) << '\n';
  return 0;
}

int cmd_decode(const std::string& input, const std::string& output) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(input);
  write_pgm_file(output, decode(bytes));
  return 0;
}

int cmd_eval(const std::string& original, const std::string& decoded, const std::string& container,
             std::ostream& out) {
  const Image a = read_pgm_file(original);
  const Image b = read_pgm_file(decoded);
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::runtime_error("dimension mismatch: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                             " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
  const std::size_t size = read_file_bytes(container).size();
  out << "bpp=" << fmt(bits_per_pixel(size, a), 6) << " psnr=" << psnr_text(psnr(a, b)) << '\n';
  return 0;
}

struct SweepArgs {
  std::string input, csv, svg;
  std::vector<std::string> ops{"p0", "p1", "p2", "diffusion", "shepard"};
  std::vector<double> lambdas;
  double lambda_min = 10.0, lambda_max = 10000.0;
  int lambda_steps = 6;
  std::vector<double> densities{0.05};
  std::vector<int> levels{256};
  int block = 1, tonal_budget = 3, threads = 1;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepGrid grid;
  for (const std::string& name : a.ops) grid.operators.push_back(operator_arg(name));
  try {
    grid.lambdas = a.lambdas.empty() ? log_ladder(a.lambda_min, a.lambda_max, a.lambda_steps) : a.lambdas;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  grid.densities = a.densities;
  grid.levels = a.levels;
  const Image img = read_pgm_file(a.input);
  const std::vector<SweepRow> rows = run_sweep(img, grid, {a.block, a.tonal_budget, a.threads});

  std::ofstream csv(a.csv);
  if (!csv) throw std::runtime_error("cannot write " + a.csv);
  write_csv(csv, rows);
  if (!a.svg.empty()) {
    std::ofstream svg(a.svg);
    if (!svg) throw std::runtime_error("cannot write " + a.svg);
    write_svg(svg, rows);
  }
  std::size_t failed = 0;
  for (const SweepRow& r : rows) failed += r.ok ? 0 : 1;
  out << "points=" << rows.size() << " failed=" << failed << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Region-merging image codec for piecewise smooth images", "msc"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode_cmd = app.add_subcommand("encode", "Compress a PGM image into a container");
  encode_cmd->add_option("input", enc.input, "input PGM")->required();
  encode_cmd->add_option("output", enc.output, "output container")->required();
  encode_cmd->add_option("--op", enc.op, "p0, p1, p2, diffusion or shepard")->capture_default_str();
  encode_cmd->add_option("--lambda", enc.lambda, "boundary length weight")->capture_default_str();
  encode_cmd->add_option("--density", enc.density, "mask density in (0, 1], inpainting only");
  encode_cmd->add_option("--q", enc.q, "quantization levels in [2, 256], inpainting only (default 256)");
  encode_cmd->add_option("--block", enc.block, "initial block size")->capture_default_str();
  encode_cmd->add_option("--tonal-budget", enc.tonal_budget, "tonal optimization sweeps")->capture_default_str();

  std::string dec_in, dec_out;
  auto* decode_cmd = app.add_subcommand("decode", "Decompress a container into a PGM image");
  decode_cmd->add_option("input", dec_in, "input container")->required();
  decode_cmd->add_option("output", dec_out, "output PGM")->required();

  std::string ev_orig, ev_dec, ev_cont;
  auto* eval_cmd = app.add_subcommand("eval", "Report bpp and PSNR");
  eval_cmd->add_option("original", ev_orig, "original PGM")->required();
  eval_cmd->add_option("decoded", ev_dec, "decoded PGM")->required();
  eval_cmd->add_option("container", ev_cont, "container file")->required();

  std::string kind, synth_out;
  int width = 128, height = 128;
  std::uint64_t seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded test image");
  synth_cmd->add_option("kind", kind, "steps, ramps or voronoi-smooth")
      ->required()
      ->check(CLI::IsMember({"steps", "ramps", "voronoi-smooth"}));
  synth_cmd->add_option("output", synth_out, "output PGM")->required();
  synth_cmd->add_option("--width", width)->capture_default_str()->check(CLI::Range(1, 65535));
  synth_cmd->add_option("--height", height)->capture_default_str()->check(CLI::Range(1, 65535));
  synth_cmd->add_option("--seed", seed)->capture_default_str();

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Rate-distortion grid search");
  sweep_cmd->add_option("input", sw.input, "input PGM")->required();
  sweep_cmd->add_option("--csv", sw.csv, "output CSV")->required();
  sweep_cmd->add_option("--svg", sw.svg, "output SVG");
  sweep_cmd->add_option("--ops", sw.ops, "operators")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--lambdas", sw.lambdas, "explicit lambda list")->delimiter(',');
  sweep_cmd->add_option("--lambda-min", sw.lambda_min)->capture_default_str();
  sweep_cmd->add_option("--lambda-max", sw.lambda_max)->capture_default_str();
  sweep_cmd->add_option("--lambda-steps", sw.lambda_steps, "logarithmic ladder length")->capture_default_str();
  sweep_cmd->add_option("--densities", sw.densities)->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--q", sw.levels, "quantization levels list")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--block", sw.block)->capture_default_str();
  sweep_cmd->add_option("--tonal-budget", sw.tonal_budget)->capture_default_str();
  sweep_cmd->add_option("--threads", sw.threads)->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<const char*> argv{"msc"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "msc: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*encode_cmd) return cmd_encode(enc, out);
    if (*decode_cmd) return cmd_decode(dec_in, dec_out);
    if (*eval_cmd) return cmd_eval(ev_orig, ev_dec, ev_cont, out);
    if (*synth_cmd) {
      write_pgm_file(synth_out, synthesize(*parse_synth_kind(kind), width, height, seed));
      return 0;
    }
    if (*sweep_cmd) return cmd_sweep(sw, out);
  } catch (const UsageError& e) {
    err << "msc: usage: " << e.what() << '\n';
    return 2;
  } catch (const CodecError& e) {
    err << "msc: " << code_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const PgmError& e) {
    err << "msc: pgm: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "msc: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace msc
