#include <benchmark/benchmark.h>

#include <random>

#include "mscodec/codec.hpp"
#include "mscodec/diffusion.hpp"
#include "mscodec/entropy.hpp"
#include "mscodec/mask.hpp"
#include "mscodec/segmentation.hpp"
#include "mscodec/shepard.hpp"
#include "mscodec/synth.hpp"

using namespace mscodec;

namespace {

struct FullImage {
  Image f;
  std::vector<Pixel> pixels;
  MaskData mask;
};

FullImage full_image(int n, double density) {
  FullImage r{synthesize(SynthKind::VoronoiSmooth, n, n, 1), {}, {}};
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) r.pixels.push_back({x, y});
  r.mask.density = density;
  r.mask.positions = build_grid_mask(n, n, density);
  for (const Pixel& p : r.mask.positions) r.mask.values.push_back(r.f.at(p));
  return r;
}

void BM_ShepardReconstruct(benchmark::State& state) {
  const FullImage img = full_image(static_cast<int>(state.range(0)), 0.05);
  const RegionView region(img.f.width(), img.f.height(), img.pixels);
  for (auto _ : state) benchmark::DoNotOptimize(shepard_reconstruct(region, img.mask));
}
BENCHMARK(BM_ShepardReconstruct)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_DiffusionReconstruct(benchmark::State& state) {
  const FullImage img = full_image(static_cast<int>(state.range(0)), 0.05);
  const RegionView region(img.f.width(), img.f.height(), img.pixels);
  for (auto _ : state) benchmark::DoNotOptimize(diffusion_reconstruct(region, img.mask));
}
BENCHMARK(BM_DiffusionReconstruct)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_EntropyEncode(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(state.range(0)));
  for (auto& b : data) b = static_cast<std::uint8_t>(rng() % 16);
  for (auto _ : state) benchmark::DoNotOptimize(entropy_encode(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EntropyEncode)->Arg(1 << 12)->Arg(1 << 16);

void BM_EntropyDecode(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(state.range(0)));
  for (auto& b : data) b = static_cast<std::uint8_t>(rng() % 16);
  const auto coded = entropy_encode(data);
  for (auto _ : state) benchmark::DoNotOptimize(entropy_decode(coded, data.size()));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EntropyDecode)->Arg(1 << 12)->Arg(1 << 16);

void BM_RegionMerge(benchmark::State& state) {
  const auto op = static_cast<OperatorId>(state.range(0));
  const Image f = synthesize(SynthKind::VoronoiSmooth, 64, 64, 1);
  ReconstructionModel m;
  m.op = op;
  if (is_inpainting(op)) {
    m.grid = GridSpec::from_density(0.05);
    m.quantizer = Quantizer(32);
  }
  for (auto _ : state) benchmark::DoNotOptimize(region_merge(f, m, 1000.0, 2));
  state.SetLabel(std::string(to_string(op)));
}
BENCHMARK(BM_RegionMerge)
    ->Arg(static_cast<int>(OperatorId::P0))
    ->Arg(static_cast<int>(OperatorId::P2))
    ->Arg(static_cast<int>(OperatorId::Shepard))
    ->Arg(static_cast<int>(OperatorId::Diffusion))
    ->Unit(benchmark::kMillisecond);

void BM_EncodeDecode(benchmark::State& state) {
  const Image f = synthesize(SynthKind::VoronoiSmooth, 64, 64, 1);
  EncoderConfig cfg;
  cfg.op = OperatorId::Shepard;
  cfg.lambda = 1000.0;
  cfg.density = 0.05;
  cfg.levels = 32;
  cfg.block_size = 2;
  for (auto _ : state) benchmark::DoNotOptimize(decode(encode(f, cfg)));
}
BENCHMARK(BM_EncodeDecode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
