#include <benchmark/benchmark.h>

#include <random>

#include "rbte/detect.hpp"
#include "rbte/geom.hpp"
#include "rbte/kernels.hpp"
#include "rbte/pipeline.hpp"

using namespace rbte;
using kernels::Extent;

namespace {

std::vector<float> noise(int w, int h) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<float> u(0, 1);
  std::vector<float> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = u(gen);
  return v;
}

template <bool Serial>
void BM_Blur(benchmark::State& st) {
  const Extent e{static_cast<int>(st.range(0)), static_cast<int>(st.range(0))};
  const auto src = noise(e.width, e.height);
  const auto taps = kernels::gaussian_taps(3.0);
  for (auto _ : st) {
    auto out = Serial ? kernels::serial::gaussian_blur(src, e, taps)
                      : kernels::gaussian_blur(src, e, taps);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Serial>
void BM_Sobel(benchmark::State& st) {
  const Extent e{static_cast<int>(st.range(0)), static_cast<int>(st.range(0))};
  const auto src = noise(e.width, e.height);
  std::vector<float> gx(e.area()), gy(e.area());
  for (auto _ : st) {
    if (Serial)
      kernels::serial::sobel(src, e, gx, gy);
    else
      kernels::sobel(src, e, gx, gy);
    benchmark::DoNotOptimize(gx.data());
  }
}

template <bool Serial>
void BM_Nms(benchmark::State& st) {
  const Extent e{static_cast<int>(st.range(0)), static_cast<int>(st.range(0))};
  const auto s = noise(e.width, e.height);
  auto o = noise(e.width, e.height);
  for (auto& t : o) t *= 3.14159f;
  for (auto _ : st) {
    auto out = Serial ? kernels::serial::nms(s, o, e) : kernels::nms(s, o, e);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Serial>
void BM_Rotate(benchmark::State& st) {
  const Extent e{static_cast<int>(st.range(0)), static_cast<int>(st.range(0))};
  const auto src = noise(e.width, e.height);
  for (auto _ : st) {
    auto out = Serial ? kernels::serial::rotate_bilinear(src, e, 0.05)
                      : kernels::rotate_bilinear(src, e, 0.05);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_TransformField(benchmark::State& st) {
  GrayImage img(256, 256, noise(256, 256));
  const auto field = detect::gradient_field(img, 2.0);
  pipeline::PipelineSpec spec;
  std::uint64_t i = 0;
  for (auto _ : st) {
    auto s = pipeline::transform_field(field, "bench", spec, i++);
    benchmark::DoNotOptimize(s.map.pixels().data());
  }
}

}  // namespace

BENCHMARK_TEMPLATE(BM_Blur, true)->Arg(256)->Arg(1024);
BENCHMARK_TEMPLATE(BM_Blur, false)->Arg(256)->Arg(1024);
BENCHMARK_TEMPLATE(BM_Sobel, true)->Arg(256)->Arg(1024);
BENCHMARK_TEMPLATE(BM_Sobel, false)->Arg(256)->Arg(1024);
BENCHMARK_TEMPLATE(BM_Nms, true)->Arg(256)->Arg(1024);
BENCHMARK_TEMPLATE(BM_Nms, false)->Arg(256)->Arg(1024);
BENCHMARK_TEMPLATE(BM_Rotate, true)->Arg(256)->Arg(1024);
BENCHMARK_TEMPLATE(BM_Rotate, false)->Arg(256)->Arg(1024);
BENCHMARK(BM_TransformField)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
