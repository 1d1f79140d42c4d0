// Compares the GEMM-backed convolution kernels against the serial reference.
#include <benchmark/benchmark.h>

#include <vector>

#include "phishgan/kernels.hpp"
#include "phishgan/rng.hpp"

namespace {

using phishgan::kernels::ConvGeom;

ConvGeom make_geom(int batch, int c_in, int c_out, int l_in, int stride) {
    ConvGeom g;
    g.batch = batch;
    g.c_in = c_in;
    g.c_out = c_out;
    g.k = 3;
    g.stride = stride;
    g.pad = 1;
    g.l_in = l_in;
    g.l_out = phishgan::kernels::conv_out_len(l_in, g.k, stride, g.pad);
    return g;
}

struct Buffers {
    std::vector<double> x, w, b, y;
    explicit Buffers(const ConvGeom& g) {
        phishgan::Rng rng(42);
        x.resize(static_cast<size_t>(g.batch) * g.c_in * g.l_in);
        w.resize(static_cast<size_t>(g.c_out) * g.c_in * g.k);
        b.resize(static_cast<size_t>(g.c_out));
        y.resize(static_cast<size_t>(g.batch) * g.c_out * g.l_out);
        for (auto* v : {&x, &w, &b}) for (auto& e : *v) e = rng.uniform(-1.0, 1.0);
    }
};

void bm_conv_fast(benchmark::State& state) {
    const auto g = make_geom(static_cast<int>(state.range(0)), 67, 32, 200, 1);
    Buffers buf(g);
    for (auto _ : state) {
        phishgan::kernels::conv_forward(buf.x.data(), buf.w.data(), buf.b.data(),
                                        buf.y.data(), g);
        benchmark::ClobberMemory();
    }
}

void bm_conv_reference(benchmark::State& state) {
    const auto g = make_geom(static_cast<int>(state.range(0)), 67, 32, 200, 1);
    Buffers buf(g);
    for (auto _ : state) {
        phishgan::kernels::ref::conv_forward(buf.x.data(), buf.w.data(), buf.b.data(),
                                             buf.y.data(), g);
        benchmark::ClobberMemory();
    }
}

BENCHMARK(bm_conv_fast)->Arg(1)->Arg(16)->Arg(64);
BENCHMARK(bm_conv_reference)->Arg(1)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
