#include <benchmark/benchmark.h>

#include "nullcone/sweep.hpp"

using namespace nullcone;
using namespace nullcone::sweep;

namespace {

std::vector<ChartPoint> grid(int k, int side) {
    return chart_grid(k, GridSpec{0.5, 2.0, side}, GridSpec{0.2, 1.2, side}, {GridSpec{1.1, 1.1, 1}, GridSpec{0.3, 0.3, 1}});
}

void BM_curvature(benchmark::State& st, Exec exec) {
    const auto a = scalefactor::preset("matter_k0");
    const auto pts = grid(0, static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(curvature_table(0, a, pts, exec));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(pts.size()));
}

void BM_field_dd(benchmark::State& st, Exec exec) {
    const auto a = scalefactor::preset("ds_km1");
    const auto pts = grid(-1, static_cast<int>(st.range(0)));
    const auto ref = embedding::make_chart_point(-1, 2.8, 0.4, {0.7, 1.9});
    PropagatorColumns cols;
    cols.potential = false;
    cols.route = PropagatorColumns::FieldRoute::dd;
    for (auto _ : st) benchmark::DoNotOptimize(propagator_table(-1, a, pts, ref, cols, exec));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(pts.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_curvature, serial, Exec::serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_curvature, parallel, Exec::parallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_field_dd, serial, Exec::serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_field_dd, parallel, Exec::parallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
