#include <benchmark/benchmark.h>

#include "klchar/antispherical.hpp"
#include "klchar/cells.hpp"
#include "klchar/characters.hpp"
#include "klchar/hecke.hpp"
#include "klchar/weyl.hpp"

using namespace klchar;

namespace {

struct Tower {
  std::shared_ptr<const WeylContext> weyl;
  std::shared_ptr<HeckeContext> hecke;
  std::shared_ptr<AntisphericalContext> as;
  std::shared_ptr<CharacterContext> chars;
  std::shared_ptr<CellContext> cells;
  std::shared_ptr<KLBasisProvider> provider;
};

Tower make_tower(const std::string& descriptor) {
  Tower t;
  t.weyl = std::make_shared<const WeylContext>(RootDatum::from_descriptor(descriptor));
  t.hecke = std::make_shared<HeckeContext>(t.weyl);
  t.as = std::make_shared<AntisphericalContext>(t.weyl, t.hecke);
  t.chars = std::make_shared<CharacterContext>(t.weyl, t.hecke, t.as);
  t.cells = std::make_shared<CellContext>(t.weyl, t.chars);
  t.provider = std::make_shared<KLBasisProvider>(t.hecke);
  return t;
}

void BM_KLBallColdCache(benchmark::State& state) {
  const Int bound = state.range(0);
  for (auto _ : state) {
    const auto t = make_tower("A2sc");
    for (const ExtElt& w : t.weyl->ball(bound))
      benchmark::DoNotOptimize(t.hecke->kl_element(w));
  }
  state.SetComplexityN(static_cast<int64_t>(bound));
}
BENCHMARK(BM_KLBallColdCache)->DenseRange(4, 12, 2)->Complexity()->Unit(benchmark::kMillisecond);

void BM_LengthClosedForm(benchmark::State& state) {
  const auto t = make_tower("B2sc");
  const ExtElt x = t.weyl->translation(Weight{5, 7});
  for (auto _ : state) benchmark::DoNotOptimize(t.weyl->length(x));
}
BENCHMARK(BM_LengthClosedForm);

void BM_WeylCharacter(benchmark::State& state) {
  const auto t = make_tower("G2sc");
  const Int k = state.range(0);
  for (auto _ : state) {
    const auto fresh = make_tower("G2sc");
    benchmark::DoNotOptimize(fresh.chars->weyl_character(Weight{k, k}));
  }
}
BENCHMARK(BM_WeylCharacter)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TiltingCharacter(benchmark::State& state) {
  for (auto _ : state) {
    const auto t = make_tower("A1sc");
    benchmark::DoNotOptimize(t.chars->tilting_character(Weight{12}, 7, *t.provider));
  }
}
BENCHMARK(BM_TiltingCharacter)->Unit(benchmark::kMillisecond);

void BM_CellPartition(benchmark::State& state) {
  const Int bound = state.range(0);
  for (auto _ : state) {
    const auto t = make_tower("A1sc");
    const auto g = t.cells->build_cell_graph(bound, *t.provider);
    benchmark::DoNotOptimize(t.cells->cell_partition(g));
  }
}
BENCHMARK(BM_CellPartition)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
