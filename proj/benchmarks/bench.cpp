#include <benchmark/benchmark.h>

#include "dde/dde.hpp"
#include "dde/strips.hpp"

namespace {

dde::ScenarioDocument scenario(const char* file) {
  return dde::load_scenario(std::string(DDE_SOURCE_DIR) + "/scenarios/" + file);
}

void BM_Simulate(benchmark::State& st) {
  auto doc = scenario("trolley_switch.dde");
  doc.horizon = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(dde::analyze(doc));
}
BENCHMARK(BM_Simulate)->Arg(10)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_Verdict(benchmark::State& st, const char* file) {
  auto doc = scenario(file);
  dde::CheckOptions opts;
  opts.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(dde::dde_verdict(doc, opts));
}
BENCHMARK_CAPTURE(BM_Verdict, switch, "trolley_switch.dde")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Verdict, push, "trolley_push.dde")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_IntentionProof(benchmark::State& st) {
  auto doc = scenario("trolley_switch.dde");
  auto goal = dde::parse_formula(
      "(I I now (and (not (exists ((t Moment)) (holds (dead P1) t))) (not (exists ((t Moment)) (holds (dead P2) "
      "t)))))",
      doc.signature);
  dde::ModalOptions opts;
  opts.signature = &doc.signature;
  auto kb = doc.background();
  for (auto _ : st) benchmark::DoNotOptimize(dde::modal_prove(kb, goal, opts));
}
BENCHMARK(BM_IntentionProof)->Unit(benchmark::kMillisecond);

void BM_Means(benchmark::State& st) {
  auto doc = scenario("trolley_switch.dde");
  auto a = dde::analyze(doc);
  dde::FluentLiteral cause{dde::parse_term("(dead P3)", doc.signature), 6, true};
  dde::FluentLiteral effect{dde::parse_term("(dead P1)", doc.signature), 10, false};
  for (auto _ : st) {
    dde::CausalModel model(a.acted_theory, doc.signature, a.acted, dde::MeansMode::Prose);
    benchmark::DoNotOptimize(model.means(cause, effect));
  }
}
BENCHMARK(BM_Means)->Unit(benchmark::kMicrosecond);

void BM_Strips(benchmark::State& st) {
  auto doc = dde::load_strips(std::string(DDE_SOURCE_DIR) + "/scenarios/trolley_push.strips");
  for (auto _ : st) benchmark::DoNotOptimize(dde::strips_dde_check(doc));
}
BENCHMARK(BM_Strips)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
