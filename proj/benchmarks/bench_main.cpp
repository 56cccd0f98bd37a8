#include <benchmark/benchmark.h>

#include "dc/encode.hpp"
#include "dc/io.hpp"
#include "dc/modelgen.hpp"
#include "dc/reasoner.hpp"

namespace {

dc::KnowledgeBase encode_for(const dc::ConceptualModel &m) {
    switch (m.family) {
    case dc::Family::UML: return dc::encode_uml(m);
    case dc::Family::EER: return dc::encode_eer(m, false);
    default: return dc::encode_orm(m);
    }
}

void BM_encode(benchmark::State &state, dc::Family family) {
    const int n = static_cast<int>(state.range(0));
    dc::ConceptualModel m = dc::generate_model(family, n, 42);
    for (auto _ : state) {
        dc::KnowledgeBase kb = encode_for(m);
        benchmark::DoNotOptimize(kb.axioms.size());
    }
    state.SetComplexityN(n);
}

void BM_kb_text_round_trip(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    std::string text = dc::serialize_kb_text(encode_for(dc::generate_model(dc::Family::UML, n, 7)));
    for (auto _ : state) {
        dc::KnowledgeBase kb = dc::parse_kb_text(text);
        benchmark::DoNotOptimize(kb.axioms.size());
    }
    state.SetComplexityN(n);
}

void BM_classify(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    dc::KnowledgeBase kb = encode_for(dc::generate_model(dc::Family::UML, n, 3));
    for (auto _ : state) {
        dc::ClassificationResult r = dc::classify(kb, 3);
        benchmark::DoNotOptimize(r.verdicts.size());
    }
}

void BM_countermodel(benchmark::State &state) {
    dc::KnowledgeBase kb = dc::parse_kb_text("profile dcs\n"
                                             "concept A\nconcept B\nconcept C\n"
                                             "rel R / 2\n"
                                             "A <= >= 1 R\n"
                                             ">= 1 R <= B\n"
                                             "B <= <= 2 R\n");
    const unsigned bound = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        auto cm = dc::find_countermodel({&kb, "A", "C"}, bound);
        benchmark::DoNotOptimize(cm.has_value());
    }
}

BENCHMARK_CAPTURE(BM_encode, uml, dc::Family::UML)
    ->RangeMultiplier(4)
    ->Range(16, 1024)
    ->Complexity(benchmark::oN);
BENCHMARK_CAPTURE(BM_encode, eer, dc::Family::EER)
    ->RangeMultiplier(4)
    ->Range(16, 1024)
    ->Complexity(benchmark::oN);
BENCHMARK_CAPTURE(BM_encode, orm, dc::Family::ORM)
    ->RangeMultiplier(4)
    ->Range(16, 1024)
    ->Complexity(benchmark::oN);
BENCHMARK(BM_kb_text_round_trip)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);
BENCHMARK(BM_classify)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_countermodel)->DenseRange(2, 4);

} // namespace

BENCHMARK_MAIN();
