#include <benchmark/benchmark.h>

#include "promptmine/batch.hpp"
#include "promptmine/data.hpp"
#include "promptmine/template.hpp"

namespace {

using namespace promptmine;

std::vector<ForecastWindow> corpus_windows(int pois) {
	SynthConfig sc;
	sc.num_pois = pois;
	sc.days = 14;
	return make_windows(synthesize_corpus(sc), 3);
}

std::vector<HourlySeries> corpus_days(int pois) {
	SynthConfig sc;
	sc.num_pois = pois;
	sc.days = 14;
	std::vector<HourlySeries> days;
	for (const auto &r : synthesize_corpus(sc))
		for (const auto &d : r.days) days.push_back(d.hourly_visits);
	return days;
}

std::vector<std::string> corpus_texts(int pois) {
	std::vector<std::string> texts;
	for (const auto &w : corpus_windows(pois)) texts.push_back(render_initial(w).history_text);
	return texts;
}

template <bool Parallel>
void BM_Entropy(benchmark::State &state) {
	const auto texts = corpus_texts(static_cast<int>(state.range(0)));
	for (auto _ : state) {
		auto out = Parallel ? batch::entropy(texts) : batch::entropy_serial(texts);
		benchmark::DoNotOptimize(out.data());
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}

template <bool Parallel>
void BM_Segment(benchmark::State &state) {
	const auto days = corpus_days(static_cast<int>(state.range(0)));
	for (auto _ : state) {
		auto out = Parallel ? batch::segment_days(days, 4, SegmentMode::MinimizeGain)
		                    : batch::segment_days_serial(days, 4, SegmentMode::MinimizeGain);
		benchmark::DoNotOptimize(out.data());
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(days.size()));
}

template <bool Parallel>
void BM_BuildV4(benchmark::State &state) {
	const auto windows = corpus_windows(static_cast<int>(state.range(0)));
	RefineConfig rc;
	for (auto _ : state) {
		auto out = Parallel ? batch::build_variants(windows, Variant::V4, rc)
		                    : batch::build_variants_serial(windows, Variant::V4, rc);
		benchmark::DoNotOptimize(out.data());
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows.size()));
}

} // namespace

BENCHMARK(BM_Entropy<false>)->Arg(200);
BENCHMARK(BM_Entropy<true>)->Arg(200);
BENCHMARK(BM_Segment<false>)->Arg(200);
BENCHMARK(BM_Segment<true>)->Arg(200);
BENCHMARK(BM_BuildV4<false>)->Arg(100);
BENCHMARK(BM_BuildV4<true>)->Arg(100);

BENCHMARK_MAIN();
