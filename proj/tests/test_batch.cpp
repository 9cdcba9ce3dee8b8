#include <doctest.h>

#include "promptmine/batch.hpp"
#include "promptmine/data.hpp"

using namespace promptmine;

namespace {

std::vector<ForecastWindow> windows() {
	SynthConfig sc;
	sc.num_pois = 30;
	sc.days = 9;
	return make_windows(synthesize_corpus(sc), 3);
}

bool same_pair(const PromptPair &a, const PromptPair &b) {
	return a.history_text == b.history_text && a.future_text == b.future_text && a.future_values == b.future_values &&
	       a.target_cuts == b.target_cuts;
}

} // namespace

TEST_CASE("parallel kernels match their serial references") {
	const auto ws = windows();
	std::vector<std::string> texts;
	std::vector<HourlySeries> days;
	for (const auto &w : ws) {
		texts.push_back(render_initial(w).history_text);
		days.push_back(w.target.hourly_visits);
	}
	CHECK(batch::entropy(texts) == batch::entropy_serial(texts));

	for (auto mode : {SegmentMode::MinimizeGain, SegmentMode::MaximizeIg}) {
		const auto par = batch::segment_days(days, 4, mode);
		const auto ser = batch::segment_days_serial(days, 4, mode);
		REQUIRE(par.size() == ser.size());
		for (std::size_t i = 0; i < par.size(); ++i) {
			CHECK(par[i].cuts == ser[i].cuts);
			CHECK(par[i].objective == ser[i].objective);
		}
	}

	for (auto v : {Variant::V1, Variant::V2, Variant::V3, Variant::V4}) {
		const auto par = batch::build_variants(ws, v, {});
		const auto ser = batch::build_variants_serial(ws, v, {});
		REQUIRE(par.size() == ser.size());
		std::vector<std::string> futures;
		for (std::size_t i = 0; i < par.size(); ++i) {
			CHECK(same_pair(par[i], ser[i]));
			futures.push_back(par[i].future_text);
		}
		const std::size_t expected = v == Variant::V1 ? 24 : v == Variant::V4 ? 4 : 2;
		const auto po = batch::parse(futures, v, expected);
		const auto so = batch::parse_serial(futures, v, expected);
		for (std::size_t i = 0; i < po.size(); ++i) {
			CHECK(po[i].parsed_values == so[i].parsed_values);
			CHECK(po[i].status == so[i].status);
		}
	}
	CHECK(batch::max_threads() >= 1);
}

TEST_CASE("kernel errors propagate") {
	std::vector<std::string> texts{"fine", ""};
	CHECK_THROWS(batch::entropy(texts));
	CHECK_THROWS(batch::entropy_serial(texts));
}
