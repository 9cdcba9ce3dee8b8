#include <doctest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "promptmine/data.hpp"
#include "promptmine/errors.hpp"
#include "promptmine/refine.hpp"
#include "promptmine/text.hpp"

using namespace promptmine;

namespace {

bool contains(const std::string &hay, const std::string &needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("diurnal split of the reference days") {
	const auto w = fixtures::mobil_window();
	const auto tue = diurnal_split(w.history[1], 12);
	CHECK(tue.first_half == 4);
	CHECK(tue.second_half == 8);
	const auto wed = diurnal_split(w.history[2], 12);
	CHECK(wed.first_half == 5);
	CHECK(wed.second_half == 7);
	const auto thu = diurnal_split(w.target, 12);
	CHECK(thu.first_half == 7);
	CHECK(thu.second_half == 10);

	const auto c = fixtures::constant_window(3);
	const auto half = diurnal_split(c.history[0], 12);
	CHECK(half.first_half == 36);
	CHECK(half.second_half == 36);
}

TEST_CASE("split hour is clamped into working hours") {
	CHECK(clamp_split_hour(PoiMeta{"p", "b", "r", 0, 24}, 12) == 12);
	CHECK(clamp_split_hour(PoiMeta{"p", "b", "r", 14, 22}, 12) == 15);
	CHECK(clamp_split_hour(PoiMeta{"p", "b", "r", 6, 11}, 12) == 10);
}

TEST_CASE("V1 prompt text") {
	const auto p = build_v1(fixtures::mobil_window());
	CHECK(p.history_text == fixtures::kV1History);
	CHECK(p.future_text == fixtures::kV1Future);
	CHECK(p.future_total == 17);
	CHECK(std::accumulate(p.future_values.begin(), p.future_values.end(), std::int64_t{0}) == 17);

	const auto zero = build_v1(fixtures::constant_window(0));
	CHECK(contains(zero.history_text, "0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0 people"));
}

TEST_CASE("V2 prompt text") {
	const auto p = build_v2(fixtures::mobil_window());
	CHECK(contains(p.history_text, "4 people came here during the first half of the work shift and 8 people came here "
	                               "during the latter half of the work shift on Tue."));
	CHECK(contains(p.history_text, "5 people came here during the first half of the work shift and 7 people came here "
	                               "during the latter half of the work shift on Wed."));
	CHECK(p.future_text == fixtures::kV3Future);
	CHECK(p.future_values == std::vector<std::int64_t>{7, 10});
}

TEST_CASE("chain of thought lines") {
	const std::vector<std::vector<std::int64_t>> halves{{5, 4}, {4, 8}, {5, 7}};
	const auto lines = synthesize_cot(halves);
	REQUIRE(lines.size() == 3);
	CHECK(lines[0].text == "5 + 4 = 9");
	CHECK(cot_paragraph(lines, "Mon to Wed") ==
	      "The entire working time is composed of the first half and the second half. Therefore, from Mon to Wed, the "
	      "total human mobility are 5 + 4 = 9, 4 + 8 = 12, 5 + 7 = 12.");

	const std::vector<std::vector<std::int64_t>> four{{1, 4, 3, 1}};
	CHECK(synthesize_cot(four)[0].text == "1 + 4 + 3 + 1 = 9");
	CHECK(synthesize_cot(std::vector<std::vector<std::int64_t>>{{0, 0}})[0].text == "0 + 0 = 0");
}

TEST_CASE("verifying chain of thought") {
	const auto ok = verify_cot("1 + 4 + 3 + 1 = 9");
	REQUIRE(ok.size() == 1);
	CHECK(ok[0].valid);
	CHECK(ok[0].addends == std::vector<std::int64_t>{1, 4, 3, 1});
	CHECK_FALSE(verify_cot("2 + 2 = 5")[0].valid);
	CHECK_THROWS_AS(verify_cot("hello world"), NoExpressionsFound);
	CHECK(verify_cot("totals are 5 + 4 = 9, 4 + 8 = 12, 5 + 7 = 11.").size() == 3);

	std::mt19937_64 rng(3);
	for (int i = 0; i < 200; ++i) {
		std::vector<std::int64_t> addends(1 + rng() % 6);
		for (auto &a : addends) a = static_cast<std::int64_t>(rng() % 1000);
		const auto line = synthesize_cot(std::vector<std::vector<std::int64_t>>{addends})[0];
		const auto checks = verify_cot(line.text);
		REQUIRE(checks.size() == 1);
		CHECK(checks[0].valid);
		CHECK(checks[0].addends == addends);
	}
}

TEST_CASE("V3 carries the chain of thought and the V2 future") {
	const auto w = fixtures::mobil_window();
	const auto p = build_v3(w);
	const auto v2 = build_v2(w);
	CHECK(p.variant == Variant::V3);
	CHECK(p.future_text == v2.future_text);
	CHECK(contains(p.history_text, "From Mon to Wed, the human mobility during the first and second half working time "
	                               "are "));
	CHECK(contains(p.history_text, "The entire working time is composed of the first half and the second half. "
	                               "Therefore, from Mon to Wed, the total human mobility are "));
	CHECK(contains(p.history_text, "4 + 8 = 12, 5 + 7 = 12. How many people will visit this place tomorrow?"));

	const auto zero = build_v3(fixtures::constant_window(0));
	CHECK(contains(zero.history_text, "0 + 0 = 0, 0 + 0 = 0, 0 + 0 = 0."));

	const std::string good = "Working it out: 3 + 6 = 9, 4 + 8 = 12, 5 + 7 = 12.";
	CHECK(contains(build_v3(w, 12, good).history_text, good));
	const std::string wrong_sum = "3 + 6 = 10, 4 + 8 = 12, 5 + 7 = 12.";
	CHECK_FALSE(contains(build_v3(w, 12, wrong_sum).history_text, wrong_sum));
	const std::string wrong_total = "3 + 6 = 9, 4 + 9 = 13, 5 + 7 = 12.";
	CHECK_FALSE(contains(build_v3(w, 12, wrong_total).history_text, wrong_total));
	CHECK(build_v3(w, 12, std::string("no arithmetic")).history_text == p.history_text);
}

TEST_CASE("V4 segment sums conserve daily totals") {
	const auto w = fixtures::mobil_window();
	const auto p = build_v4(w, 4, V4Segmentation::MinimizeGain);
	CHECK(contains(p.history_text, "From Mon to Wed, the human mobility during the 4 different time segments are "));
	CHECK(contains(p.history_text, "The entire working time is composed of the whole time segments."));
	const auto checks = verify_cot(p.history_text);
	REQUIRE(checks.size() == 3);
	CHECK(checks[0].total == 9);
	CHECK(checks[1].total == 12);
	CHECK(checks[2].total == 12);
	for (const auto &c : checks) {
		CHECK(c.valid);
		CHECK(c.addends.size() == 4);
	}
	CHECK(p.future_values.size() == 4);
	CHECK(p.future_total == 17);
	CHECK(contains(p.future_text, "during these 4 different time segments. Therefore, there are 17 people will visit "
	                              "Mobil on Thu."));

	const auto diurnal = build_v4(w, 2, V4Segmentation::Diurnal);
	CHECK(diurnal.future_values == build_v2(w).future_values);
	CHECK(contains(diurnal.history_text, "3, 6; 4, 8; 5, 7."));

	const auto zero = build_v4(fixtures::constant_window(0), 3, V4Segmentation::MaximizeIg);
	for (const auto &c : verify_cot(zero.history_text)) CHECK(c.total == 0);
	CHECK(zero.future_values == std::vector<std::int64_t>{0, 0, 0});

	CHECK_THROWS_AS(build_v4(w, 1, V4Segmentation::MinimizeGain), ConfigError);
	CHECK_THROWS_AS(build_v4(w, 3, V4Segmentation::Diurnal), ConfigError);
}

TEST_CASE("every variant preserves day totals on a synthetic corpus") {
	SynthConfig sc;
	sc.num_pois = 30;
	sc.days = 8;
	for (const auto &w : make_windows(synthesize_corpus(sc), 3)) {
		for (auto v : {Variant::V1, Variant::V2, Variant::V3, Variant::V4}) {
			const auto p = build_variant(w, v);
			CHECK(std::accumulate(p.future_values.begin(), p.future_values.end(), std::int64_t{0}) ==
			      w.target.daily_total);
		}
	}
}

TEST_CASE("future sentences") {
	const std::vector<std::int64_t> halves{7, 10};
	CHECK(render_future(Variant::V2, "Mobil", Weekday::Thu, halves) == fixtures::kV3Future);
	const std::vector<std::int64_t> four{3, 5, 2, 7};
	CHECK(render_future(Variant::V4, "Mobil", Weekday::Thu, four) == fixtures::kV4Future);
}
