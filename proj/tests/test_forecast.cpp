#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "promptmine/data.hpp"
#include "promptmine/errors.hpp"
#include "promptmine/forecast.hpp"
#include "promptmine/refine.hpp"

using namespace promptmine;

namespace {

ForecastOutcome outcome_with(const WindowKey &key, std::vector<std::int64_t> values) {
	ForecastOutcome o;
	o.window = key;
	o.variant = Variant::V2;
	o.status = ParseStatus::Ok;
	o.effective_total = std::accumulate(values.begin(), values.end(), std::int64_t{0});
	o.parsed_values = std::move(values);
	return o;
}

ForecastTruth truth_with(const WindowKey &key, std::vector<std::int64_t> segments) {
	ForecastTruth t;
	t.window = key;
	t.variant = Variant::V2;
	t.daily_total = std::accumulate(segments.begin(), segments.end(), std::int64_t{0});
	t.segments = std::move(segments);
	return t;
}

} // namespace

TEST_CASE("parsing the reference future sentences") {
	const auto v1 = parse_forecast(fixtures::kV1Future, Variant::V1, 24);
	CHECK(v1.status == ParseStatus::Ok);
	CHECK(v1.parsed_values.size() == 24);
	CHECK(v1.effective_total == 17);
	CHECK(v1.parsed_values == std::vector<std::int64_t>(fixtures::kThu.begin(), fixtures::kThu.end()));

	const auto v3 = parse_forecast(fixtures::kV3Future, Variant::V3, 2);
	CHECK(v3.status == ParseStatus::Ok);
	CHECK(v3.parsed_values == std::vector<std::int64_t>{7, 10});
	REQUIRE(v3.stated_total.has_value());
	CHECK(*v3.stated_total == 17);

	const auto v4 = parse_forecast(fixtures::kV4Future, Variant::V4, 4);
	CHECK(v4.status == ParseStatus::Ok);
	CHECK(v4.parsed_values == std::vector<std::int64_t>{3, 5, 2, 7});
	CHECK(v4.effective_total == 17);
}

TEST_CASE("parse failures are encoded, never thrown") {
	CHECK(parse_forecast("no numbers here", Variant::V1, 24).status == ParseStatus::Fallback);
	CHECK(parse_forecast("no numbers here", Variant::V2, 2).status == ParseStatus::Fallback);
	CHECK(parse_forecast("", Variant::V4, 4).status == ParseStatus::Fallback);
	CHECK(parse_forecast(fixtures::kV4Future, Variant::V4, 3).status == ParseStatus::Fallback);

	const std::string inconsistent =
	    "On Thu, there will be 7 people to visit Mobil during the first half of the work shift and 10 people to visit "
	    "Mobil during the latter half of the work shift. Therefore, there are 18 people will visit here.";
	const auto o = parse_forecast(inconsistent, Variant::V2, 2);
	CHECK(o.status == ParseStatus::Inconsistent);
	CHECK(o.effective_total == 17);

	const std::string no_total = "On Thu, there will be 7 people to visit Mobil during the first half of the work "
	                             "shift and 10 people to visit Mobil during the latter half of the work shift.";
	CHECK(parse_forecast(no_total, Variant::V2, 2).status == ParseStatus::Fallback);
}

TEST_CASE("render then parse recovers the truth for every variant") {
	SynthConfig sc;
	sc.num_pois = 40;
	sc.days = 8;
	const auto windows = make_windows(synthesize_corpus(sc), 3);
	for (const auto &w : windows) {
		for (auto v : {Variant::V1, Variant::V2, Variant::V3, Variant::V4}) {
			const auto p = build_variant(w, v);
			const auto o = parse_forecast(p.future_text, v, p.future_values.size());
			CHECK(o.status == ParseStatus::Ok);
			CHECK(o.parsed_values == p.future_values);
			CHECK(o.effective_total == w.target.daily_total);
		}
	}
}

TEST_CASE("truth and fallback values") {
	const auto t = make_truth(build_v2(fixtures::mobil_window()));
	CHECK(t.segments == std::vector<std::int64_t>{7, 10});
	CHECK(t.daily_total == 17);
	// history halves (3,6), (4,8), (5,7) average to (4, 7); daily totals 9, 12, 12 average to 11
	CHECK(t.fallback_segments == std::vector<std::int64_t>{4, 7});
	CHECK(t.fallback_total == 11);

	auto failed = parse_forecast("garbled", Variant::V2, 2);
	failed.window = t.window;
	CHECK(predicted_segments(failed, t) == t.fallback_segments);
	CHECK(predicted_total(failed, t) == 11);

	const auto v1 = make_truth(build_v1(fixtures::mobil_window()));
	auto parsed = parse_forecast(fixtures::kV1Future, Variant::V1, 24);
	CHECK(predicted_segments(parsed, v1) == std::vector<std::int64_t>{7, 10});
}

TEST_CASE("metrics") {
	const WindowKey a{"a", fixtures::day(1)}, b{"b", fixtures::day(1)};
	SUBCASE("perfect") {
		const std::vector<ForecastOutcome> o{outcome_with(a, {1, 2}), outcome_with(b, {3, 4})};
		const std::vector<ForecastTruth> t{truth_with(a, {1, 2}), truth_with(b, {3, 4})};
		for (auto s : {MetricScope::SegmentAverage, MetricScope::FirstHalf, MetricScope::SecondHalf, MetricScope::Daily}) {
			const auto m = compute_metrics(o, t, s);
			CHECK(m.rmse == 0.0);
			CHECK(m.mae == 0.0);
			CHECK(m.n_samples == 2);
		}
	}
	SUBCASE("hand computed errors") {
		const std::vector<ForecastOutcome> o{outcome_with(a, {2, 0}), outcome_with(b, {5, 0})};
		const std::vector<ForecastTruth> t{truth_with(a, {1, 0}), truth_with(b, {3, 0})};
		const auto m = compute_metrics(o, t, MetricScope::FirstHalf);
		CHECK(m.mae == 1.5);
		CHECK(m.rmse == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
		const auto seg = compute_metrics(o, t, MetricScope::SegmentAverage);
		CHECK(seg.mae == doctest::Approx(0.75));
		CHECK(seg.rmse == doctest::Approx(std::sqrt(2.5) / 2));
	}
	SUBCASE("misalignment") {
		const std::vector<ForecastOutcome> o{outcome_with(a, {1, 2})};
		const std::vector<ForecastTruth> t{truth_with(b, {1, 2})};
		CHECK_THROWS_AS(compute_metrics(o, t, MetricScope::Daily), AlignmentError);
		CHECK_THROWS_AS(compute_metrics(o, std::vector<ForecastTruth>{}, MetricScope::Daily), AlignmentError);
		const std::vector<ForecastOutcome> three{outcome_with(a, {1, 2, 3})};
		const std::vector<ForecastTruth> three_t{truth_with(a, {1, 2, 3})};
		CHECK_THROWS_AS(compute_metrics(three, three_t, MetricScope::FirstHalf), AlignmentError);
	}
	SUBCASE("failure rate") {
		std::vector<ForecastOutcome> o;
		std::vector<ForecastTruth> t;
		for (int i = 0; i < 20; ++i) {
			const WindowKey k{"p" + std::to_string(i), fixtures::day(1)};
			o.push_back(outcome_with(k, {1, 1}));
			if (i % 4 == 0) o.back().status = ParseStatus::Fallback;
			t.push_back(truth_with(k, {1, 1}));
			t.back().fallback_segments = {1, 1};
			t.back().fallback_total = 2;
		}
		CHECK(compute_metrics(o, t, MetricScope::Daily).parse_failure_rate == 0.25);
	}
}

TEST_CASE("report rendering") {
	ReportRow row;
	row.model = "Pegasus";
	row.variant = Variant::V1;
	MetricReport daily;
	daily.scope = MetricScope::Daily;
	daily.rmse = 8.26;
	daily.mae = 3.67;
	daily.n_samples = 10;
	row.metrics[MetricScope::Daily] = daily;
	ReportLayout layout;
	layout.scopes = {MetricScope::Daily};
	const auto r = render_report(std::vector<ReportRow>{row}, layout);
	CHECK(r.text.find("| Pegasus | V1 | 8.26 | 3.67 |") != std::string::npos);
	CHECK(r.csv.find("Pegasus,v1,,8.260000,3.670000,10,0.000000") != std::string::npos);

	const auto empty = render_report(std::vector<ReportRow>{}, layout);
	CHECK(std::count(empty.text.begin(), empty.text.end(), '\n') == 2);
	CHECK(std::count(empty.csv.begin(), empty.csv.end(), '\n') == 1);

	ReportRow v2 = row;
	v2.variant = Variant::V2;
	MetricReport first = daily;
	first.scope = MetricScope::FirstHalf;
	row.metrics[MetricScope::FirstHalf] = first;
	v2.metrics[MetricScope::FirstHalf] = first;
	layout.scopes = {MetricScope::FirstHalf, MetricScope::Daily};
	const auto two = render_report(std::vector<ReportRow>{row, v2}, layout);
	// two scopes x two variants, each cell an RMSE | MAE pair
	CHECK(std::count(two.text.begin(), two.text.end(), '\n') == 4);
	CHECK(two.text.find("| Pegasus | V2 | 8.26 | 3.67 | 8.26 | 3.67 |") != std::string::npos);
}
