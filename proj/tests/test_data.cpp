#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "promptmine/data.hpp"
#include "promptmine/errors.hpp"
#include "promptmine/text.hpp"

using namespace promptmine;

namespace {

std::string jsonl_row(const std::string &poi, const std::string &date, const std::string &hourly) {
	return R"({"poi_id":")" + poi + R"(","brand":"Mobil","region":"WI, Osseo","open_hour":0,"close_hour":24,"date":")" +
	       date + R"(","hourly_visits":[)" + hourly + "]}\n";
}

std::string join24(const HourlySeries &s) { return text::join<std::int64_t>(s, ","); }

} // namespace

TEST_CASE("dates and weekdays") {
	CHECK(weekday_of(fixtures::day(26)) == Weekday::Mon);
	CHECK(weekday_name(weekday_of(fixtures::day(29))) == "Thu");
	CHECK(format_date(fixtures::day(26)) == "2022-12-26");
	CHECK(parse_date("2022-12-26") == fixtures::day(26));
	CHECK_THROWS_AS(parse_date("2022-13-01"), SchemaError);
	CHECK_THROWS_AS(parse_date("yesterday"), SchemaError);
}

TEST_CASE("a row of 24 hourly values becomes a day with its total") {
	std::istringstream in(jsonl_row("p1", "2022-12-26", join24(fixtures::kMon)));
	const auto records = read_records(in, RecordFormat::Jsonl);
	REQUIRE(records.size() == 1);
	REQUIRE(records[0].days.size() == 1);
	CHECK(records[0].days[0].daily_total == 9);
	CHECK(records[0].days[0].weekday == Weekday::Mon);
}

TEST_CASE("schema violations are rejected") {
	SUBCASE("23 hourly values") {
		std::istringstream in(jsonl_row("p1", "2022-12-26", "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0"));
		CHECK_THROWS_AS(read_records(in, RecordFormat::Jsonl), SchemaError);
	}
	SUBCASE("negative count") {
		HourlySeries s{};
		std::string row = jsonl_row("p1", "2022-12-26", join24(s));
		row.replace(row.find("[0"), 2, "[-1");
		std::istringstream in(row);
		CHECK_THROWS_AS(read_records(in, RecordFormat::Jsonl), SchemaError);
	}
	SUBCASE("dates out of order") {
		std::istringstream in(jsonl_row("p1", "2022-12-27", join24(fixtures::kMon)) +
		                      jsonl_row("p1", "2022-12-26", join24(fixtures::kTue)));
		CHECK_THROWS_AS(read_records(in, RecordFormat::Jsonl), SchemaError);
	}
	SUBCASE("malformed json") {
		std::istringstream in("{not json}\n");
		CHECK_THROWS_AS(read_records(in, RecordFormat::Jsonl), SchemaError);
	}
}

TEST_CASE("empty input yields no records") {
	std::istringstream in("");
	CHECK(read_records(in, RecordFormat::Jsonl).empty());
	std::istringstream csv("");
	CHECK(read_records(csv, RecordFormat::Csv).empty());
	CHECK_THROWS_AS(load_records("/nonexistent/records.jsonl", RecordFormat::Jsonl), IoError);
}

TEST_CASE("jsonl and csv round trip") {
	SynthConfig sc;
	sc.num_pois = 4;
	const auto records = synthesize_corpus(sc);
	for (auto fmt : {RecordFormat::Jsonl, RecordFormat::Csv}) {
		std::stringstream buf;
		write_records(buf, records, fmt);
		CHECK(read_records(buf, fmt) == records);
	}
}

TEST_CASE("csv region with a comma is quoted") {
	const std::string csv = "poi_id,brand,region,open_hour,close_hour,date," +
	                        [] {
		                        std::string h;
		                        for (int i = 0; i < 24; ++i) h += (i ? ",h" : "h") + std::string(i < 10 ? "0" : "") + std::to_string(i);
		                        return h;
	                        }() +
	                        "\np1,Mobil,\"WI, Osseo\",0,24,2022-12-26," + join24(fixtures::kMon) + "\n";
	std::istringstream in(csv);
	const auto records = read_records(in, RecordFormat::Csv);
	REQUIRE(records.size() == 1);
	CHECK(records[0].meta.region == "WI, Osseo");
	CHECK(records[0].days[0].daily_total == 9);
}

TEST_CASE("synthetic corpus is reproducible and seed dependent") {
	SynthConfig sc;
	const auto a = synthesize_corpus(sc);
	const auto b = synthesize_corpus(sc);
	CHECK(a.size() == 10);
	CHECK(a == b);
	std::stringstream sa, sb;
	write_records(sa, a, RecordFormat::Jsonl);
	write_records(sb, b, RecordFormat::Jsonl);
	CHECK(sa.str() == sb.str());
	sc.seed = 43;
	CHECK(synthesize_corpus(sc) != a);
	for (const auto &r : a) {
		CHECK(r.days.size() == 7);
		for (const auto &d : r.days) {
			CHECK(d.daily_total == std::accumulate(d.hourly_visits.begin(), d.hourly_visits.end(), std::int64_t{0}));
			for (int h = 0; h < kHoursPerDay; ++h) {
				if (h < r.meta.open_hour || h >= r.meta.close_hour) CHECK(d.hourly_visits[h] == 0);
			}
		}
	}
}

TEST_CASE("flat profile has one rate per day") {
	const auto rates = hourly_rates(PeakProfile::Flat, 8, 20, 2.5);
	for (double r : rates) CHECK(r == rates[0]);
	const auto diurnal = hourly_rates(PeakProfile::Diurnal, 8, 20, 2.5);
	CHECK(diurnal[3] == 0.0);
	CHECK(diurnal[12] > diurnal[9]);
}

TEST_CASE("windows are consecutive runs of n+1 days") {
	auto poi_with_days = [](int days) {
		PoiRecord r;
		r.meta = PoiMeta{"p", "B", "R", 0, 24};
		for (int i = 0; i < days; ++i) r.days.push_back(DayRecord::make(fixtures::day(20 + i), fixtures::kMon));
		return std::vector<PoiRecord>{r};
	};
	CHECK(make_windows(poi_with_days(4), 3).size() == 1);
	CHECK(make_windows(poi_with_days(3), 3).empty());
	CHECK(make_windows(poi_with_days(7), 3).size() == 4);
	const auto w = make_windows(poi_with_days(4), 3).front();
	CHECK(w.history.size() * kHoursPerDay == 72);
	CHECK(w.target.date == fixtures::day(23));

	auto gapped = poi_with_days(7);
	gapped[0].days.erase(gapped[0].days.begin() + 3); // 20,21,22,24,25,26
	CHECK(make_windows(gapped, 3).empty()); // the longest consecutive run is three days
	CHECK(make_windows(poi_with_days(7), 3) == make_windows(poi_with_days(7), 3));
	CHECK_THROWS_AS(make_windows(poi_with_days(7), 0), ConfigError);
}

TEST_CASE("split sizes, pool and determinism") {
	SynthConfig sc;
	sc.num_pois = 25;
	sc.days = 7;
	const auto windows = make_windows(synthesize_corpus(sc), 3);
	REQUIRE(windows.size() == 100);
	const auto split = split_dataset(windows);
	CHECK(split.train.size() == 70);
	CHECK(split.val.size() == 10);
	CHECK(split.test.size() == 20);
	CHECK(split.evaluator_pool.size() == 20);

	std::set<WindowKey> seen;
	for (const auto *part : {&split.train, &split.val, &split.test})
		for (const auto &w : *part) CHECK(seen.insert(key_of(w)).second);
	CHECK(seen.size() == 100);
	for (const auto &w : split.evaluator_pool) {
		CHECK(std::find(split.train.begin(), split.train.end(), w) != split.train.end());
	}

	const std::vector<ForecastWindow> ten(windows.begin(), windows.begin() + 10);
	const auto a = split_dataset(ten, {}, 0.2, 9);
	const auto b = split_dataset(ten, {}, 0.2, 9);
	CHECK(a.train == b.train);
	CHECK(a.val == b.val);
	CHECK(a.test == b.test);
	CHECK_THROWS_AS(split_dataset(ten, {0.5, 0.5, 0.5}), ConfigError);
}
