#include "promptmine/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "promptmine/errors.hpp"
#include "promptmine/random.hpp"
#include "promptmine/text.hpp"

namespace promptmine {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// calendar helpers

Weekday weekday_of(Date date) {
	const unsigned iso = std::chrono::weekday{date}.iso_encoding(); // Mon = 1
	return static_cast<Weekday>(iso - 1);
}

std::string_view weekday_name(Weekday day) {
	static constexpr std::string_view kNames[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
	return kNames[static_cast<int>(day)];
}

std::string format_date(Date date) {
	const std::chrono::year_month_day ymd{date};
	char buf[16];
	std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
	              static_cast<unsigned>(ymd.day()));
	return buf;
}

Date parse_date(std::string_view s) {
	int y = 0;
	unsigned m = 0, d = 0;
	char tail = 0;
	const std::string copy(s);
	if (s.size() != 10 || std::sscanf(copy.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
		throw SchemaError("invalid date '" + copy + "', expected YYYY-MM-DD");
	}
	const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
	if (!ymd.ok()) throw SchemaError("invalid calendar date '" + copy + "'");
	return Date{ymd};
}

DayRecord DayRecord::make(Date date, const HourlySeries &hourly) {
	DayRecord day;
	day.date = date;
	day.weekday = weekday_of(date);
	day.hourly_visits = hourly;
	day.daily_total = std::accumulate(hourly.begin(), hourly.end(), std::int64_t{0});
	return day;
}

std::string_view variant_name(Variant v) {
	switch (v) {
	case Variant::Init: return "init";
	case Variant::V1: return "v1";
	case Variant::V2: return "v2";
	case Variant::V3: return "v3";
	case Variant::V4: return "v4";
	}
	return "?";
}

Variant parse_variant(std::string_view text) {
	const auto t = text::lower(text);
	for (Variant v : {Variant::Init, Variant::V1, Variant::V2, Variant::V3, Variant::V4}) {
		if (t == variant_name(v)) return v;
	}
	throw ConfigError("unknown variant '" + std::string(text) + "'");
}

RecordFormat parse_record_format(std::string_view text) {
	const auto t = text::lower(text);
	if (t == "jsonl") return RecordFormat::Jsonl;
	if (t == "csv") return RecordFormat::Csv;
	throw ConfigError("unknown record format '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// loading

namespace {

struct Row {
	PoiMeta meta;
	Date date;
	HourlySeries hourly;
};

void validate_meta(const PoiMeta &meta, std::size_t line) {
	const auto where = " (line " + std::to_string(line) + ")";
	if (meta.poi_id.empty()) throw SchemaError("empty poi_id" + where);
	if (meta.open_hour < 0 || meta.open_hour > 23) throw SchemaError("open_hour out of range" + where);
	if (meta.close_hour < 1 || meta.close_hour > 24) throw SchemaError("close_hour out of range" + where);
	if (meta.open_hour >= meta.close_hour) throw SchemaError("open_hour must be before close_hour" + where);
}

Row parse_jsonl_row(const std::string &line, std::size_t lineno) {
	json j;
	try {
		j = json::parse(line);
	} catch (const json::exception &e) {
		throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
	}
	try {
		Row row;
		row.meta.poi_id = j.at("poi_id").get<std::string>();
		row.meta.brand = j.at("brand").get<std::string>();
		row.meta.region = j.at("region").get<std::string>();
		row.meta.open_hour = j.at("open_hour").get<int>();
		row.meta.close_hour = j.at("close_hour").get<int>();
		row.date = parse_date(j.at("date").get<std::string>());
		const auto &hours = j.at("hourly_visits");
		if (!hours.is_array() || hours.size() != kHoursPerDay) {
			throw SchemaError("line " + std::to_string(lineno) + ": hourly_visits must hold 24 values");
		}
		for (int h = 0; h < kHoursPerDay; ++h) {
			if (!hours[h].is_number_integer()) throw SchemaError("line " + std::to_string(lineno) + ": non-integer visit count");
			row.hourly[h] = hours[h].get<std::int64_t>();
		}
		return row;
	} catch (const json::exception &e) {
		throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
	}
}

std::vector<std::string> split_csv_line(const std::string &line) {
	std::vector<std::string> fields;
	std::string cur;
	bool quoted = false;
	for (std::size_t i = 0; i < line.size(); ++i) {
		const char c = line[i];
		if (quoted) {
			if (c == '"') {
				if (i + 1 < line.size() && line[i + 1] == '"') {
					cur += '"';
					++i;
				} else {
					quoted = false;
				}
			} else {
				cur += c;
			}
		} else if (c == '"') {
			quoted = true;
		} else if (c == ',') {
			fields.push_back(std::move(cur));
			cur.clear();
		} else {
			cur += c;
		}
	}
	if (quoted) throw SchemaError("unterminated quote in CSV row");
	fields.push_back(std::move(cur));
	return fields;
}

std::int64_t parse_int(const std::string &s, std::size_t lineno) {
	std::size_t pos = 0;
	long long v = 0;
	try {
		v = std::stoll(s, &pos);
	} catch (const std::exception &) {
		pos = 0;
	}
	if (pos == 0 || pos != s.size()) throw SchemaError("line " + std::to_string(lineno) + ": bad integer '" + s + "'");
	return v;
}

constexpr std::size_t kCsvColumns = 6 + kHoursPerDay;

Row parse_csv_row(const std::string &line, std::size_t lineno) {
	const auto f = split_csv_line(line);
	if (f.size() != kCsvColumns) {
		throw SchemaError("line " + std::to_string(lineno) + ": expected " + std::to_string(kCsvColumns) +
		                  " columns, got " + std::to_string(f.size()));
	}
	Row row;
	row.meta.poi_id = f[0];
	row.meta.brand = f[1];
	row.meta.region = f[2];
	row.meta.open_hour = static_cast<int>(parse_int(f[3], lineno));
	row.meta.close_hour = static_cast<int>(parse_int(f[4], lineno));
	row.date = parse_date(f[5]);
	for (int h = 0; h < kHoursPerDay; ++h) row.hourly[h] = parse_int(f[6 + h], lineno);
	return row;
}

std::string csv_field(const std::string &s) {
	if (s.find_first_of(",\"\n") == std::string::npos) return s;
	std::string out = "\"";
	for (char c : s) {
		if (c == '"') out += '"';
		out += c;
	}
	return out + "\"";
}

std::string csv_header() {
	std::string h = "poi_id,brand,region,open_hour,close_hour,date";
	for (int i = 0; i < kHoursPerDay; ++i) h += (i < 10 ? ",h0" : ",h") + std::to_string(i);
	return h;
}

} // namespace

std::vector<PoiRecord> read_records(std::istream &in, RecordFormat format) {
	std::vector<PoiRecord> records;
	std::unordered_map<std::string, std::size_t> index;
	std::string line;
	std::size_t lineno = 0;
	bool header_seen = false;
	while (std::getline(in, line)) {
		++lineno;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.find_first_not_of(" \t") == std::string::npos) continue;
		if (format == RecordFormat::Csv && !header_seen) {
			header_seen = true;
			if (line.rfind("poi_id,", 0) == 0) continue;
		}
		Row row = format == RecordFormat::Jsonl ? parse_jsonl_row(line, lineno) : parse_csv_row(line, lineno);
		validate_meta(row.meta, lineno);
		for (auto v : row.hourly) {
			if (v < 0) throw SchemaError("line " + std::to_string(lineno) + ": negative visit count");
		}
		auto [it, inserted] = index.try_emplace(row.meta.poi_id, records.size());
		if (inserted) {
			records.push_back(PoiRecord{row.meta, {}});
		}
		auto &rec = records[it->second];
		if (!(rec.meta == row.meta)) {
			throw SchemaError("line " + std::to_string(lineno) + ": metadata differs from earlier rows of POI " +
			                  row.meta.poi_id);
		}
		if (!rec.days.empty() && rec.days.back().date >= row.date) {
			throw SchemaError("line " + std::to_string(lineno) + ": dates of POI " + row.meta.poi_id +
			                  " must be strictly increasing");
		}
		rec.days.push_back(DayRecord::make(row.date, row.hourly));
	}
	if (in.bad()) throw IoError("read failure");
	return records;
}

std::vector<PoiRecord> load_records(const std::filesystem::path &path, RecordFormat format) {
	std::ifstream in(path);
	if (!in) throw IoError("cannot open " + path.string());
	return read_records(in, format);
}

void write_records(std::ostream &out, std::span<const PoiRecord> records, RecordFormat format) {
	if (format == RecordFormat::Csv) out << csv_header() << '\n';
	for (const auto &rec : records) {
		for (const auto &day : rec.days) {
			if (format == RecordFormat::Jsonl) {
				json j;
				j["poi_id"] = rec.meta.poi_id;
				j["brand"] = rec.meta.brand;
				j["region"] = rec.meta.region;
				j["open_hour"] = rec.meta.open_hour;
				j["close_hour"] = rec.meta.close_hour;
				j["date"] = format_date(day.date);
				j["hourly_visits"] = day.hourly_visits;
				out << j.dump() << '\n';
			} else {
				out << csv_field(rec.meta.poi_id) << ',' << csv_field(rec.meta.brand) << ',' << csv_field(rec.meta.region)
				    << ',' << rec.meta.open_hour << ',' << rec.meta.close_hour << ',' << format_date(day.date);
				for (auto v : day.hourly_visits) out << ',' << v;
				out << '\n';
			}
		}
	}
}

// ---------------------------------------------------------------------------
// synthesis

std::array<double, kHoursPerDay> hourly_rates(PeakProfile profile, int open_hour, int close_hour, double scale) {
	std::array<double, kHoursPerDay> rates{};
	if (profile == PeakProfile::Flat) {
		rates.fill(scale);
		return rates;
	}
	for (int h = open_hour; h < close_hour; ++h) {
		double m;
		if (h < 11) {
			m = 0.6; // morning
		} else if (h < 14) {
			m = 1.8; // lunch
		} else if (h < 17) {
			m = 0.9;
		} else {
			m = 1.4; // evening
		}
		rates[h] = scale * m;
	}
	return rates;
}

namespace {

std::int64_t poisson(Rng &rng, double lambda) {
	if (lambda <= 0.0) return 0;
	const double limit = std::exp(-lambda);
	std::int64_t k = 0;
	double p = rng.unit();
	while (p > limit) {
		++k;
		p *= rng.unit();
	}
	return k;
}

constexpr std::string_view kBrands[] = {"Mobil", "Starbucks", "Walgreens", "Subway", "Shell", "Target", "Costco",
                                        "Chipotle", "Kroger", "Dunkin"};
constexpr std::string_view kRegions[] = {"WI, Osseo", "CA, Fresno", "TX, Austin", "NY, Albany", "WA, Tacoma",
                                         "IL, Peoria", "OH, Dayton", "GA, Macon"};
constexpr std::pair<int, int> kHours[] = {{0, 24}, {6, 22}, {7, 21}, {8, 20}, {5, 23}};

} // namespace

std::vector<PoiRecord> synthesize_corpus(const SynthConfig &config) {
	if (config.num_pois < 1) throw ConfigError("num_pois must be positive");
	if (config.days < 1) throw ConfigError("days must be positive");
	std::vector<PoiRecord> records(static_cast<std::size_t>(config.num_pois));
#pragma omp parallel for schedule(static)
	for (int i = 0; i < config.num_pois; ++i) {
		Rng rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1)));
		PoiRecord rec;
		char id[32];
		std::snprintf(id, sizeof id, "poi-%05d", i);
		rec.meta.poi_id = id;
		rec.meta.brand = std::string(kBrands[rng.index(std::size(kBrands))]);
		rec.meta.region = std::string(kRegions[rng.index(std::size(kRegions))]);
		const auto hours = kHours[rng.index(std::size(kHours))];
		rec.meta.open_hour = hours.first;
		rec.meta.close_hour = hours.second;
		const double scale = 0.5 + 3.5 * rng.unit();
		const auto rates = hourly_rates(config.peak_profile, hours.first, hours.second, scale);
		for (int d = 0; d < config.days; ++d) {
			const Date date = config.start_date + std::chrono::days{d};
			HourlySeries hourly{};
			for (int h = 0; h < kHoursPerDay; ++h) hourly[h] = poisson(rng, rates[h]);
			rec.days.push_back(DayRecord::make(date, hourly));
		}
		records[static_cast<std::size_t>(i)] = std::move(rec);
	}
	return records;
}

// ---------------------------------------------------------------------------
// windowing and splitting

std::vector<ForecastWindow> make_windows(std::span<const PoiRecord> records, int n) {
	if (n < 1) throw ConfigError("window length n must be at least 1");
	const auto len = static_cast<std::size_t>(n);
	std::vector<ForecastWindow> windows;
	for (const auto &rec : records) {
		for (std::size_t t = len; t < rec.days.size(); ++t) {
			bool consecutive = true;
			for (std::size_t i = t - len; i < t; ++i) {
				if (rec.days[i + 1].date - rec.days[i].date != std::chrono::days{1}) {
					consecutive = false;
					break;
				}
			}
			if (!consecutive) continue;
			ForecastWindow w;
			w.poi = rec.meta;
			w.history.assign(rec.days.begin() + static_cast<std::ptrdiff_t>(t - len),
			                 rec.days.begin() + static_cast<std::ptrdiff_t>(t));
			w.target = rec.days[t];
			windows.push_back(std::move(w));
		}
	}
	std::stable_sort(windows.begin(), windows.end(),
	                 [](const ForecastWindow &a, const ForecastWindow &b) { return key_of(a) < key_of(b); });
	return windows;
}

DatasetSplit split_dataset(std::vector<ForecastWindow> windows, SplitFractions fractions, double pool_fraction,
                           std::uint64_t seed) {
	const double sum = fractions.train + fractions.val + fractions.test;
	if (fractions.train < 0 || fractions.val < 0 || fractions.test < 0 || std::abs(sum - 1.0) > 1e-9) {
		throw ConfigError("split fractions must be non-negative and sum to 1");
	}
	if (pool_fraction < 0 || pool_fraction > 1) throw ConfigError("pool fraction must lie in [0, 1]");

	const std::size_t total = windows.size();
	Rng rng(seed);
	rng.shuffle(windows);

	const auto round_count = [total](double f) {
		return std::min(total, static_cast<std::size_t>(std::llround(f * static_cast<double>(total))));
	};
	const std::size_t n_train = round_count(fractions.train);
	const std::size_t n_val = std::min(total - n_train, round_count(fractions.val));

	DatasetSplit split;
	split.seed = seed;
	auto first = std::make_move_iterator(windows.begin());
	split.train.assign(first, first + static_cast<std::ptrdiff_t>(n_train));
	split.val.assign(first + static_cast<std::ptrdiff_t>(n_train), first + static_cast<std::ptrdiff_t>(n_train + n_val));
	split.test.assign(first + static_cast<std::ptrdiff_t>(n_train + n_val), std::make_move_iterator(windows.end()));
	const std::size_t n_pool = std::min(n_train, round_count(pool_fraction));
	split.evaluator_pool.assign(split.train.begin(), split.train.begin() + static_cast<std::ptrdiff_t>(n_pool));
	return split;
}

} // namespace promptmine
