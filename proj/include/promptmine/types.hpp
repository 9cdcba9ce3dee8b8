#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace promptmine {

using Date = std::chrono::sys_days;

enum class Weekday { Mon, Tue, Wed, Thu, Fri, Sat, Sun };

Weekday weekday_of(Date date);
std::string_view weekday_name(Weekday day);
std::string format_date(Date date);
/// Parses `YYYY-MM-DD`; throws SchemaError otherwise.
Date parse_date(std::string_view text);

inline constexpr int kHoursPerDay = 24;
using HourlySeries = std::array<std::int64_t, kHoursPerDay>;

struct DayRecord {
	Date date{};
	Weekday weekday = Weekday::Mon;
	HourlySeries hourly_visits{};
	std::int64_t daily_total = 0;

	static DayRecord make(Date date, const HourlySeries &hourly);
	bool operator==(const DayRecord &) const = default;
};

/// POI metadata without the visit series.
struct PoiMeta {
	std::string poi_id;
	std::string brand;
	std::string region;
	int open_hour = 0;
	int close_hour = 24;

	bool operator==(const PoiMeta &) const = default;
};

struct PoiRecord {
	PoiMeta meta;
	std::vector<DayRecord> days;

	bool operator==(const PoiRecord &) const = default;
};

/// `n` history days immediately followed by the target day.
struct ForecastWindow {
	PoiMeta poi;
	std::vector<DayRecord> history;
	DayRecord target;

	std::size_t n() const { return history.size(); }
	bool operator==(const ForecastWindow &) const = default;
};

struct WindowKey {
	std::string poi_id;
	Date target_date{};

	auto operator<=>(const WindowKey &) const = default;
};

inline WindowKey key_of(const ForecastWindow &w) { return {w.poi.poi_id, w.target.date}; }

enum class Variant { Init, V1, V2, V3, V4 };

std::string_view variant_name(Variant v);
/// Accepts "init", "v1".."v4" (case-insensitive).
Variant parse_variant(std::string_view text);

} // namespace promptmine
