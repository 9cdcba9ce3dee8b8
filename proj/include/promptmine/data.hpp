#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "promptmine/types.hpp"

namespace promptmine {

enum class RecordFormat { Jsonl, Csv };

RecordFormat parse_record_format(std::string_view text);

/// Reads one POI-day per row. Rows of the same POI are grouped in order of first
/// appearance; within a POI dates must be strictly increasing. Gaps are allowed
/// and break window runs later.
std::vector<PoiRecord> load_records(const std::filesystem::path &path, RecordFormat format);
std::vector<PoiRecord> read_records(std::istream &in, RecordFormat format);

void write_records(std::ostream &out, std::span<const PoiRecord> records, RecordFormat format);

enum class PeakProfile { Flat, Diurnal };

struct SynthConfig {
	int num_pois = 10;
	int days = 7;
	PeakProfile peak_profile = PeakProfile::Diurnal;
	std::uint64_t seed = 42;
	Date start_date = std::chrono::year{2022} / std::chrono::December / 26;
};

/// Expected visits per hour for a POI-day. Closed hours are zero for the
/// diurnal profile; the flat profile uses one rate for all 24 hours.
std::array<double, kHoursPerDay> hourly_rates(PeakProfile profile, int open_hour, int close_hour, double scale);

std::vector<PoiRecord> synthesize_corpus(const SynthConfig &config);

/// One window per run of n+1 consecutive dates, ordered by (poi_id, target date).
std::vector<ForecastWindow> make_windows(std::span<const PoiRecord> records, int n = 3);

struct SplitFractions {
	double train = 0.70;
	double val = 0.10;
	double test = 0.20;
};

struct DatasetSplit {
	std::vector<ForecastWindow> train;
	std::vector<ForecastWindow> val;
	std::vector<ForecastWindow> test;
	std::vector<ForecastWindow> evaluator_pool;
	std::uint64_t seed = 42;
};

DatasetSplit split_dataset(std::vector<ForecastWindow> windows, SplitFractions fractions = {},
                           double pool_fraction = 0.20, std::uint64_t seed = 42);

} // namespace promptmine
