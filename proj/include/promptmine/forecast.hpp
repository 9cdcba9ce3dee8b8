#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "promptmine/template.hpp"

namespace promptmine {

enum class ParseStatus { Ok, Fallback, Inconsistent };

std::string_view parse_status_name(ParseStatus status);

struct ForecastOutcome {
	WindowKey window;
	Variant variant = Variant::V1;
	std::vector<std::int64_t> parsed_values;
	std::optional<std::int64_t> stated_total;
	std::int64_t effective_total = 0;
	ParseStatus status = ParseStatus::Fallback;
	std::string notes;
};

/// Never throws; failures are encoded in the status. `expected_segments` is
/// the number of values the variant's sentence should carry (24 for V1, 2 for
/// V2/V3, K for V4).
ForecastOutcome parse_forecast(std::string_view text, Variant variant, std::size_t expected_segments);

/// What a forecast is scored against, plus the fallback prediction used when
/// parsing fails.
struct ForecastTruth {
	WindowKey window;
	Variant variant = Variant::V1;
	/// Per-segment truth: the two halves for V1-V3, K sums for V4.
	std::vector<std::int64_t> segments;
	std::int64_t daily_total = 0;
	/// Cut indices into the target day (V1 predictions are summed with these).
	std::vector<int> cuts;
	std::vector<std::int64_t> fallback_segments;
	std::int64_t fallback_total = 0;
};

/// Truth for a refined prompt pair. Fallbacks are rounded means of the history
/// days under the same cuts.
ForecastTruth make_truth(const PromptPair &pair);

enum class MetricScope { SegmentAverage, FirstHalf, SecondHalf, Daily };

std::string_view metric_scope_name(MetricScope scope);
MetricScope parse_metric_scope(std::string_view text);

struct MetricReport {
	double rmse = 0.0;
	double mae = 0.0;
	MetricScope scope = MetricScope::Daily;
	std::size_t n_samples = 0;
	double parse_failure_rate = 0.0;
};

/// Predicted segment values for an outcome, after fallback substitution and,
/// for V1, summing hourly values over the truth's cuts.
std::vector<std::int64_t> predicted_segments(const ForecastOutcome &outcome, const ForecastTruth &truth);
std::int64_t predicted_total(const ForecastOutcome &outcome, const ForecastTruth &truth);

/// Throws AlignmentError when sizes or window keys differ, or when a half scope
/// is requested on a sample without exactly two segments.
MetricReport compute_metrics(std::span<const ForecastOutcome> outcomes, std::span<const ForecastTruth> truths,
                             MetricScope scope);

struct ReportRow {
	std::string model;
	Variant variant = Variant::V1;
	std::string label; ///< e.g. "K=4"; empty for the default
	std::map<MetricScope, MetricReport> metrics;
};

struct ReportLayout {
	std::vector<MetricScope> scopes{MetricScope::FirstHalf, MetricScope::SecondHalf, MetricScope::Daily};
};

struct RenderedReport {
	std::string text;
	std::string csv;
};

/// Values are printed with two decimals; missing cells are "-".
RenderedReport render_report(std::span<const ReportRow> rows, const ReportLayout &layout = {});

} // namespace promptmine
