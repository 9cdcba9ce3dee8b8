#include "promptmine/forecast.hpp"

#include <cmath>
#include <cstdio>
#include <regex>

#include "promptmine/errors.hpp"
#include "promptmine/segment.hpp"
#include "promptmine/text.hpp"

namespace promptmine {

std::string_view parse_status_name(ParseStatus status) {
	switch (status) {
	case ParseStatus::Ok: return "ok";
	case ParseStatus::Fallback: return "fallback";
	case ParseStatus::Inconsistent: return "inconsistent";
	}
	return "?";
}

namespace {

const std::regex &hourly_run() {
	static const std::regex re(R"(((?:\d+[ \t]*,[ \t]*)*\d+)[ \t]+people)");
	return re;
}
const std::regex &first_half() {
	static const std::regex re(R"((\d+) people to visit (?:(?! people to visit ).)*? during the first half of the work shift)");
	return re;
}
const std::regex &latter_half() {
	static const std::regex re(R"((\d+) people to visit (?:(?! people to visit ).)*? during the latter half of the work shift)");
	return re;
}
const std::regex &segment_run() {
	static const std::regex re(
	    R"(there will be ((?:\d+[ \t]*,[ \t]*)*\d+) people to visit .*? during these (\d+) different time segments)");
	return re;
}
const std::regex &stated_total() {
	static const std::regex re(R"(Therefore, there are (\d+) people)");
	return re;
}

std::int64_t sum_of(std::span<const std::int64_t> v) {
	std::int64_t s = 0;
	for (auto x : v) s += x;
	return s;
}

ForecastOutcome fallback(ForecastOutcome out, std::string note) {
	out.status = ParseStatus::Fallback;
	out.parsed_values.clear();
	out.stated_total.reset();
	out.effective_total = 0;
	out.notes = std::move(note);
	return out;
}

} // namespace

ForecastOutcome parse_forecast(std::string_view input, Variant variant, std::size_t expected) {
	ForecastOutcome out;
	out.variant = variant;
	const std::string s(input);
	std::smatch m;

	switch (variant) {
	case Variant::Init:
	case Variant::V1: {
		if (!std::regex_search(s, m, hourly_run())) return fallback(std::move(out), "no hourly list found");
		out.parsed_values = text::digit_runs(m[1].str());
		if (out.parsed_values.size() != expected) {
			return fallback(std::move(out), "expected " + std::to_string(expected) + " hourly values, found " +
			                                    std::to_string(out.parsed_values.size()));
		}
		break;
	}
	case Variant::V2:
	case Variant::V3: {
		std::smatch second;
		if (!std::regex_search(s, m, first_half()) || !std::regex_search(s, second, latter_half())) {
			return fallback(std::move(out), "half-shift value missing");
		}
		out.parsed_values = {text::digit_runs(m[1].str()).front(), text::digit_runs(second[1].str()).front()};
		if (expected != 2) return fallback(std::move(out), "V2/V3 sentences carry exactly two segments");
		break;
	}
	case Variant::V4: {
		if (!std::regex_search(s, m, segment_run())) return fallback(std::move(out), "segment list missing");
		out.parsed_values = text::digit_runs(m[1].str());
		const auto stated_k = static_cast<std::size_t>(text::digit_runs(m[2].str()).front());
		if (out.parsed_values.size() != expected || stated_k != expected) {
			return fallback(std::move(out), "expected " + std::to_string(expected) + " segment values, found " +
			                                    std::to_string(out.parsed_values.size()));
		}
		break;
	}
	}

	if (variant != Variant::V1 && variant != Variant::Init) {
		std::smatch total;
		if (!std::regex_search(s, total, stated_total())) return fallback(std::move(out), "stated total missing");
		out.stated_total = text::digit_runs(total[1].str()).front();
	}
	out.effective_total = sum_of(out.parsed_values);
	out.status = ParseStatus::Ok;
	if (out.stated_total && *out.stated_total != out.effective_total) {
		out.status = ParseStatus::Inconsistent;
		out.notes = "segments sum to " + std::to_string(out.effective_total) + " but total states " +
		            std::to_string(*out.stated_total) + "; using segment sum";
	}
	return out;
}

namespace {

std::int64_t rounded_mean(std::int64_t sum, std::int64_t count) {
	return count > 0 ? static_cast<std::int64_t>(std::llround(static_cast<double>(sum) / static_cast<double>(count))) : 0;
}

} // namespace

ForecastTruth make_truth(const PromptPair &pair) {
	ForecastTruth t;
	t.window = key_of(pair.window);
	t.variant = pair.variant;
	t.cuts = pair.target_cuts;
	t.daily_total = pair.window.target.daily_total;
	const std::vector<std::size_t> cuts(pair.target_cuts.begin(), pair.target_cuts.end());
	const std::vector<std::int64_t> target(pair.window.target.hourly_visits.begin(),
	                                       pair.window.target.hourly_visits.end());
	t.segments = segment_sums(target, cuts);

	std::vector<std::int64_t> seg_sum(t.segments.size(), 0);
	std::int64_t total_sum = 0;
	for (const auto &day : pair.window.history) {
		const std::vector<std::int64_t> series(day.hourly_visits.begin(), day.hourly_visits.end());
		const auto sums = segment_sums(series, cuts);
		for (std::size_t i = 0; i < sums.size(); ++i) seg_sum[i] += sums[i];
		total_sum += day.daily_total;
	}
	const auto n = static_cast<std::int64_t>(pair.window.history.size());
	for (auto s : seg_sum) t.fallback_segments.push_back(rounded_mean(s, n));
	t.fallback_total = rounded_mean(total_sum, n);
	return t;
}

std::string_view metric_scope_name(MetricScope scope) {
	switch (scope) {
	case MetricScope::SegmentAverage: return "segment-average";
	case MetricScope::FirstHalf: return "first-half";
	case MetricScope::SecondHalf: return "second-half";
	case MetricScope::Daily: return "daily";
	}
	return "?";
}

MetricScope parse_metric_scope(std::string_view text) {
	for (auto s : {MetricScope::SegmentAverage, MetricScope::FirstHalf, MetricScope::SecondHalf, MetricScope::Daily}) {
		if (text == metric_scope_name(s)) return s;
	}
	throw ConfigError("unknown metric scope '" + std::string(text) + "'");
}

std::vector<std::int64_t> predicted_segments(const ForecastOutcome &outcome, const ForecastTruth &truth) {
	if (outcome.status == ParseStatus::Fallback) return truth.fallback_segments;
	if (outcome.variant == Variant::V1 || outcome.variant == Variant::Init) {
		const std::vector<std::size_t> cuts(truth.cuts.begin(), truth.cuts.end());
		return segment_sums(outcome.parsed_values, cuts);
	}
	return outcome.parsed_values;
}

std::int64_t predicted_total(const ForecastOutcome &outcome, const ForecastTruth &truth) {
	return outcome.status == ParseStatus::Fallback ? truth.fallback_total : outcome.effective_total;
}

namespace {

// Neumaier compensated sum.
class Accumulator {
public:
	void add(double x) {
		const double t = sum_ + x;
		if (std::abs(sum_) >= std::abs(x)) {
			comp_ += (sum_ - t) + x;
		} else {
			comp_ += (x - t) + sum_;
		}
		sum_ = t;
		++n_;
	}
	double mean() const { return n_ ? (sum_ + comp_) / static_cast<double>(n_) : 0.0; }

private:
	double sum_ = 0.0;
	double comp_ = 0.0;
	std::size_t n_ = 0;
};

struct ErrorStats {
	Accumulator sq, abs;
	void add(double err) {
		sq.add(err * err);
		abs.add(std::abs(err));
	}
	double rmse() const { return std::sqrt(sq.mean()); }
	double mae() const { return abs.mean(); }
};

} // namespace

MetricReport compute_metrics(std::span<const ForecastOutcome> outcomes, std::span<const ForecastTruth> truths,
                             MetricScope scope) {
	if (outcomes.size() != truths.size()) {
		throw AlignmentError("outcome and truth counts differ: " + std::to_string(outcomes.size()) + " vs " +
		                     std::to_string(truths.size()));
	}
	MetricReport report;
	report.scope = scope;
	report.n_samples = outcomes.size();
	std::size_t failures = 0;
	ErrorStats overall;
	std::vector<ErrorStats> per_segment;

	for (std::size_t i = 0; i < outcomes.size(); ++i) {
		const auto &o = outcomes[i];
		const auto &t = truths[i];
		if (o.window != t.window) {
			throw AlignmentError("sample " + std::to_string(i) + ": outcome for " + o.window.poi_id + "/" +
			                     format_date(o.window.target_date) + " paired with truth for " + t.window.poi_id +
			                     "/" + format_date(t.window.target_date));
		}
		if (o.status == ParseStatus::Fallback) ++failures;
		if (scope == MetricScope::Daily) {
			overall.add(static_cast<double>(predicted_total(o, t) - t.daily_total));
			continue;
		}
		const auto pred = predicted_segments(o, t);
		if (pred.size() != t.segments.size()) {
			throw AlignmentError("sample " + std::to_string(i) + ": predicted " + std::to_string(pred.size()) +
			                     " segments, truth has " + std::to_string(t.segments.size()));
		}
		if (scope == MetricScope::FirstHalf || scope == MetricScope::SecondHalf) {
			if (t.segments.size() != 2) {
				throw AlignmentError("half scopes need exactly two segments, sample " + std::to_string(i) + " has " +
				                     std::to_string(t.segments.size()));
			}
			const std::size_t idx = scope == MetricScope::FirstHalf ? 0 : 1;
			overall.add(static_cast<double>(pred[idx] - t.segments[idx]));
		} else {
			if (per_segment.size() < pred.size()) per_segment.resize(pred.size());
			for (std::size_t s = 0; s < pred.size(); ++s) per_segment[s].add(static_cast<double>(pred[s] - t.segments[s]));
		}
	}

	if (scope == MetricScope::SegmentAverage) {
		Accumulator rmse, mae;
		for (const auto &s : per_segment) {
			rmse.add(s.rmse());
			mae.add(s.mae());
		}
		report.rmse = rmse.mean();
		report.mae = mae.mean();
	} else {
		report.rmse = overall.rmse();
		report.mae = overall.mae();
	}
	report.parse_failure_rate =
	    outcomes.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(outcomes.size());
	return report;
}

namespace {

std::string_view scope_title(MetricScope s) {
	switch (s) {
	case MetricScope::SegmentAverage: return "Segment Average";
	case MetricScope::FirstHalf: return "1st Half";
	case MetricScope::SecondHalf: return "2nd Half";
	case MetricScope::Daily: return "Daily Forecast";
	}
	return "?";
}

std::string fixed(double v, int digits) {
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.*f", digits, v);
	return buf;
}

std::string prompt_cell(const ReportRow &row) {
	std::string p = text::lower(variant_name(row.variant));
	for (auto &c : p) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
	if (!row.label.empty()) p += " (" + row.label + ")";
	return p;
}

} // namespace

RenderedReport render_report(std::span<const ReportRow> rows, const ReportLayout &layout) {
	RenderedReport out;
	out.text = "| Model | Prompt |";
	out.csv = "model,prompt,label";
	for (auto s : layout.scopes) {
		out.text += " " + std::string(scope_title(s)) + " RMSE | " + std::string(scope_title(s)) + " MAE |";
		const std::string key(metric_scope_name(s));
		out.csv += "," + key + "_rmse," + key + "_mae";
	}
	out.csv += ",n_samples,parse_failure_rate\n";
	out.text += "\n|---|---|";
	for (std::size_t i = 0; i < layout.scopes.size(); ++i) out.text += "---|---|";
	out.text += "\n";

	for (const auto &row : rows) {
		out.text += "| " + row.model + " | " + prompt_cell(row) + " |";
		out.csv += row.model + "," + std::string(variant_name(row.variant)) + "," + row.label;
		std::size_t n = 0;
		double failure = 0.0;
		for (auto s : layout.scopes) {
			const auto it = row.metrics.find(s);
			if (it == row.metrics.end()) {
				out.text += " - | - |";
				out.csv += ",,";
				continue;
			}
			out.text += " " + fixed(it->second.rmse, 2) + " | " + fixed(it->second.mae, 2) + " |";
			out.csv += "," + fixed(it->second.rmse, 6) + "," + fixed(it->second.mae, 6);
			n = it->second.n_samples;
			failure = it->second.parse_failure_rate;
		}
		out.text += "\n";
		out.csv += "," + std::to_string(n) + "," + fixed(failure, 6) + "\n";
	}
	return out;
}

} // namespace promptmine
