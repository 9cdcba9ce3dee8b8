#include "promptmine/batch.hpp"

#include <exception>

#include <omp.h>

#include "promptmine/quality.hpp"

namespace promptmine::batch {

namespace {

// Runs body(i) for i in [0, n) across threads; the first exception thrown by
// any iteration is rethrown once the loop has finished.
template <typename Body>
void parallel_for(std::size_t n, Body &&body) {
	std::exception_ptr error;
	const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
	for (std::int64_t i = 0; i < count; ++i) {
		try {
			body(static_cast<std::size_t>(i));
		} catch (...) {
#pragma omp critical(promptmine_batch_error)
			if (!error) error = std::current_exception();
		}
	}
	if (error) std::rethrow_exception(error);
}

std::vector<std::int64_t> as_vector(const HourlySeries &s) { return {s.begin(), s.end()}; }

} // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<double> entropy(std::span<const std::string> texts) {
	std::vector<double> out(texts.size());
	parallel_for(texts.size(), [&](std::size_t i) { out[i] = char_entropy_bits(texts[i]); });
	return out;
}

std::vector<double> entropy_serial(std::span<const std::string> texts) {
	std::vector<double> out;
	out.reserve(texts.size());
	for (const auto &t : texts) out.push_back(char_entropy_bits(t));
	return out;
}

std::vector<SegmentPlan> segment_days(std::span<const HourlySeries> days, std::size_t k, SegmentMode mode) {
	std::vector<SegmentPlan> out(days.size());
	parallel_for(days.size(), [&](std::size_t i) { out[i] = segment(as_vector(days[i]), k, mode); });
	return out;
}

std::vector<SegmentPlan> segment_days_serial(std::span<const HourlySeries> days, std::size_t k, SegmentMode mode) {
	std::vector<SegmentPlan> out;
	out.reserve(days.size());
	for (const auto &d : days) out.push_back(segment(as_vector(d), k, mode));
	return out;
}

std::vector<PromptPair> build_variants(std::span<const ForecastWindow> windows, Variant variant,
                                       const RefineConfig &config) {
	std::vector<PromptPair> out(windows.size());
	parallel_for(windows.size(), [&](std::size_t i) { out[i] = build_variant(windows[i], variant, config); });
	return out;
}

std::vector<PromptPair> build_variants_serial(std::span<const ForecastWindow> windows, Variant variant,
                                              const RefineConfig &config) {
	std::vector<PromptPair> out;
	out.reserve(windows.size());
	for (const auto &w : windows) out.push_back(build_variant(w, variant, config));
	return out;
}

std::vector<ForecastOutcome> parse(std::span<const std::string> texts, Variant variant, std::size_t expected_segments) {
	std::vector<ForecastOutcome> out(texts.size());
	parallel_for(texts.size(), [&](std::size_t i) { out[i] = parse_forecast(texts[i], variant, expected_segments); });
	return out;
}

std::vector<ForecastOutcome> parse_serial(std::span<const std::string> texts, Variant variant,
                                          std::size_t expected_segments) {
	std::vector<ForecastOutcome> out;
	out.reserve(texts.size());
	for (const auto &t : texts) out.push_back(parse_forecast(t, variant, expected_segments));
	return out;
}

} // namespace promptmine::batch
