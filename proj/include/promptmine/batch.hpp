#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "promptmine/forecast.hpp"
#include "promptmine/refine.hpp"
#include "promptmine/segment.hpp"

// Data-parallel kernels over independent records. Each kernel has a serial
// reference with identical output, kept for tests and the benchmark.
namespace promptmine::batch {

std::vector<double> entropy(std::span<const std::string> texts);
std::vector<double> entropy_serial(std::span<const std::string> texts);

std::vector<SegmentPlan> segment_days(std::span<const HourlySeries> days, std::size_t k, SegmentMode mode);
std::vector<SegmentPlan> segment_days_serial(std::span<const HourlySeries> days, std::size_t k, SegmentMode mode);

std::vector<PromptPair> build_variants(std::span<const ForecastWindow> windows, Variant variant,
                                       const RefineConfig &config);
std::vector<PromptPair> build_variants_serial(std::span<const ForecastWindow> windows, Variant variant,
                                              const RefineConfig &config);

std::vector<ForecastOutcome> parse(std::span<const std::string> texts, Variant variant, std::size_t expected_segments);
std::vector<ForecastOutcome> parse_serial(std::span<const std::string> texts, Variant variant,
                                          std::size_t expected_segments);

int max_threads();

} // namespace promptmine::batch
