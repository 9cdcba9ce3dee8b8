#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace promptmine {

enum class SegmentMode {
	MinimizeGain, ///< minimise H(S) - sum |s_k|/|S| H(s_k)
	MaximizeIg,  ///< maximise the same expression (classic information gain)
};

std::string_view segment_mode_name(SegmentMode mode);
SegmentMode parse_segment_mode(std::string_view text);

struct SegmentPlan {
	std::size_t series_len = 0;
	std::size_t k = 0;
	/// Ascending K-1 cut indices; segment i spans [cuts[i-1], cuts[i]).
	std::vector<std::size_t> cuts;
	double objective = 0.0;
	double series_entropy = 0.0;
	std::vector<double> segment_entropies;
	SegmentMode mode = SegmentMode::MinimizeGain;
};

/// Entropy (bits) of the empirical distribution over distinct values.
double hist_entropy(std::span<const std::int64_t> values);

/// Exact optimum by dynamic programming over segment ends. Ties (within 1e-9
/// on the weighted entropy sum) resolve to the lexicographically smallest cuts.
/// Throws ConfigError unless 1 <= k <= series length.
SegmentPlan segment(std::span<const std::int64_t> series, std::size_t k, SegmentMode mode);

/// Enumerates every cut vector; same objective and tie-break as segment().
SegmentPlan segment_bruteforce(std::span<const std::int64_t> series, std::size_t k, SegmentMode mode);

/// Builds a plan (entropies and objective) for given cuts. Throws ConfigError on
/// cuts that are not strictly increasing inside (0, len).
SegmentPlan plan_from_cuts(std::span<const std::int64_t> series, std::vector<std::size_t> cuts, SegmentMode mode);

std::vector<std::int64_t> segment_sums(std::span<const std::int64_t> series, std::span<const std::size_t> cuts);
inline std::vector<std::int64_t> segment_sums(std::span<const std::int64_t> series, const SegmentPlan &plan) {
	return segment_sums(series, plan.cuts);
}

std::string plan_to_json(const SegmentPlan &plan);

} // namespace promptmine
