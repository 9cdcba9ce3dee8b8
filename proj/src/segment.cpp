#include "promptmine/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "promptmine/errors.hpp"
#include "promptmine/text.hpp"

namespace promptmine {

namespace {

// Tolerance on the unnormalised weighted entropy sum when comparing candidates.
constexpr double kTieEps = 1e-9;

bool better(double candidate, double incumbent, SegmentMode mode) {
	// MinimizeGain wants the largest weighted segment entropy, MaximizeIg the smallest.
	return mode == SegmentMode::MinimizeGain ? candidate > incumbent + kTieEps : candidate < incumbent - kTieEps;
}

bool matches(double candidate, double optimum) { return std::abs(candidate - optimum) <= kTieEps; }

void check_k(std::size_t len, std::size_t k) {
	if (len == 0) throw ConfigError("cannot segment an empty series");
	if (k < 1 || k > len) {
		throw ConfigError("k=" + std::to_string(k) + " out of range [1, " + std::to_string(len) + "]");
	}
}

// |span| * H(span)
double weighted_entropy(std::span<const std::int64_t> span) {
	return static_cast<double>(span.size()) * hist_entropy(span);
}

} // namespace

std::string_view segment_mode_name(SegmentMode mode) {
	return mode == SegmentMode::MinimizeGain ? "minimize-eq5" : "maximize-ig";
}

SegmentMode parse_segment_mode(std::string_view text) {
	if (text == "minimize-eq5") return SegmentMode::MinimizeGain;
	if (text == "maximize-ig") return SegmentMode::MaximizeIg;
	throw ConfigError("unknown segmentation mode '" + std::string(text) + "'");
}

double hist_entropy(std::span<const std::int64_t> values) {
	if (values.empty()) return 0.0;
	std::vector<std::int64_t> sorted(values.begin(), values.end());
	std::sort(sorted.begin(), sorted.end());
	std::vector<std::size_t> counts;
	for (std::size_t i = 0; i < sorted.size();) {
		std::size_t j = i;
		while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
		counts.push_back(j - i);
		i = j;
	}
	std::sort(counts.begin(), counts.end());
	const double n = static_cast<double>(sorted.size());
	double h = 0.0;
	for (std::size_t c : counts) {
		const double p = static_cast<double>(c) / n;
		h -= p * std::log2(p);
	}
	return h == 0.0 ? 0.0 : h;
}

SegmentPlan plan_from_cuts(std::span<const std::int64_t> series, std::vector<std::size_t> cuts, SegmentMode mode) {
	const std::size_t len = series.size();
	check_k(len, cuts.size() + 1);
	std::size_t prev = 0;
	for (auto c : cuts) {
		if (c <= prev || c >= len) throw ConfigError("cuts must be strictly increasing inside (0, series length)");
		prev = c;
	}
	SegmentPlan plan;
	plan.series_len = len;
	plan.k = cuts.size() + 1;
	plan.mode = mode;
	plan.series_entropy = hist_entropy(series);
	double weighted = 0.0;
	std::size_t begin = 0;
	for (std::size_t i = 0; i <= cuts.size(); ++i) {
		const std::size_t end = i < cuts.size() ? cuts[i] : len;
		const double h = hist_entropy(series.subspan(begin, end - begin));
		plan.segment_entropies.push_back(h);
		weighted += static_cast<double>(end - begin) / static_cast<double>(len) * h;
		begin = end;
	}
	plan.objective = plan.series_entropy - weighted;
	plan.cuts = std::move(cuts);
	return plan;
}

SegmentPlan segment(std::span<const std::int64_t> series, std::size_t k, SegmentMode mode) {
	const std::size_t len = series.size();
	check_k(len, k);

	// cost[i][j] = (j - i) * H(series[i, j))
	std::vector<std::vector<double>> cost(len + 1, std::vector<double>(len + 1, 0.0));
	for (std::size_t i = 0; i < len; ++i) {
		for (std::size_t j = i + 1; j <= len; ++j) cost[i][j] = weighted_entropy(series.subspan(i, j - i));
	}

	// best[m][i]: optimum for splitting the suffix [i, len) into m segments
	const double worst = mode == SegmentMode::MinimizeGain ? -std::numeric_limits<double>::infinity()
	                                                      : std::numeric_limits<double>::infinity();
	std::vector<std::vector<double>> best(k + 1, std::vector<double>(len + 1, worst));
	for (std::size_t i = 0; i < len; ++i) best[1][i] = cost[i][len];
	for (std::size_t m = 2; m <= k; ++m) {
		for (std::size_t i = 0; i + m <= len; ++i) {
			double b = worst;
			for (std::size_t c = i + 1; c + (m - 1) <= len; ++c) {
				const double v = cost[i][c] + best[m - 1][c];
				if (better(v, b, mode) || b == worst) b = v;
			}
			best[m][i] = b;
		}
	}

	// Walk forward taking the smallest cut that still reaches the optimum.
	std::vector<std::size_t> cuts;
	std::size_t start = 0;
	for (std::size_t m = k; m >= 2; --m) {
		for (std::size_t c = start + 1; c + (m - 1) <= len; ++c) {
			if (matches(cost[start][c] + best[m - 1][c], best[m][start])) {
				cuts.push_back(c);
				start = c;
				break;
			}
		}
	}
	return plan_from_cuts(series, std::move(cuts), mode);
}

SegmentPlan segment_bruteforce(std::span<const std::int64_t> series, std::size_t k, SegmentMode mode) {
	const std::size_t len = series.size();
	check_k(len, k);
	const std::size_t r = k - 1;

	const auto total_of = [&](const std::vector<std::size_t> &cuts) {
		double total = 0.0;
		std::size_t begin = 0;
		for (std::size_t i = 0; i <= cuts.size(); ++i) {
			const std::size_t end = i < cuts.size() ? cuts[i] : len;
			total += weighted_entropy(series.subspan(begin, end - begin));
			begin = end;
		}
		return total;
	};
	// Visits every cut vector in lexicographic order; stops early when fn returns true.
	const auto enumerate = [&](auto &&fn) {
		std::vector<std::size_t> cuts(r);
		for (std::size_t i = 0; i < r; ++i) cuts[i] = i + 1;
		while (true) {
			if (fn(cuts)) return;
			// advance to next combination of r values from [1, len - 1]
			std::size_t i = r;
			while (i > 0 && cuts[i - 1] == len - 1 - (r - i)) --i;
			if (i == 0) return;
			++cuts[i - 1];
			for (std::size_t j = i; j < r; ++j) cuts[j] = cuts[j - 1] + 1;
		}
	};

	bool have = false;
	double optimum = 0.0;
	enumerate([&](const std::vector<std::size_t> &cuts) {
		const double v = total_of(cuts);
		if (!have || better(v, optimum, mode)) optimum = v;
		have = true;
		return false;
	});
	std::vector<std::size_t> chosen;
	enumerate([&](const std::vector<std::size_t> &cuts) {
		if (matches(total_of(cuts), optimum)) {
			chosen = cuts;
			return true;
		}
		return false;
	});
	return plan_from_cuts(series, std::move(chosen), mode);
}

std::vector<std::int64_t> segment_sums(std::span<const std::int64_t> series, std::span<const std::size_t> cuts) {
	std::vector<std::int64_t> sums;
	std::size_t begin = 0;
	for (std::size_t i = 0; i <= cuts.size(); ++i) {
		const std::size_t end = i < cuts.size() ? cuts[i] : series.size();
		if (end < begin || end > series.size()) throw ConfigError("cuts do not fit the series");
		std::int64_t s = 0;
		for (std::size_t j = begin; j < end; ++j) s += series[j];
		sums.push_back(s);
		begin = end;
	}
	return sums;
}

std::string plan_to_json(const SegmentPlan &plan) {
	nlohmann::json j;
	j["cuts"] = plan.cuts;
	j["objective"] = plan.objective;
	j["mode"] = segment_mode_name(plan.mode);
	j["k"] = plan.k;
	return j.dump();
}

} // namespace promptmine
