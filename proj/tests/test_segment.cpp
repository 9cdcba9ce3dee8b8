#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "promptmine/errors.hpp"
#include "promptmine/segment.hpp"

using namespace promptmine;

namespace {

using Series = std::vector<std::int64_t>;

// Direct enumeration of every cut vector, written without the library's helpers.
struct Best {
	std::vector<std::size_t> cuts;
	double weighted = 0.0;
};

double entropy_of(const Series &s, std::size_t b, std::size_t e) {
	std::map<std::int64_t, int> counts;
	for (std::size_t i = b; i < e; ++i) counts[s[i]]++;
	double h = 0.0;
	for (const auto &[v, c] : counts) {
		const double p = static_cast<double>(c) / static_cast<double>(e - b);
		h -= p * std::log2(p);
	}
	return h;
}

Best oracle(const Series &s, std::size_t k, bool maximize_weighted) {
	Best best;
	bool have = false;
	std::vector<std::size_t> cuts;
	const auto rec = [&](auto &&self, std::size_t start) -> void {
		if (cuts.size() == k - 1) {
			double w = 0.0;
			std::size_t b = 0;
			for (std::size_t i = 0; i <= cuts.size(); ++i) {
				const std::size_t e = i < cuts.size() ? cuts[i] : s.size();
				w += static_cast<double>(e - b) * entropy_of(s, b, e);
				b = e;
			}
			w /= static_cast<double>(s.size());
			const bool better = maximize_weighted ? w > best.weighted + 1e-9 : w < best.weighted - 1e-9;
			if (!have || better) {
				best = {cuts, w};
				have = true;
			}
			return;
		}
		for (std::size_t c = start; c < s.size(); ++c) {
			cuts.push_back(c);
			self(self, c + 1);
			cuts.pop_back();
		}
	};
	rec(rec, 1);
	return best;
}

} // namespace

TEST_CASE("histogram entropy") {
	CHECK(hist_entropy(Series{4, 4, 4}) == 0.0);
	CHECK(hist_entropy(Series{0, 9}) == 1.0);
	CHECK(hist_entropy(Series{0, 9, 9}) == doctest::Approx(0.9182958340544896).epsilon(1e-12));
}

TEST_CASE("worked segmentations") {
	for (auto mode : {SegmentMode::MinimizeGain, SegmentMode::MaximizeIg}) {
		const auto plan = segment(Series{4, 4, 4, 4}, 2, mode);
		CHECK(plan.cuts == std::vector<std::size_t>{1});
	}
	const auto ig = segment(Series{0, 0, 9, 9}, 2, SegmentMode::MaximizeIg);
	CHECK(ig.cuts == std::vector<std::size_t>{2});
	CHECK(ig.objective == doctest::Approx(1.0).epsilon(1e-12));
	const auto minimal = segment(Series{0, 0, 9, 9}, 2, SegmentMode::MinimizeGain);
	CHECK(minimal.cuts == std::vector<std::size_t>{1});
	// cuts (1) and (3) tie at a weighted entropy of 3/4 * H(0,9,9)
	CHECK(1.0 - minimal.objective == doctest::Approx(0.75 * 0.9182958340544896).epsilon(1e-12));

	const auto forced = segment_bruteforce(Series{1, 2, 3}, 3, SegmentMode::MinimizeGain);
	CHECK(forced.cuts == std::vector<std::size_t>{1, 2});
	for (double h : forced.segment_entropies) CHECK(h == 0.0);
}

TEST_CASE("dynamic programme agrees with exhaustive search") {
	std::mt19937_64 rng(11);
	for (int trial = 0; trial < 300; ++trial) {
		const std::size_t len = 1 + rng() % 12;
		Series s(len);
		for (auto &v : s) v = static_cast<std::int64_t>(rng() % 4);
		const std::size_t k = 1 + rng() % std::min<std::size_t>(4, len);
		for (auto mode : {SegmentMode::MinimizeGain, SegmentMode::MaximizeIg}) {
			const auto dp = segment(s, k, mode);
			const auto bf = segment_bruteforce(s, k, mode);
			CHECK(dp.cuts == bf.cuts);
			CHECK(std::abs(dp.objective - bf.objective) <= 1e-12);
			const auto expect = oracle(s, k, mode == SegmentMode::MinimizeGain);
			CHECK(dp.cuts == expect.cuts);
			CHECK(dp.objective == doctest::Approx(entropy_of(s, 0, s.size()) - expect.weighted).epsilon(1e-12));
		}
	}
}

TEST_CASE("plans on a full day conserve the total") {
	const Series mon(fixtures::kMon.begin(), fixtures::kMon.end());
	for (std::size_t k = 1; k <= 6; ++k) {
		const auto plan = segment(mon, k, SegmentMode::MinimizeGain);
		CHECK(plan.cuts.size() == k - 1);
		const auto sums = segment_sums(mon, plan);
		CHECK(sums.size() == k);
		CHECK(std::accumulate(sums.begin(), sums.end(), std::int64_t{0}) == 9);
	}
	CHECK(segment_sums(Series(24, 0), std::vector<std::size_t>{6, 12, 18}) == Series{0, 0, 0, 0});
	CHECK(segment_sums(Series{3, 1, 4}, std::vector<std::size_t>{1, 2}) == Series{3, 1, 4});
}

TEST_CASE("invalid arguments") {
	CHECK_THROWS_AS(segment(Series{1, 2}, 0, SegmentMode::MinimizeGain), ConfigError);
	CHECK_THROWS_AS(segment(Series{1, 2}, 3, SegmentMode::MinimizeGain), ConfigError);
	CHECK_THROWS_AS(segment(Series{}, 1, SegmentMode::MinimizeGain), ConfigError);
	CHECK_THROWS_AS(plan_from_cuts(Series{1, 2, 3}, {2, 1}, SegmentMode::MinimizeGain), ConfigError);
	CHECK_THROWS_AS(plan_from_cuts(Series{1, 2, 3}, {0}, SegmentMode::MinimizeGain), ConfigError);
	CHECK(parse_segment_mode("maximize-ig") == SegmentMode::MaximizeIg);
	CHECK_THROWS_AS(parse_segment_mode("sideways"), ConfigError);
}
