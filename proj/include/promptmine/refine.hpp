#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "promptmine/segment.hpp"
#include "promptmine/template.hpp"

namespace promptmine {

inline constexpr int kDefaultSplitHour = 12;

struct DiurnalSplit {
	int split_hour = kDefaultSplitHour;
	std::int64_t first_half = 0;
	std::int64_t second_half = 0;
};

/// Clamps the split hour into [open_hour + 1, close_hour - 1].
int clamp_split_hour(const PoiMeta &poi, int split_hour);
DiurnalSplit diurnal_split(const DayRecord &day, int split_hour);

struct CotLine {
	std::vector<std::int64_t> addends;
	std::int64_t total = 0;
	std::string text; ///< "5 + 4 = 9"
};

std::vector<CotLine> synthesize_cot(std::span<const std::vector<std::int64_t>> day_sums);

/// Preamble plus joined lines: two-addend lines are joined by ", ", longer
/// ones by "; ".
std::string cot_paragraph(std::span<const CotLine> lines, std::string_view day_range);

struct CotCheck {
	std::vector<std::int64_t> addends;
	std::int64_t total = 0;
	bool valid = false;
};

/// Every `a + b (+ ...) = t` expression in the text. Throws NoExpressionsFound.
std::vector<CotCheck> verify_cot(std::string_view text);

/// Segmentation used for the V4 prompt; Diurnal forces the V2 split (k = 2).
enum class V4Segmentation { MinimizeGain, MaximizeIg, Diurnal };

V4Segmentation parse_v4_segmentation(std::string_view text);

struct RefineConfig {
	int split_hour = kDefaultSplitHour;
	std::size_t k = 4;
	V4Segmentation mode = V4Segmentation::MinimizeGain;
};

PromptPair build_v1(const ForecastWindow &window);
PromptPair build_v2(const ForecastWindow &window, int split_hour = kDefaultSplitHour);
/// `generated_cot` replaces the synthesised chain of thought only when every
/// expression in it is arithmetically valid and its totals are the true daily
/// totals in order.
PromptPair build_v3(const ForecastWindow &window, int split_hour = kDefaultSplitHour,
                    const std::optional<std::string> &generated_cot = std::nullopt);
PromptPair build_v4(const ForecastWindow &window, std::size_t k, V4Segmentation mode,
                    int split_hour = kDefaultSplitHour);

PromptPair build_variant(const ForecastWindow &window, Variant variant, const RefineConfig &config = {});

/// The future sentence for a variant given its truth values (24 hourly values
/// for V1, segment sums otherwise).
std::string render_future(Variant variant, std::string_view brand, Weekday target_day,
                          std::span<const std::int64_t> values);

} // namespace promptmine
