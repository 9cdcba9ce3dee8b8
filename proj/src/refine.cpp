#include "promptmine/refine.hpp"

#include <algorithm>
#include <regex>

#include "promptmine/errors.hpp"
#include "promptmine/text.hpp"

namespace promptmine {

namespace {

constexpr std::string_view kQuestion = "How many people will visit this place tomorrow?";

std::string intro(const ForecastWindow &w) { return "This is a " + w.poi.brand + " in " + w.poi.region + ". "; }

std::string past_days(const ForecastWindow &w) {
	return "The human mobility of the past " + std::to_string(w.history.size()) + " days are: ";
}

std::vector<std::int64_t> as_vector(const HourlySeries &s) { return {s.begin(), s.end()}; }

std::vector<std::int64_t> day_totals(const ForecastWindow &w) {
	std::vector<std::int64_t> totals;
	for (const auto &d : w.history) totals.push_back(d.daily_total);
	return totals;
}

void check_history(const ForecastWindow &w) {
	if (w.history.empty()) throw ConfigError("window has no history days");
}

} // namespace

int clamp_split_hour(const PoiMeta &poi, int split_hour) {
	const int lo = poi.open_hour + 1;
	const int hi = poi.close_hour - 1;
	if (lo > hi) return lo;
	return std::clamp(split_hour, lo, hi);
}

DiurnalSplit diurnal_split(const DayRecord &day, int split_hour) {
	DiurnalSplit s;
	s.split_hour = std::clamp(split_hour, 0, kHoursPerDay);
	for (int h = 0; h < kHoursPerDay; ++h) (h < s.split_hour ? s.first_half : s.second_half) += day.hourly_visits[h];
	return s;
}

std::vector<CotLine> synthesize_cot(std::span<const std::vector<std::int64_t>> day_sums) {
	std::vector<CotLine> lines;
	lines.reserve(day_sums.size());
	for (const auto &addends : day_sums) {
		if (addends.empty()) throw ConfigError("chain-of-thought line needs at least one addend");
		CotLine line;
		line.addends = addends;
		for (auto a : addends) line.total += a;
		line.text = text::join<std::int64_t>(addends, " + ") + " = " + std::to_string(line.total);
		lines.push_back(std::move(line));
	}
	return lines;
}

std::string cot_paragraph(std::span<const CotLine> lines, std::string_view range) {
	const bool halves =
	    std::all_of(lines.begin(), lines.end(), [](const CotLine &l) { return l.addends.size() == 2; });
	std::string out = halves ? "The entire working time is composed of the first half and the second half. "
	                         : "The entire working time is composed of the whole time segments. ";
	out += "Therefore, from " + std::string(range) + ", the total human mobility are ";
	const std::string_view sep = halves ? ", " : "; ";
	for (std::size_t i = 0; i < lines.size(); ++i) {
		if (i) out += sep;
		out += lines[i].text;
	}
	return out + ".";
}

std::vector<CotCheck> verify_cot(std::string_view input) {
	static const std::regex expr(R"((\d+(?:[ \t]*\+[ \t]*\d+)*)[ \t]*=[ \t]*(\d+))");
	const std::string s(input);
	std::vector<CotCheck> checks;
	for (auto it = std::sregex_iterator(s.begin(), s.end(), expr); it != std::sregex_iterator(); ++it) {
		CotCheck c;
		c.addends = text::digit_runs((*it)[1].str());
		c.total = text::digit_runs((*it)[2].str()).front();
		std::int64_t sum = 0;
		for (auto a : c.addends) sum += a;
		c.valid = sum == c.total;
		checks.push_back(std::move(c));
	}
	if (checks.empty()) throw NoExpressionsFound("no arithmetic expressions in text");
	return checks;
}

V4Segmentation parse_v4_segmentation(std::string_view t) {
	if (t == "minimize-eq5") return V4Segmentation::MinimizeGain;
	if (t == "maximize-ig") return V4Segmentation::MaximizeIg;
	if (t == "diurnal") return V4Segmentation::Diurnal;
	throw ConfigError("unknown segmentation mode '" + std::string(t) + "'");
}

std::string render_future(Variant variant, std::string_view brand, Weekday target_day,
                          std::span<const std::int64_t> values) {
	const std::string day(weekday_name(target_day));
	const std::string b(brand);
	std::int64_t total = 0;
	for (auto v : values) total += v;
	switch (variant) {
	case Variant::Init:
	case Variant::V1:
		return "On " + day + ", there are " + text::join(values, ", ") + " people who will visit " + b +
		       " during working time.";
	case Variant::V2:
	case Variant::V3:
		if (values.size() != 2) throw ConfigError("V2/V3 future needs exactly two values");
		return "On " + day + ", there will be " + std::to_string(values[0]) + " people to visit " + b +
		       " during the first half of the work shift and " + std::to_string(values[1]) + " people to visit " + b +
		       " during the latter half of the work shift. Therefore, there are " + std::to_string(total) +
		       " people will visit here.";
	case Variant::V4:
		return "On " + day + ", there will be " + text::join(values, ", ") + " people to visit " + b + " during these " +
		       std::to_string(values.size()) + " different time segments. Therefore, there are " +
		       std::to_string(total) + " people will visit " + b + " on " + day + ".";
	}
	return {};
}

namespace {

PromptPair pair_for(const ForecastWindow &w, Variant v) {
	PromptPair p;
	p.variant = v;
	p.window = w;
	return p;
}

} // namespace

PromptPair build_v1(const ForecastWindow &w) {
	check_history(w);
	PromptPair p = pair_for(w, Variant::V1);
	p.history_text = intro(w) + past_days(w);
	const std::string hours =
	    " people (per hour) came here from " + text::hour_label(w.poi.open_hour) + " to " +
	    text::hour_label(w.poi.close_hour) + " (working time) on ";
	for (const auto &d : w.history) {
		p.history_text += text::join<std::int64_t>(d.hourly_visits, ", ") + hours + std::string(weekday_name(d.weekday)) + ". ";
	}
	p.history_text += kQuestion;
	p.future_values = as_vector(w.target.hourly_visits);
	p.future_total = w.target.daily_total;
	p.split_hour = clamp_split_hour(w.poi, kDefaultSplitHour);
	p.target_cuts = {p.split_hour};
	p.future_text = render_future(Variant::V1, w.poi.brand, w.target.weekday, p.future_values);
	return p;
}

PromptPair build_v2(const ForecastWindow &w, int split_hour) {
	check_history(w);
	PromptPair p = pair_for(w, Variant::V2);
	p.split_hour = clamp_split_hour(w.poi, split_hour);
	p.history_text = intro(w) + past_days(w);
	for (const auto &d : w.history) {
		const auto s = diurnal_split(d, p.split_hour);
		p.history_text += std::to_string(s.first_half) +
		                  " people came here during the first half of the work shift and " +
		                  std::to_string(s.second_half) +
		                  " people came here during the latter half of the work shift on " +
		                  std::string(weekday_name(d.weekday)) + ". ";
	}
	p.history_text += kQuestion;
	const auto t = diurnal_split(w.target, p.split_hour);
	p.future_values = {t.first_half, t.second_half};
	p.future_total = w.target.daily_total;
	p.target_cuts = {p.split_hour};
	p.future_text = render_future(Variant::V2, w.poi.brand, w.target.weekday, p.future_values);
	return p;
}

PromptPair build_v3(const ForecastWindow &w, int split_hour, const std::optional<std::string> &generated_cot) {
	PromptPair p = build_v2(w, split_hour);
	p.variant = Variant::V3;
	std::vector<std::vector<std::int64_t>> sums;
	std::vector<std::int64_t> flat;
	for (const auto &d : w.history) {
		const auto s = diurnal_split(d, p.split_hour);
		sums.push_back({s.first_half, s.second_half});
		flat.push_back(s.first_half);
		flat.push_back(s.second_half);
	}
	const auto range = day_range(w);
	std::string cot = cot_paragraph(synthesize_cot(sums), range);
	if (generated_cot) {
		try {
			const auto checks = verify_cot(*generated_cot);
			const auto totals = day_totals(w);
			const bool ok = checks.size() == totals.size() &&
			                std::all_of(checks.begin(), checks.end(), [](const CotCheck &c) { return c.valid; }) &&
			                std::equal(checks.begin(), checks.end(), totals.begin(),
			                           [](const CotCheck &c, std::int64_t t) { return c.total == t; });
			if (ok) cot = *generated_cot;
		} catch (const NoExpressionsFound &) {
		}
	}
	p.history_text = intro(w) + "From " + range +
	                 ", the human mobility during the first and second half working time are " +
	                 text::join<std::int64_t>(flat, ", ") + ". " + cot + " " + std::string(kQuestion);
	// future sentence is carried over from V2 unchanged
	return p;
}

PromptPair build_v4(const ForecastWindow &w, std::size_t k, V4Segmentation mode, int split_hour) {
	check_history(w);
	if (k < 2 || k > static_cast<std::size_t>(kHoursPerDay)) {
		throw ConfigError("V4 needs 2 <= k <= 24, got " + std::to_string(k));
	}
	if (mode == V4Segmentation::Diurnal && k != 2) throw ConfigError("diurnal V4 segmentation requires k = 2");
	PromptPair p = pair_for(w, Variant::V4);
	p.split_hour = clamp_split_hour(w.poi, split_hour);

	const auto cuts_for = [&](std::span<const std::int64_t> series) -> std::vector<std::size_t> {
		if (mode == V4Segmentation::Diurnal) return {static_cast<std::size_t>(p.split_hour)};
		const auto m = mode == V4Segmentation::MaximizeIg ? SegmentMode::MaximizeIg : SegmentMode::MinimizeGain;
		return segment(series, k, m).cuts;
	};

	std::vector<std::vector<std::int64_t>> sums;
	std::string lists;
	for (std::size_t i = 0; i < w.history.size(); ++i) {
		const auto series = as_vector(w.history[i].hourly_visits);
		sums.push_back(segment_sums(series, cuts_for(series)));
		if (i) lists += "; ";
		lists += text::join<std::int64_t>(sums.back(), ", ");
	}
	// The target's segments come from the plan fitted on the summed history;
	// summing rather than averaging keeps values integral and leaves the
	// distinct-value histogram shape unchanged.
	std::vector<std::int64_t> pooled(kHoursPerDay, 0);
	for (const auto &d : w.history) {
		for (int h = 0; h < kHoursPerDay; ++h) pooled[h] += d.hourly_visits[h];
	}
	const auto target_cuts = cuts_for(pooled);
	const auto range = day_range(w);
	p.history_text = intro(w) + "From " + range + ", the human mobility during the " + std::to_string(k) +
	                 " different time segments are " + lists + ". " + cot_paragraph(synthesize_cot(sums), range) + " " +
	                 std::string(kQuestion);
	p.target_cuts.assign(target_cuts.begin(), target_cuts.end());
	p.future_values = segment_sums(as_vector(w.target.hourly_visits), target_cuts);
	p.future_total = w.target.daily_total;
	p.future_text = render_future(Variant::V4, w.poi.brand, w.target.weekday, p.future_values);
	return p;
}

PromptPair build_variant(const ForecastWindow &window, Variant variant, const RefineConfig &config) {
	switch (variant) {
	case Variant::Init: return render_initial(window);
	case Variant::V1: return build_v1(window);
	case Variant::V2: return build_v2(window, config.split_hour);
	case Variant::V3: return build_v3(window, config.split_hour);
	case Variant::V4: return build_v4(window, config.k, config.mode, config.split_hour);
	}
	throw ConfigError("unknown variant");
}

} // namespace promptmine
