#include "promptmine/template.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "promptmine/errors.hpp"
#include "promptmine/random.hpp"
#include "promptmine/refine.hpp"
#include "promptmine/text.hpp"

namespace promptmine {

std::string_view quality_name(TemplateQuality q) {
	switch (q) {
	case TemplateQuality::Simple: return "simple";
	case TemplateQuality::Complex: return "complex";
	case TemplateQuality::Initial: return "initial";
	}
	return "?";
}

namespace {

constexpr std::string_view kRepeatOpen = "[[repeat]]";
constexpr std::string_view kRepeatClose = "[[/repeat]]";

bool is_placeholder(char c) {
	return c == 'a' || c == 'c' || c == 'n' || c == 'x' || c == 'o' || c == 'e' || c == 't';
}

void write_source(const std::vector<TemplateToken> &tokens, std::string &out) {
	for (const auto &tok : tokens) {
		if (const auto *lit = std::get_if<std::string>(&tok)) {
			out += *lit;
		} else if (const auto *ph = std::get_if<Placeholder>(&tok)) {
			out += '{';
			out += static_cast<char>(*ph);
			out += '}';
		} else {
			out += kRepeatOpen;
			write_source(std::get<RepeatBlock>(tok).body, out);
			out += kRepeatClose;
		}
	}
}

bool tokens_use(const std::vector<TemplateToken> &tokens, Placeholder p) {
	return std::any_of(tokens.begin(), tokens.end(), [p](const TemplateToken &tok) {
		if (const auto *ph = std::get_if<Placeholder>(&tok)) return *ph == p;
		if (const auto *block = std::get_if<RepeatBlock>(&tok)) return tokens_use(block->body, p);
		return false;
	});
}

} // namespace

std::string PromptTemplate::source() const {
	std::string out;
	write_source(body, out);
	return out;
}

bool PromptTemplate::uses(Placeholder p) const { return tokens_use(body, p); }

PromptTemplate parse_template(std::string_view src, std::string id, TemplateQuality quality) {
	PromptTemplate tmpl;
	tmpl.id = std::move(id);
	tmpl.quality = quality;

	std::vector<TemplateToken> *target = &tmpl.body;
	std::optional<RepeatBlock> open_block;
	std::string literal;
	const auto flush = [&] {
		if (!literal.empty()) {
			target->emplace_back(std::move(literal));
			literal.clear();
		}
	};

	std::size_t i = 0;
	while (i < src.size()) {
		if (src.substr(i).starts_with(kRepeatOpen)) {
			if (open_block) throw TemplateSyntaxError("nested repeat block at offset " + std::to_string(i));
			flush();
			open_block.emplace();
			target = &open_block->body;
			i += kRepeatOpen.size();
		} else if (src.substr(i).starts_with(kRepeatClose)) {
			if (!open_block) throw TemplateSyntaxError("repeat block closed without opening at offset " + std::to_string(i));
			flush();
			const bool has_body = tokens_use(open_block->body, Placeholder::Visits) ||
			                      tokens_use(open_block->body, Placeholder::Weekday);
			if (!has_body) throw TemplateSyntaxError("repeat block needs {x} or {t} in its body");
			target = &tmpl.body;
			tmpl.body.emplace_back(std::move(*open_block));
			open_block.reset();
			i += kRepeatClose.size();
		} else if (src[i] == '{') {
			const auto close = src.find('}', i);
			if (close == std::string_view::npos) throw TemplateSyntaxError("unclosed brace at offset " + std::to_string(i));
			const auto name = src.substr(i + 1, close - i - 1);
			if (name.size() != 1 || !is_placeholder(name[0])) {
				throw TemplateSyntaxError("unknown placeholder {" + std::string(name) + "}");
			}
			flush();
			target->emplace_back(static_cast<Placeholder>(name[0]));
			i = close + 1;
		} else if (src[i] == '}') {
			throw TemplateSyntaxError("unmatched } at offset " + std::to_string(i));
		} else {
			literal += src[i];
			++i;
		}
	}
	if (open_block) throw TemplateSyntaxError("repeat block not closed");
	flush();
	return tmpl;
}

PromptTemplate load_template_file(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) throw IoError("cannot open template " + path.string());
	std::string header;
	std::getline(in, header);
	if (!header.empty() && header.back() == '\r') header.pop_back();
	TemplateQuality quality;
	if (header == "quality: simple") {
		quality = TemplateQuality::Simple;
	} else if (header == "quality: complex") {
		quality = TemplateQuality::Complex;
	} else {
		throw TemplateSyntaxError(path.string() + ": first line must be 'quality: simple|complex'");
	}
	std::stringstream rest;
	rest << in.rdbuf();
	std::string body = rest.str();
	while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
	return parse_template(body, path.stem().string(), quality);
}

std::vector<PromptTemplate> load_template_pool(const std::filesystem::path &dir) {
	if (!std::filesystem::is_directory(dir)) throw IoError("template directory not found: " + dir.string());
	std::vector<PromptTemplate> pool;
	for (const auto &entry : std::filesystem::directory_iterator(dir)) {
		if (entry.is_regular_file() && entry.path().extension() == ".txt") {
			pool.push_back(load_template_file(entry.path()));
		}
	}
	std::sort(pool.begin(), pool.end(), [](const auto &a, const auto &b) { return a.id < b.id; });
	return pool;
}

std::filesystem::path default_template_dir() {
	if (const char *env = std::getenv("PROMPTMINE_TEMPLATES")) return env;
	return PROMPTMINE_TEMPLATE_DIR;
}

std::string day_range(const ForecastWindow &window) {
	if (window.history.empty()) return {};
	return std::string(weekday_name(window.history.front().weekday)) + " to " +
	       std::string(weekday_name(window.history.back().weekday));
}

namespace {

std::string flat_history(const ForecastWindow &w, std::string_view sep) {
	std::vector<std::int64_t> all;
	for (const auto &day : w.history) all.insert(all.end(), day.hourly_visits.begin(), day.hourly_visits.end());
	return text::join<std::int64_t>(all, sep);
}

void render_tokens(const std::vector<TemplateToken> &tokens, const ForecastWindow &w, const DayRecord *day,
                   std::string &out) {
	for (const auto &tok : tokens) {
		if (const auto *lit = std::get_if<std::string>(&tok)) {
			out += *lit;
			continue;
		}
		if (const auto *block = std::get_if<RepeatBlock>(&tok)) {
			for (const auto &d : w.history) render_tokens(block->body, w, &d, out);
			continue;
		}
		switch (std::get<Placeholder>(tok)) {
		case Placeholder::Region:
			if (w.poi.region.empty()) throw RenderError("template needs {a} but POI " + w.poi.poi_id + " has no region");
			out += w.poi.region;
			break;
		case Placeholder::Brand:
			if (w.poi.brand.empty()) throw RenderError("template needs {c} but POI " + w.poi.poi_id + " has no brand");
			out += w.poi.brand;
			break;
		case Placeholder::Days: out += std::to_string(w.history.size()); break;
		case Placeholder::Visits:
			out += day ? text::join<std::int64_t>(day->hourly_visits, ", ") : flat_history(w, ", ");
			break;
		case Placeholder::Open: out += text::hour_label(w.poi.open_hour); break;
		case Placeholder::Close: out += text::hour_label(w.poi.close_hour); break;
		case Placeholder::Weekday: out += day ? std::string(weekday_name(day->weekday)) : day_range(w); break;
		}
	}
}

PromptPair base_pair(const ForecastWindow &window, Variant variant) {
	PromptPair pair;
	pair.variant = variant;
	pair.window = window;
	pair.future_values.assign(window.target.hourly_visits.begin(), window.target.hourly_visits.end());
	pair.future_total = window.target.daily_total;
	pair.split_hour = clamp_split_hour(window.poi, kDefaultSplitHour);
	pair.target_cuts = {pair.split_hour};
	pair.future_text = render_future(Variant::V1, window.poi.brand, window.target.weekday, pair.future_values);
	return pair;
}

} // namespace

PromptPair render_initial(const ForecastWindow &window) {
	PromptPair pair = base_pair(window, Variant::Init);
	pair.quality = TemplateQuality::Initial;
	pair.history_text = "In Region " + window.poi.region + ", what is the daily human mobility of " + window.poi.brand +
	                    " Store from " + day_range(window) + "? [" + flat_history(window, ",") + "].";
	return pair;
}

PromptPair render_pool(const ForecastWindow &window, const PromptTemplate &tmpl) {
	if (window.history.empty()) throw RenderError("window has no history days");
	PromptPair pair = base_pair(window, Variant::Init);
	pair.quality = tmpl.quality;
	render_tokens(tmpl.body, window, nullptr, pair.history_text);
	return pair;
}

std::vector<LabeledText> build_classifier_corpus(std::span<const ForecastWindow> windows,
                                                 std::span<const PromptTemplate> pool, std::uint64_t seed) {
	if (windows.empty()) throw ConfigError("evaluator pool is empty");
	std::vector<const PromptTemplate *> simple, complex;
	for (const auto &t : pool) {
		if (t.quality == TemplateQuality::Simple) simple.push_back(&t);
		if (t.quality == TemplateQuality::Complex) complex.push_back(&t);
	}
	if (simple.empty() || complex.empty()) throw ConfigError("template pool needs both simple and complex templates");

	Rng rng(seed);
	std::vector<LabeledText> corpus;
	corpus.reserve(windows.size() * 2);
	for (const auto &w : windows) {
		const auto *s = simple[rng.index(simple.size())];
		const auto *c = complex[rng.index(complex.size())];
		corpus.push_back({render_pool(w, *s).history_text, 0});
		corpus.push_back({render_pool(w, *c).history_text, 1});
	}
	return corpus;
}

std::vector<LabeledText> build_classifier_corpus(const DatasetSplit &split, std::span<const PromptTemplate> pool,
                                                 std::uint64_t seed) {
	return build_classifier_corpus(split.evaluator_pool, pool, seed);
}

} // namespace promptmine
