#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "promptmine/data.hpp"
#include "promptmine/types.hpp"

namespace promptmine {

enum class TemplateQuality { Simple, Complex, Initial };

std::string_view quality_name(TemplateQuality q);

/// The seven recognised placeholder symbols.
enum class Placeholder : char {
	Region = 'a',
	Brand = 'c',
	Days = 'n',
	Visits = 'x',
	Open = 'o',
	Close = 'e',
	Weekday = 't',
};

struct RepeatBlock;
using TemplateToken = std::variant<std::string, Placeholder, RepeatBlock>;

struct RepeatBlock {
	std::vector<TemplateToken> body;
};

struct PromptTemplate {
	std::string id;
	TemplateQuality quality = TemplateQuality::Simple;
	std::vector<TemplateToken> body;

	/// Reconstructs the template source text.
	std::string source() const;
	bool uses(Placeholder p) const;
};

/// Grammar: literal text, `{a}` `{c}` `{n}` `{x}` `{o}` `{e}` `{t}`, and
/// `[[repeat]] ... [[/repeat]]` (not nestable). `{{` and `}}` are not escapes.
PromptTemplate parse_template(std::string_view source, std::string id = {},
                              TemplateQuality quality = TemplateQuality::Simple);

/// File form: first line `quality: simple|complex`, remainder is the body.
/// The template id is the file stem.
PromptTemplate load_template_file(const std::filesystem::path &path);

/// All `*.txt` templates in a directory, sorted by id.
std::vector<PromptTemplate> load_template_pool(const std::filesystem::path &dir);

/// Directory of the shipped pool.
std::filesystem::path default_template_dir();

/// "Mon to Wed"
std::string day_range(const ForecastWindow &window);

struct PromptPair {
	std::string history_text;
	std::string future_text;
	Variant variant = Variant::Init;
	ForecastWindow window;
	/// Quality label of the pool template that produced the history text.
	std::optional<TemplateQuality> quality;
	/// Truth values the future text states: 24 hourly values for V1, segment
	/// sums for V2-V4.
	std::vector<std::int64_t> future_values;
	std::int64_t future_total = 0;
	int split_hour = 12;
	/// Cut indices applied to the target day (V2/V3: {split_hour}, V4: plan).
	std::vector<int> target_cuts;
};

/// Region/brand question followed by the flat bracketed history list.
PromptPair render_initial(const ForecastWindow &window);

/// Inside a repeat block `{x}` is that day's hourly list and `{t}` its weekday;
/// outside, `{x}` is the flattened history and `{t}` the weekday range.
PromptPair render_pool(const ForecastWindow &window, const PromptTemplate &tmpl);

struct LabeledText {
	std::string text;
	int label = 0; ///< 1 = Complex, 0 = Simple

	bool operator==(const LabeledText &) const = default;
};

/// One Simple and one Complex render per evaluator-pool window, templates drawn
/// uniformly within each class.
std::vector<LabeledText> build_classifier_corpus(const DatasetSplit &split, std::span<const PromptTemplate> pool,
                                                 std::uint64_t seed);
std::vector<LabeledText> build_classifier_corpus(std::span<const ForecastWindow> windows,
                                                 std::span<const PromptTemplate> pool, std::uint64_t seed);

} // namespace promptmine
