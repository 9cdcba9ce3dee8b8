#include "promptmine/quality.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "promptmine/errors.hpp"
#include "promptmine/text.hpp"

namespace promptmine {

namespace {

std::unordered_map<char32_t, std::size_t> symbol_counts(const std::u32string &symbols) {
	std::unordered_map<char32_t, std::size_t> counts;
	for (char32_t c : symbols) ++counts[c];
	return counts;
}

// Sorting the counts makes the result independent of hash-map order, so equal
// multisets of counts give bit-identical entropies.
double entropy_from_counts(std::vector<std::size_t> counts, std::size_t total) {
	std::sort(counts.begin(), counts.end());
	const double n = static_cast<double>(total);
	double h = 0.0;
	for (std::size_t c : counts) {
		const double p = static_cast<double>(c) / n;
		h -= p * std::log2(p);
	}
	return h == 0.0 ? 0.0 : h;
}

} // namespace

EntropyReport char_entropy(std::string_view text_bytes) {
	if (text_bytes.empty()) throw EmptyTextError("entropy of empty text is undefined");
	const auto symbols = text::decode_utf8(text_bytes);
	const auto counts = symbol_counts(symbols);

	EntropyReport report;
	report.char_count = symbols.size();
	std::vector<std::size_t> values;
	values.reserve(counts.size());
	for (const auto &[sym, c] : counts) {
		report.char_distribution[sym] = static_cast<double>(c) / static_cast<double>(symbols.size());
		values.push_back(c);
	}
	report.entropy_bits = entropy_from_counts(std::move(values), symbols.size());
	return report;
}

double char_entropy_bits(std::string_view text_bytes) {
	if (text_bytes.empty()) throw EmptyTextError("entropy of empty text is undefined");
	const auto symbols = text::decode_utf8(text_bytes);
	const auto counts = symbol_counts(symbols);
	std::vector<std::size_t> values;
	values.reserve(counts.size());
	for (const auto &kv : counts) values.push_back(kv.second);
	return entropy_from_counts(std::move(values), symbols.size());
}

QualityVerdict make_verdict(double score, int label, double entropy_bits, double threshold) {
	QualityVerdict v;
	v.classifier_score = score;
	v.classifier_label = label ? 1 : 0;
	v.entropy_bits = entropy_bits;
	v.threshold = threshold;
	v.passed = v.classifier_label * (entropy_bits >= threshold ? 1 : 0);
	return v;
}

double entropy_weighted_loss(double cross_entropy, double entropy_bits, double threshold) {
	if (!(entropy_bits >= threshold) || entropy_bits <= 0.0) {
		throw GateRejectedError("prompt entropy " + std::to_string(entropy_bits) + " below threshold " +
		                        std::to_string(threshold));
	}
	return cross_entropy / entropy_bits;
}

LossReport entropy_weighted_loss(std::span<const std::size_t> label_tokens,
                                 std::span<const std::vector<double>> predicted_probs, std::string_view generated_text,
                                 double threshold) {
	if (label_tokens.empty() || label_tokens.size() != predicted_probs.size()) {
		throw ShapeError("label/prediction length mismatch: " + std::to_string(label_tokens.size()) + " vs " +
		                 std::to_string(predicted_probs.size()));
	}
	double ce = 0.0;
	for (std::size_t j = 0; j < label_tokens.size(); ++j) {
		const auto &row = predicted_probs[j];
		double sum = 0.0;
		for (double p : row) sum += p;
		if (std::abs(sum - 1.0) > 1e-6) throw ShapeError("probability row " + std::to_string(j) + " does not sum to 1");
		if (label_tokens[j] >= row.size()) throw ShapeError("label token index out of vocabulary range");
		ce -= std::log(row[label_tokens[j]]);
	}
	LossReport report;
	report.cross_entropy = ce;
	report.entropy_bits = char_entropy_bits(generated_text);
	report.weighted_loss = entropy_weighted_loss(ce, report.entropy_bits, threshold);
	return report;
}

} // namespace promptmine
