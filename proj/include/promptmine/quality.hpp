#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace promptmine {

inline constexpr double kDefaultEntropyThreshold = 3.5;

struct EntropyReport {
	double entropy_bits = 0.0;
	std::map<char32_t, double> char_distribution;
	std::size_t char_count = 0;
};

/// Shannon entropy in bits over the Unicode scalar values of `text`, with
/// whitespace and digits counted like any other symbol. Throws EmptyTextError.
EntropyReport char_entropy(std::string_view text);

/// Entropy only, without building the distribution map.
double char_entropy_bits(std::string_view text);

struct QualityVerdict {
	double classifier_score = 0.0;
	int classifier_label = 0;
	double entropy_bits = 0.0;
	double threshold = kDefaultEntropyThreshold;
	int passed = 0;
};

/// passed = label * [entropy >= threshold].
QualityVerdict make_verdict(double score, int label, double entropy_bits, double threshold);

struct LossReport {
	double cross_entropy = 0.0;
	double entropy_bits = 0.0;
	double weighted_loss = 0.0;
};

/// Cross-entropy (natural log) over label tokens divided by the generated
/// text's character entropy (bits). Throws ShapeError on mismatched lengths or
/// unnormalised rows, GateRejectedError when the entropy is below `threshold`.
LossReport entropy_weighted_loss(std::span<const std::size_t> label_tokens,
                                 std::span<const std::vector<double>> predicted_probs, std::string_view generated_text,
                                 double threshold = kDefaultEntropyThreshold);

/// Same law on precomputed terms.
double entropy_weighted_loss(double cross_entropy, double entropy_bits, double threshold = kDefaultEntropyThreshold);

} // namespace promptmine
