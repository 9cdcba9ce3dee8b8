#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "promptmine/quality.hpp"
#include "promptmine/template.hpp"

namespace promptmine {

inline constexpr std::size_t kDefaultFeatureDim = std::size_t{1} << 15;

struct ClassifierHyperparams {
	double l2_inverse_strength = 1.0;
	int max_iterations = 100;
	double gradient_tolerance = 1e-6;
	int history_size = 10;

	bool operator==(const ClassifierHyperparams &) const = default;
};

/// L2-regularised logistic regression over hashed binary n-gram features.
struct ClassifierModel {
	std::size_t feature_dim = kDefaultFeatureDim;
	std::vector<double> weights;
	double bias = 0.0;
	ClassifierHyperparams hyperparams;
	int iterations_run = 0;
	double final_gradient_norm = 0.0;

	bool operator==(const ClassifierModel &) const = default;
};

/// Lowercased tokens split on whitespace and punctuation.
std::vector<std::string> tokenize(std::string_view text);

/// Sorted, deduplicated feature indices for unigrams and bigrams.
std::vector<std::uint32_t> hashed_features(std::string_view text, std::size_t feature_dim = kDefaultFeatureDim);

/// Minimises C * sum(logloss) + 0.5 * |w|^2 (bias unregularised) with L-BFGS.
/// Throws DegenerateCorpusError when only one label is present.
ClassifierModel train_classifier(std::span<const LabeledText> corpus, std::uint64_t seed = 42,
                                 ClassifierHyperparams hyperparams = {},
                                 std::size_t feature_dim = kDefaultFeatureDim);

struct Classification {
	double score = 0.0;
	int label = 0;
};

Classification classify(const ClassifierModel &model, std::string_view text);

double accuracy(const ClassifierModel &model, std::span<const LabeledText> corpus);

/// Throws EmptyTextError for empty text.
QualityVerdict gate(const ClassifierModel &model, std::string_view text,
                    double threshold = kDefaultEntropyThreshold);

void save_model(const ClassifierModel &model, const std::filesystem::path &path);
/// Throws IoError when missing, SchemaError on a malformed file.
ClassifierModel load_model(const std::filesystem::path &path);

std::string model_to_json(const ClassifierModel &model);
ClassifierModel model_from_json(std::string_view json);

} // namespace promptmine
