#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "promptmine/classifier.hpp"
#include "promptmine/data.hpp"

namespace promptmine {

struct GenerationRequest {
	std::string prompt;
	int max_tokens = 512;
	double temperature = 0.0;
	std::string request_id;
};

enum class BackendKind { Mock, Http };

struct GenerationResult {
	std::string request_id;
	std::string text;
	std::int64_t latency_ms = 0;
	BackendKind backend = BackendKind::Mock;
	int attempts = 1;
};

class GenerationBackend {
public:
	virtual ~GenerationBackend() = default;
	virtual GenerationResult generate(const GenerationRequest &request) = 0;
	virtual BackendKind kind() const = 0;
};

enum class MockMode { Perfect, Noisy };

/// Maps a request to the text an ideal generator would produce.
using ReferenceFn = std::function<std::string(const GenerationRequest &)>;

/// Deterministic stand-in. Noisy mode corrupts a request when a hash of
/// (seed, request_id) falls below the rate, so the outcome does not depend on
/// call order or thread.
class MockBackend final : public GenerationBackend {
public:
	explicit MockBackend(MockMode mode = MockMode::Perfect, ReferenceFn reference = {}, double corruption_rate = 0.0,
	                     std::uint64_t seed = 7);

	GenerationResult generate(const GenerationRequest &request) override;
	BackendKind kind() const override { return BackendKind::Mock; }

	bool is_corrupted(std::string_view request_id) const;

private:
	MockMode mode_;
	ReferenceFn reference_;
	double rate_;
	std::uint64_t seed_;
};

/// Replaces numbers so the sentence no longer carries the full forecast:
/// either the first number is dropped or the text is cut at the first digit and
/// a junk suffix appended.
std::string corrupt_text(std::string_view text, std::uint64_t salt);

/// Keeps at most `max_tokens` whitespace-separated tokens.
std::string truncate_tokens(std::string_view text, int max_tokens);

struct RetryPolicy {
	int attempts = 3;
	std::chrono::milliseconds initial_backoff{500};
};

struct HttpBackendConfig {
	std::string base_url = "http://127.0.0.1:8000";
	std::string auth_header_name;
	std::string auth_header_value;
	int max_in_flight = 4;
	RetryPolicy retry;
	std::chrono::milliseconds timeout{30000};
};

/// POST {base_url}/generate {"prompt","max_tokens","temperature","request_id"}
/// and expects {"text": ...} back.
class HttpBackend final : public GenerationBackend {
public:
	explicit HttpBackend(HttpBackendConfig config);

	GenerationResult generate(const GenerationRequest &request) override;
	BackendKind kind() const override { return BackendKind::Http; }
	const HttpBackendConfig &config() const { return config_; }

private:
	HttpBackendConfig config_;
};

/// Runs requests with at most `max_in_flight` outstanding; results come back in
/// request order. The first BackendError is rethrown after all workers finish.
std::vector<GenerationResult> generate_batch(GenerationBackend &backend, std::span<const GenerationRequest> requests,
                                             int max_in_flight = 4);

enum class PairRole { Generator, Cot };

std::string_view pair_role_name(PairRole role);
PairRole parse_pair_role(std::string_view text);

struct TrainingPair {
	std::string input_text;
	std::string label_text;
	PairRole role = PairRole::Generator;

	bool operator==(const TrainingPair &) const = default;
};

/// Generator role: initial render -> seeded Complex render of the same window.
/// CoT role: V2 history -> V3 history. Drawn from the evaluator pool.
std::vector<TrainingPair> emit_training_pairs(const DatasetSplit &split, std::span<const PromptTemplate> templates,
                                              std::uint64_t seed, PairRole role);

/// {"input","label","role"} per line.
void write_training_pairs(std::ostream &out, std::span<const TrainingPair> pairs);

enum class RejectReason { Classifier, Entropy };

std::string_view reject_reason_name(RejectReason reason);

struct Rejection {
	GenerationResult result;
	RejectReason reason = RejectReason::Classifier;
	QualityVerdict verdict;
};

struct FilterOutcome {
	std::vector<GenerationResult> kept;
	std::vector<Rejection> rejected;
};

FilterOutcome filter_generations(const ClassifierModel &model, std::span<const GenerationResult> results,
                                 double threshold = kDefaultEntropyThreshold);

} // namespace promptmine
