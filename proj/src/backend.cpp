#include "promptmine/backend.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <mutex>
#include <ostream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "promptmine/errors.hpp"
#include "promptmine/random.hpp"
#include "promptmine/refine.hpp"

namespace promptmine {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// mock

MockBackend::MockBackend(MockMode mode, ReferenceFn reference, double corruption_rate, std::uint64_t seed)
    : mode_(mode), reference_(std::move(reference)), rate_(corruption_rate), seed_(seed) {
	if (rate_ < 0.0 || rate_ > 1.0) throw ConfigError("corruption rate must lie in [0, 1]");
}

bool MockBackend::is_corrupted(std::string_view request_id) const {
	if (mode_ != MockMode::Noisy) return false;
	const std::uint64_t h = splitmix64(seed_ ^ fnv1a64(request_id));
	return static_cast<double>(h >> 11) * 0x1.0p-53 < rate_;
}

GenerationResult MockBackend::generate(const GenerationRequest &request) {
	if (request.max_tokens < 1) throw ConfigError("max_tokens must be at least 1");
	GenerationResult result;
	result.request_id = request.request_id;
	result.backend = BackendKind::Mock;
	std::string text = reference_ ? reference_(request) : request.prompt;
	if (is_corrupted(request.request_id)) {
		text = corrupt_text(text, splitmix64(seed_ + fnv1a64(request.request_id)));
	}
	result.text = truncate_tokens(text, request.max_tokens);
	return result;
}

std::string corrupt_text(std::string_view text, std::uint64_t salt) {
	const auto first_digit = std::find_if(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
	const std::size_t pos = static_cast<std::size_t>(first_digit - text.begin());
	if (pos == text.size()) return std::string(text) + " <unk> ##";
	if ((splitmix64(salt) & 1) == 0) {
		// drop the first number together with its list separator
		std::size_t end = pos;
		while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
		if (text.substr(end, 2) == ", ") end += 2;
		return std::string(text.substr(0, pos)) + std::string(text.substr(end));
	}
	return std::string(text.substr(0, pos)) + "<unk> <unk> ## ##";
}

std::string truncate_tokens(std::string_view text, int max_tokens) {
	int tokens = 0;
	bool in_token = false;
	for (std::size_t i = 0; i < text.size(); ++i) {
		const bool space = std::isspace(static_cast<unsigned char>(text[i])) != 0;
		if (!space && !in_token) {
			if (tokens == max_tokens) {
				std::size_t end = i;
				while (end > 0 && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
				return std::string(text.substr(0, end));
			}
			++tokens;
		}
		in_token = !space;
	}
	return std::string(text);
}

// ---------------------------------------------------------------------------
// http

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
	if (config_.retry.attempts < 1) throw ConfigError("retry attempts must be at least 1");
	if (config_.max_in_flight < 1) throw ConfigError("max_in_flight must be at least 1");
}

GenerationResult HttpBackend::generate(const GenerationRequest &request) {
	if (request.max_tokens < 1) throw ConfigError("max_tokens must be at least 1");
	httplib::Client client(config_.base_url);
	const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
	const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
	client.set_connection_timeout(secs.count(), usecs.count());
	client.set_read_timeout(secs.count(), usecs.count());
	client.set_write_timeout(secs.count(), usecs.count());
	httplib::Headers headers;
	if (!config_.auth_header_name.empty()) headers.emplace(config_.auth_header_name, config_.auth_header_value);

	const json body = {{"prompt", request.prompt},
	                   {"max_tokens", request.max_tokens},
	                   {"temperature", request.temperature},
	                   {"request_id", request.request_id}};
	const std::string payload = body.dump();

	std::string last_error;
	auto backoff = config_.retry.initial_backoff;
	for (int attempt = 1; attempt <= config_.retry.attempts; ++attempt) {
		const auto start = std::chrono::steady_clock::now();
		auto res = client.Post("/generate", headers, payload, "application/json");
		if (!res) {
			last_error = "request failed: " + httplib::to_string(res.error());
		} else if (res->status < 200 || res->status >= 300) {
			last_error = "HTTP status " + std::to_string(res->status);
		} else {
			try {
				const auto reply = json::parse(res->body);
				if (reply.contains("request_id") && reply["request_id"] != request.request_id) {
					throw BackendError(request.request_id + ": reply carries request_id " + reply["request_id"].dump(),
					                   attempt);
				}
				GenerationResult result;
				result.request_id = request.request_id;
				result.text = reply.at("text").get<std::string>();
				result.backend = BackendKind::Http;
				result.attempts = attempt;
				result.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
				                        std::chrono::steady_clock::now() - start)
				                        .count();
				return result;
			} catch (const json::exception &e) {
				last_error = std::string("malformed response: ") + e.what();
			}
		}
		if (attempt < config_.retry.attempts) {
			std::this_thread::sleep_for(backoff);
			backoff *= 2;
		}
	}
	throw BackendError(request.request_id + ": " + last_error + " after " + std::to_string(config_.retry.attempts) +
	                       " attempts",
	                   config_.retry.attempts);
}

std::vector<GenerationResult> generate_batch(GenerationBackend &backend, std::span<const GenerationRequest> requests,
                                             int max_in_flight) {
	if (max_in_flight < 1) throw ConfigError("max_in_flight must be at least 1");
	std::vector<GenerationResult> results(requests.size());
	std::atomic<std::size_t> next{0};
	std::mutex error_mutex;
	std::exception_ptr first_error;

	const auto worker = [&] {
		while (true) {
			const std::size_t i = next.fetch_add(1);
			if (i >= requests.size()) return;
			try {
				auto r = backend.generate(requests[i]);
				r.request_id = requests[i].request_id;
				results[i] = std::move(r);
			} catch (...) {
				std::lock_guard lock(error_mutex);
				if (!first_error) first_error = std::current_exception();
			}
		}
	};
	const auto workers = std::min<std::size_t>(static_cast<std::size_t>(max_in_flight), requests.size());
	std::vector<std::thread> pool;
	for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
	if (workers > 0) worker();
	for (auto &t : pool) t.join();
	if (first_error) std::rethrow_exception(first_error);
	return results;
}

// ---------------------------------------------------------------------------
// training pairs and filtering

std::string_view pair_role_name(PairRole role) { return role == PairRole::Generator ? "generator" : "cot"; }

PairRole parse_pair_role(std::string_view text) {
	if (text == "generator") return PairRole::Generator;
	if (text == "cot") return PairRole::Cot;
	throw ConfigError("unknown pair role '" + std::string(text) + "'");
}

std::vector<TrainingPair> emit_training_pairs(const DatasetSplit &split, std::span<const PromptTemplate> templates,
                                              std::uint64_t seed, PairRole role) {
	if (split.evaluator_pool.empty()) throw ConfigError("evaluator pool is empty");
	std::vector<const PromptTemplate *> complex;
	for (const auto &t : templates) {
		if (t.quality == TemplateQuality::Complex) complex.push_back(&t);
	}
	if (role == PairRole::Generator && complex.empty()) throw ConfigError("template pool has no complex templates");

	Rng rng(seed);
	std::vector<TrainingPair> pairs;
	pairs.reserve(split.evaluator_pool.size());
	for (const auto &w : split.evaluator_pool) {
		TrainingPair p;
		p.role = role;
		if (role == PairRole::Generator) {
			p.input_text = render_initial(w).history_text;
			p.label_text = render_pool(w, *complex[rng.index(complex.size())]).history_text;
		} else {
			p.input_text = build_v2(w).history_text;
			p.label_text = build_v3(w).history_text;
		}
		pairs.push_back(std::move(p));
	}
	return pairs;
}

void write_training_pairs(std::ostream &out, std::span<const TrainingPair> pairs) {
	for (const auto &p : pairs) {
		out << json{{"input", p.input_text}, {"label", p.label_text}, {"role", pair_role_name(p.role)}}.dump() << '\n';
	}
}

std::string_view reject_reason_name(RejectReason reason) {
	return reason == RejectReason::Classifier ? "classifier" : "entropy";
}

FilterOutcome filter_generations(const ClassifierModel &model, std::span<const GenerationResult> results,
                                 double threshold) {
	FilterOutcome out;
	for (const auto &r : results) {
		if (r.text.empty()) {
			out.rejected.push_back({r, RejectReason::Entropy, make_verdict(0.0, 0, 0.0, threshold)});
			continue;
		}
		const auto verdict = gate(model, r.text, threshold);
		if (verdict.passed) {
			out.kept.push_back(r);
		} else {
			const auto reason = verdict.classifier_label == 0 ? RejectReason::Classifier : RejectReason::Entropy;
			out.rejected.push_back({r, reason, verdict});
		}
	}
	return out;
}

} // namespace promptmine
