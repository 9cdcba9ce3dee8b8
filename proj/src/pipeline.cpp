#include "promptmine/pipeline.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "promptmine/batch.hpp"
#include "promptmine/classifier.hpp"
#include "promptmine/errors.hpp"
#include "promptmine/forecast.hpp"
#include "promptmine/random.hpp"
#include "promptmine/text.hpp"

namespace promptmine {

using json = nlohmann::json;

BackendChoice parse_backend_choice(std::string_view text) {
	if (text == "mock-perfect") return BackendChoice::MockPerfect;
	if (text == "mock-noisy") return BackendChoice::MockNoisy;
	if (text == "http") return BackendChoice::Http;
	throw ConfigError("unknown backend '" + std::string(text) + "'");
}

std::string_view backend_choice_name(BackendChoice choice) {
	switch (choice) {
	case BackendChoice::MockPerfect: return "mock-perfect";
	case BackendChoice::MockNoisy: return "mock-noisy";
	case BackendChoice::Http: return "http";
	}
	return "?";
}

namespace {

std::string hex16(std::uint64_t h) {
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

std::string read_file(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot open " + path.string());
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

std::string trim(std::string_view s) {
	const auto b = s.find_first_not_of(" \t\r\n");
	if (b == std::string_view::npos) return {};
	const auto e = s.find_last_not_of(" \t\r\n");
	std::string out(s.substr(b, e - b + 1));
	if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
	return out;
}

std::vector<std::string> split_list(std::string_view s) {
	std::vector<std::string> out;
	std::string cur;
	for (char c : s) {
		if (c == ',') {
			out.push_back(trim(cur));
			cur.clear();
		} else {
			cur += c;
		}
	}
	out.push_back(trim(cur));
	return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
	const std::string v(value);
	std::size_t pos = 0;
	T out{};
	try {
		if constexpr (std::is_floating_point_v<T>) {
			out = static_cast<T>(std::stod(v, &pos));
		} else if constexpr (std::is_unsigned_v<T>) {
			if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
			out = static_cast<T>(std::stoull(v, &pos));
		} else {
			out = static_cast<T>(std::stoll(v, &pos));
		}
	} catch (const std::exception &) {
		pos = 0;
	}
	if (pos == 0 || pos != v.size()) throw ConfigError("invalid value '" + v + "' for " + std::string(key));
	return out;
}

} // namespace

std::string PipelineConfig::data_hash() const {
	std::ostringstream canon;
	canon << "source=" << source;
	if (source != "synth") {
		canon << ";format=" << (input_format == RecordFormat::Jsonl ? "jsonl" : "csv");
		std::error_code ec;
		if (std::filesystem::is_regular_file(source, ec)) canon << ";content=" << hex16(fnv1a64(read_file(source)));
	} else {
		canon << ";num_pois=" << num_pois << ";days=" << synth_days
		      << ";profile=" << (profile == PeakProfile::Flat ? "flat" : "diurnal");
	}
	char buf[160];
	std::snprintf(buf, sizeof buf, ";seed=%llu;n=%d;fractions=%.17g/%.17g/%.17g;pool=%.17g",
	              static_cast<unsigned long long>(seed), n, fractions.train, fractions.val, fractions.test,
	              pool_fraction);
	canon << buf;
	return hex16(fnv1a64(canon.str()));
}

void apply_config_value(PipelineConfig &c, std::string_view key, std::string_view raw) {
	const std::string value = trim(raw);
	if (key == "source") {
		c.source = value;
	} else if (key == "format") {
		c.input_format = parse_record_format(value);
	} else if (key == "num_pois") {
		c.num_pois = parse_number<int>(key, value);
	} else if (key == "days") {
		c.synth_days = parse_number<int>(key, value);
	} else if (key == "profile") {
		if (value == "flat") {
			c.profile = PeakProfile::Flat;
		} else if (value == "diurnal") {
			c.profile = PeakProfile::Diurnal;
		} else {
			throw ConfigError("unknown profile '" + value + "'");
		}
	} else if (key == "seed") {
		c.seed = parse_number<std::uint64_t>(key, value);
	} else if (key == "n") {
		c.n = parse_number<int>(key, value);
	} else if (key == "train_fraction") {
		c.fractions.train = parse_number<double>(key, value);
	} else if (key == "val_fraction") {
		c.fractions.val = parse_number<double>(key, value);
	} else if (key == "test_fraction") {
		c.fractions.test = parse_number<double>(key, value);
	} else if (key == "pool_fraction") {
		c.pool_fraction = parse_number<double>(key, value);
	} else if (key == "tau") {
		c.tau = parse_number<double>(key, value);
		if (!(c.tau > 0)) throw ConfigError("tau must be positive");
	} else if (key == "split_hour") {
		c.split_hour = parse_number<int>(key, value);
	} else if (key == "k") {
		c.k_list.clear();
		for (const auto &item : split_list(value)) c.k_list.push_back(parse_number<std::size_t>(key, item));
	} else if (key == "mode") {
		c.mode = parse_v4_segmentation(value);
	} else if (key == "variant") {
		c.variants.clear();
		if (value == "all") {
			c.variants = {Variant::V1, Variant::V2, Variant::V3, Variant::V4};
		} else {
			for (const auto &item : split_list(value)) {
				const auto v = parse_variant(item);
				if (v == Variant::Init) throw ConfigError("variant must be one of v1..v4");
				c.variants.push_back(v);
			}
		}
	} else if (key == "backend") {
		c.backend = parse_backend_choice(value);
	} else if (key == "noise_rate") {
		c.noise_rate = parse_number<double>(key, value);
	} else if (key == "noise_seed") {
		c.noise_seed = parse_number<std::uint64_t>(key, value);
	} else if (key == "url") {
		c.http.base_url = value;
	} else if (key == "auth_header") {
		c.http.auth_header_name = value;
	} else if (key == "auth_value") {
		c.http.auth_header_value = value;
	} else if (key == "max_in_flight") {
		c.http.max_in_flight = parse_number<int>(key, value);
	} else if (key == "retries") {
		c.http.retry.attempts = parse_number<int>(key, value);
	} else if (key == "backoff_ms") {
		c.http.retry.initial_backoff = std::chrono::milliseconds(parse_number<int>(key, value));
	} else if (key == "timeout_ms") {
		c.http.timeout = std::chrono::milliseconds(parse_number<int>(key, value));
	} else if (key == "templates") {
		c.templates = value;
	} else if (key == "out") {
		c.out = value;
	} else {
		throw ConfigError("unknown config key '" + std::string(key) + "'");
	}
}

void apply_config_text(PipelineConfig &config, std::string_view text) {
	std::istringstream in{std::string(text)};
	std::string line;
	int lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		const auto hash = line.find('#');
		if (hash != std::string::npos) line.erase(hash);
		if (trim(line).empty()) continue;
		const auto eq = line.find('=');
		if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
		apply_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
	}
}

void apply_config_file(PipelineConfig &config, const std::filesystem::path &path) {
	if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
	apply_config_text(config, read_file(path));
}

namespace {

// ---------------------------------------------------------------------------
// artifacts

constexpr std::string_view kRecords = "records.jsonl";
constexpr std::string_view kSplit = "split.json";
constexpr std::string_view kModel = "model.json";
constexpr std::string_view kMetrics = "metrics.json";

/// Outputs are buffered and only written when the command succeeds; a failed
/// write removes whatever this command already wrote.
class ArtifactSet {
public:
	explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

	void add(std::string name, std::string content) { files_[std::move(name)] = std::move(content); }

	std::string read_input(std::string_view name) {
		const auto path = dir_ / name;
		if (!std::filesystem::exists(path)) throw IoError(std::string(name) + " not found in " + dir_.string());
		auto content = read_file(path);
		inputs_[std::string(name)] = hex16(fnv1a64(content));
		return content;
	}

	void note_input(std::string name, std::string hash) { inputs_[std::move(name)] = std::move(hash); }

	void commit(std::string_view command, const json &stage_config, const std::string &config_hash) {
		std::filesystem::create_directories(dir_);
		json outputs = json::object();
		for (const auto &[name, content] : files_) outputs[name] = hex16(fnv1a64(content));
		std::vector<std::filesystem::path> written;
		try {
			for (const auto &[name, content] : files_) {
				const auto final_path = dir_ / name;
				const auto tmp = dir_ / (name + ".partial");
				{
					std::ofstream out(tmp, std::ios::binary);
					if (!out) throw IoError("cannot write " + tmp.string());
					out << content;
					if (!out) throw IoError("write failed for " + tmp.string());
				}
				std::filesystem::rename(tmp, final_path);
				written.push_back(final_path);
			}
			const std::time_t now = std::time(nullptr);
			char stamp[32];
			std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
			json manifest = {{"command", command},      {"config_hash", config_hash}, {"config", stage_config},
			                 {"inputs", json(inputs_)}, {"outputs", outputs},         {"created_at", stamp}};
			std::ofstream m(dir_ / ("manifest-" + std::string(command) + ".json"));
			m << manifest.dump(2) << '\n';
		} catch (...) {
			for (const auto &p : written) std::filesystem::remove(p);
			for (const auto &[name, content] : files_) std::filesystem::remove(dir_ / (name + ".partial"));
			throw;
		}
	}

private:
	std::filesystem::path dir_;
	std::map<std::string, std::string> files_;
	std::map<std::string, std::string> inputs_;
};

json config_json(const PipelineConfig &c) {
	json variants = json::array();
	for (auto v : c.variants) variants.push_back(variant_name(v));
	return {{"source", c.source},
	        {"num_pois", c.num_pois},
	        {"days", c.synth_days},
	        {"profile", c.profile == PeakProfile::Flat ? "flat" : "diurnal"},
	        {"seed", c.seed},
	        {"n", c.n},
	        {"fractions", {c.fractions.train, c.fractions.val, c.fractions.test}},
	        {"pool_fraction", c.pool_fraction},
	        {"tau", c.tau},
	        {"split_hour", c.split_hour},
	        {"k", c.k_list},
	        {"mode", c.mode == V4Segmentation::Diurnal      ? "diurnal"
	                 : c.mode == V4Segmentation::MaximizeIg ? "maximize-ig"
	                                                        : "minimize-eq5"},
	        {"variants", variants},
	        {"backend", backend_choice_name(c.backend)},
	        {"noise_rate", c.noise_rate},
	        {"noise_seed", c.noise_seed}};
}

std::string records_jsonl(std::span<const PoiRecord> records) {
	std::ostringstream out;
	write_records(out, records, RecordFormat::Jsonl);
	return out.str();
}

std::vector<PoiRecord> records_from(ArtifactSet &artifacts) {
	std::istringstream in(artifacts.read_input(kRecords));
	return read_records(in, RecordFormat::Jsonl);
}

json keys_json(std::span<const ForecastWindow> windows) {
	json arr = json::array();
	for (const auto &w : windows) arr.push_back({w.poi.poi_id, format_date(w.target.date)});
	return arr;
}

DatasetSplit split_from(ArtifactSet &artifacts, const PipelineConfig &config) {
	const auto records = records_from(artifacts);
	const auto windows = make_windows(records, config.n);
	std::map<WindowKey, const ForecastWindow *> by_key;
	for (const auto &w : windows) by_key[key_of(w)] = &w;

	json j;
	try {
		j = json::parse(artifacts.read_input(kSplit));
	} catch (const json::exception &e) {
		throw SchemaError(std::string("malformed split.json: ") + e.what());
	}
	const auto resolve = [&](const char *part) {
		std::vector<ForecastWindow> out;
		for (const auto &k : j.at(part)) {
			const WindowKey key{k.at(0).get<std::string>(), parse_date(k.at(1).get<std::string>())};
			const auto it = by_key.find(key);
			if (it == by_key.end()) throw SchemaError("split.json refers to unknown window " + key.poi_id);
			out.push_back(*it->second);
		}
		return out;
	};
	DatasetSplit split;
	split.seed = j.at("seed").get<std::uint64_t>();
	split.train = resolve("train");
	split.val = resolve("val");
	split.test = resolve("test");
	split.evaluator_pool = resolve("evaluator_pool");
	return split;
}

ClassifierModel model_from(ArtifactSet &artifacts, const std::filesystem::path &dir) {
	const auto path = dir / kModel;
	if (!std::filesystem::exists(path)) throw IoError("model not found: " + path.string());
	return model_from_json(artifacts.read_input(kModel));
}

std::string request_id(const ForecastWindow &w, std::string_view tag) {
	return std::string(tag) + "|" + w.poi.poi_id + "|" + format_date(w.target.date);
}

std::unique_ptr<GenerationBackend> make_backend(const PipelineConfig &c, ReferenceFn reference) {
	switch (c.backend) {
	case BackendChoice::MockPerfect: return std::make_unique<MockBackend>(MockMode::Perfect, std::move(reference));
	case BackendChoice::MockNoisy:
		return std::make_unique<MockBackend>(MockMode::Noisy, std::move(reference), c.noise_rate, c.noise_seed);
	case BackendChoice::Http: return std::make_unique<HttpBackend>(c.http);
	}
	throw ConfigError("unknown backend");
}

int in_flight(const PipelineConfig &c) {
	return c.backend == BackendChoice::Http ? c.http.max_in_flight : std::max(1, batch::max_threads());
}

struct VariantRun {
	Variant variant;
	std::size_t k = 0; ///< V4 only
	std::string tag;
	std::string label;
};

std::vector<VariantRun> variant_runs(const PipelineConfig &c) {
	std::vector<VariantRun> runs;
	for (auto v : c.variants) {
		if (v != Variant::V4) {
			runs.push_back({v, 0, std::string(variant_name(v)), {}});
			continue;
		}
		if (c.k_list.empty()) throw ConfigError("V4 needs at least one k");
		for (auto k : c.k_list) runs.push_back({v, k, "v4-k" + std::to_string(k), "K=" + std::to_string(k)});
	}
	return runs;
}

std::vector<PromptPair> build_run(const VariantRun &run, std::span<const ForecastWindow> windows,
                                  const PipelineConfig &c) {
	RefineConfig rc;
	rc.split_hour = c.split_hour;
	rc.k = run.k ? run.k : 4;
	rc.mode = c.mode;
	return batch::build_variants(windows, run.variant, rc);
}

std::size_t expected_values(const VariantRun &run) {
	switch (run.variant) {
	case Variant::Init:
	case Variant::V1: return kHoursPerDay;
	case Variant::V2:
	case Variant::V3: return 2;
	case Variant::V4: return run.k;
	}
	return 0;
}

// ---------------------------------------------------------------------------
// commands

void cmd_synth(const PipelineConfig &c, ArtifactSet &a, std::ostream &log) {
	SynthConfig sc;
	sc.num_pois = c.num_pois;
	sc.days = c.synth_days;
	sc.peak_profile = c.profile;
	sc.seed = c.seed;
	if (sc.days < c.n + 1) throw ConfigError("days must be at least n + 1");
	const auto records = synthesize_corpus(sc);
	a.add(std::string(kRecords), records_jsonl(records));
	log << "synthesized " << records.size() << " POIs x " << sc.days << " days\n";
}

void cmd_ingest(const PipelineConfig &c, ArtifactSet &a, std::ostream &log) {
	if (c.source == "synth") throw ConfigError("ingest needs --source <records file>");
	const auto records = load_records(c.source, c.input_format);
	a.note_input(c.source, hex16(fnv1a64(read_file(c.source))));
	a.add(std::string(kRecords), records_jsonl(records));
	std::size_t days = 0;
	for (const auto &r : records) days += r.days.size();
	log << "ingested " << records.size() << " POIs, " << days << " POI-days\n";
}

void cmd_split(const PipelineConfig &c, ArtifactSet &a, std::ostream &log) {
	const auto records = records_from(a);
	auto windows = make_windows(records, c.n);
	const auto split = split_dataset(std::move(windows), c.fractions, c.pool_fraction, c.seed);
	const json j = {{"seed", split.seed},
	                {"n", c.n},
	                {"train", keys_json(split.train)},
	                {"val", keys_json(split.val)},
	                {"test", keys_json(split.test)},
	                {"evaluator_pool", keys_json(split.evaluator_pool)}};
	a.add(std::string(kSplit), j.dump(1) + "\n");
	log << "windows: train " << split.train.size() << ", val " << split.val.size() << ", test " << split.test.size()
	    << ", evaluator pool " << split.evaluator_pool.size() << "\n";
}

void cmd_train_evaluator(const PipelineConfig &c, ArtifactSet &a, std::ostream &log) {
	const auto split = split_from(a, c);
	const auto pool = load_template_pool(c.templates);
	auto corpus = build_classifier_corpus(split, pool, c.seed);
	Rng rng(splitmix64(c.seed));
	rng.shuffle(corpus);
	const std::size_t held = std::max<std::size_t>(1, corpus.size() / 4);
	const std::vector<LabeledText> heldout(corpus.end() - static_cast<std::ptrdiff_t>(held), corpus.end());
	corpus.resize(corpus.size() - held);
	const auto model = train_classifier(corpus, c.seed);
	const double acc = accuracy(model, heldout);
	a.add(std::string(kModel), model_to_json(model) + "\n");
	const json eval = {{"train_size", corpus.size()},
	                   {"heldout_size", heldout.size()},
	                   {"heldout_accuracy", acc},
	                   {"train_accuracy", accuracy(model, corpus)},
	                   {"iterations", model.iterations_run}};
	a.add("classifier_eval.json", eval.dump(2) + "\n");
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.4f", acc);
	log << "classifier trained on " << corpus.size() << " prompts in " << model.iterations_run
	    << " iterations; held-out accuracy " << buf << " (" << heldout.size() << " prompts)\n";
}

void cmd_emit_pairs(const PipelineConfig &c, ArtifactSet &a, std::ostream &log) {
	const auto split = split_from(a, c);
	const auto pool = load_template_pool(c.templates);
	for (auto role : {PairRole::Generator, PairRole::Cot}) {
		const auto pairs = emit_training_pairs(split, pool, c.seed, role);
		std::ostringstream out;
		write_training_pairs(out, pairs);
		a.add("pairs_" + std::string(pair_role_name(role)) + ".jsonl", out.str());
		log << "emitted " << pairs.size() << " " << pair_role_name(role) << " pairs\n";
	}
}

void cmd_mine(const PipelineConfig &c, ArtifactSet &a, std::ostream &log, const std::filesystem::path &dir) {
	const auto model = model_from(a, dir);
	const auto split = split_from(a, c);
	std::vector<GenerationRequest> requests;
	std::map<std::string, std::string> ideal;
	for (const auto &w : split.test) {
		GenerationRequest r;
		r.request_id = request_id(w, "init");
		r.prompt = render_initial(w).history_text;
		ideal[r.request_id] = build_v1(w).history_text;
		requests.push_back(std::move(r));
	}
	auto backend = make_backend(c, [&ideal](const GenerationRequest &r) { return ideal.at(r.request_id); });
	const auto results = generate_batch(*backend, requests, in_flight(c));
	const auto filtered = filter_generations(model, results, c.tau);

	std::ostringstream kept, rejected;
	for (const auto &r : filtered.kept) kept << json{{"request_id", r.request_id}, {"text", r.text}}.dump() << '\n';
	for (const auto &r : filtered.rejected) {
		rejected << json{{"request_id", r.result.request_id},
		                 {"text", r.result.text},
		                 {"reason", reject_reason_name(r.reason)},
		                 {"classifier_score", r.verdict.classifier_score},
		                 {"entropy_bits", r.verdict.entropy_bits}}
		                .dump()
		         << '\n';
	}
	a.add("mined_v1.jsonl", kept.str());
	a.add("rejected_v1.jsonl", rejected.str());
	log << "mined " << results.size() << " V1 prompts: kept " << filtered.kept.size() << ", rejected "
	    << filtered.rejected.size() << "\n";
}

void cmd_refine(const PipelineConfig &c, ArtifactSet &a, std::ostream &log) {
	const auto split = split_from(a, c);
	for (const auto &run : variant_runs(c)) {
		const auto pairs = build_run(run, split.test, c);
		std::ostringstream out;
		for (const auto &p : pairs) {
			json meta = {{"split_hour", p.split_hour}};
			if (run.variant == Variant::V4) meta = {{"cuts", p.target_cuts}, {"k", run.k}};
			out << json{{"variant", variant_name(p.variant)},
			            {"poi_id", p.window.poi.poi_id},
			            {"target_date", format_date(p.window.target.date)},
			            {"history_text", p.history_text},
			            {"future_text", p.future_text},
			            {"metadata", meta}}
			           .dump()
			    << '\n';
		}
		a.add("prompts_" + run.tag + ".jsonl", out.str());
		log << "refined " << pairs.size() << " " << run.tag << " prompt pairs\n";
	}
}

std::vector<MetricScope> scopes_for(const VariantRun &run) {
	if (run.variant == Variant::V4 && run.k != 2) return {MetricScope::SegmentAverage, MetricScope::Daily};
	return {MetricScope::SegmentAverage, MetricScope::FirstHalf, MetricScope::SecondHalf, MetricScope::Daily};
}

void cmd_evaluate(const PipelineConfig &c, ArtifactSet &a, std::ostream &log, const std::filesystem::path &dir) {
	const auto model = model_from(a, dir);
	const auto split = split_from(a, c);
	json rows = json::array();
	for (const auto &run : variant_runs(c)) {
		const auto pairs = build_run(run, split.test, c);
		std::vector<GenerationRequest> requests;
		std::map<std::string, std::string> ideal;
		std::vector<std::string> history;
		for (const auto &p : pairs) {
			GenerationRequest r;
			r.request_id = request_id(p.window, run.tag);
			r.prompt = p.history_text;
			ideal[r.request_id] = p.future_text;
			history.push_back(p.history_text);
			requests.push_back(std::move(r));
		}
		auto backend = make_backend(c, [&ideal](const GenerationRequest &r) { return ideal.at(r.request_id); });
		const auto results = generate_batch(*backend, requests, in_flight(c));
		std::vector<std::string> texts;
		for (const auto &r : results) texts.push_back(r.text);
		auto outcomes = batch::parse(texts, run.variant, expected_values(run));
		std::vector<ForecastTruth> truths;
		for (std::size_t i = 0; i < pairs.size(); ++i) {
			outcomes[i].window = key_of(pairs[i].window);
			truths.push_back(make_truth(pairs[i]));
		}

		std::ostringstream out;
		for (std::size_t i = 0; i < outcomes.size(); ++i) {
			const auto &o = outcomes[i];
			json j = {{"poi_id", o.window.poi_id},
			          {"target_date", format_date(o.window.target_date)},
			          {"variant", variant_name(o.variant)},
			          {"parsed_values", o.parsed_values},
			          {"effective_total", o.effective_total},
			          {"predicted_total", predicted_total(o, truths[i])},
			          {"true_total", truths[i].daily_total},
			          {"parse_status", parse_status_name(o.status)},
			          {"notes", o.notes}};
			j["stated_total"] = o.stated_total ? json(*o.stated_total) : json(nullptr);
			out << j.dump() << '\n';
		}
		a.add("outcomes_" + run.tag + ".jsonl", out.str());

		json metrics = json::object();
		for (auto scope : scopes_for(run)) {
			const auto m = compute_metrics(outcomes, truths, scope);
			metrics[std::string(metric_scope_name(scope))] = {
			    {"rmse", m.rmse}, {"mae", m.mae}, {"n_samples", m.n_samples}, {"parse_failure_rate", m.parse_failure_rate}};
		}
		// quality-gate statistics of the history prompts
		const auto entropies = batch::entropy(history);
		std::size_t passed = 0;
		double entropy_sum = 0.0;
		for (std::size_t i = 0; i < history.size(); ++i) {
			entropy_sum += entropies[i];
			passed += make_verdict(0, classify(model, history[i]).label, entropies[i], c.tau).passed;
		}
		const double n = history.empty() ? 1.0 : static_cast<double>(history.size());
		rows.push_back({{"model", backend_choice_name(c.backend)},
		                {"variant", variant_name(run.variant)},
		                {"tag", run.tag},
		                {"label", run.label},
		                {"metrics", metrics},
		                {"gate", {{"mean_entropy_bits", entropy_sum / n}, {"pass_rate", static_cast<double>(passed) / n}}}});
		const auto &daily = metrics["daily"];
		char buf[160];
		std::snprintf(buf, sizeof buf, "%s: daily RMSE %.4f MAE %.4f, parse failures %.4f (%zu windows)\n",
		              run.tag.c_str(), daily["rmse"].get<double>(), daily["mae"].get<double>(),
		              daily["parse_failure_rate"].get<double>(), outcomes.size());
		log << buf;
	}
	a.add(std::string(kMetrics), json{{"rows", rows}}.dump(2) + "\n");
}

void cmd_report(ArtifactSet &a, std::ostream &log) {
	json j;
	try {
		j = json::parse(a.read_input(kMetrics));
	} catch (const json::exception &e) {
		throw SchemaError(std::string("malformed metrics.json: ") + e.what());
	}
	std::vector<ReportRow> rows;
	for (const auto &r : j.at("rows")) {
		ReportRow row;
		row.model = r.at("model").get<std::string>();
		row.variant = parse_variant(r.at("variant").get<std::string>());
		row.label = r.at("label").get<std::string>();
		for (const auto &[scope, m] : r.at("metrics").items()) {
			MetricReport mr;
			mr.scope = parse_metric_scope(scope);
			mr.rmse = m.at("rmse").get<double>();
			mr.mae = m.at("mae").get<double>();
			mr.n_samples = m.at("n_samples").get<std::size_t>();
			mr.parse_failure_rate = m.at("parse_failure_rate").get<double>();
			row.metrics[mr.scope] = mr;
		}
		rows.push_back(std::move(row));
	}
	ReportLayout layout;
	layout.scopes = {MetricScope::SegmentAverage, MetricScope::FirstHalf, MetricScope::SecondHalf, MetricScope::Daily};
	const auto rendered = render_report(rows, layout);
	a.add("report.txt", rendered.text);
	a.add("report.csv", rendered.csv);
	log << rendered.text;
}

} // namespace

int run_command(std::string_view command, const PipelineConfig &config, std::ostream &log, std::ostream &err) {
	const auto dir = config.run_dir();
	try {
		ArtifactSet artifacts(dir);
		if (command == "synth") {
			cmd_synth(config, artifacts, log);
		} else if (command == "ingest") {
			cmd_ingest(config, artifacts, log);
		} else if (command == "split") {
			cmd_split(config, artifacts, log);
		} else if (command == "train-evaluator") {
			cmd_train_evaluator(config, artifacts, log);
		} else if (command == "emit-pairs") {
			cmd_emit_pairs(config, artifacts, log);
		} else if (command == "mine") {
			cmd_mine(config, artifacts, log, dir);
		} else if (command == "refine") {
			cmd_refine(config, artifacts, log);
		} else if (command == "evaluate") {
			cmd_evaluate(config, artifacts, log, dir);
		} else if (command == "report") {
			cmd_report(artifacts, log);
		} else {
			throw ConfigError("unknown command '" + std::string(command) + "'");
		}
		artifacts.commit(command, config_json(config), config.data_hash());
		log << "artifacts: " << dir.string() << "\n";
		return kExitOk;
	} catch (const BackendError &e) {
		err << json{{"status", "error"}, {"command", command}, {"kind", e.kind()}, {"message", e.what()},
		            {"attempts", e.attempts()}}
		           .dump()
		    << '\n';
		return kExitBackendError;
	} catch (const Error &e) {
		err << json{{"status", "error"}, {"command", command}, {"kind", e.kind()}, {"message", e.what()}}.dump() << '\n';
		return kExitUserError;
	} catch (const std::exception &e) {
		err << json{{"status", "error"}, {"command", command}, {"kind", "internal_error"}, {"message", e.what()}}.dump()
		    << '\n';
		return kExitUserError;
	}
}

} // namespace promptmine
