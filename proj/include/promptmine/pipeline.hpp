#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "promptmine/backend.hpp"
#include "promptmine/data.hpp"
#include "promptmine/refine.hpp"

namespace promptmine {

enum class BackendChoice { MockPerfect, MockNoisy, Http };

BackendChoice parse_backend_choice(std::string_view text);
std::string_view backend_choice_name(BackendChoice choice);

struct PipelineConfig {
	// data identity; these feed the run directory hash
	std::string source = "synth"; ///< "synth" or a records file path for `ingest`
	RecordFormat input_format = RecordFormat::Jsonl;
	int num_pois = 50;
	int synth_days = 7;
	PeakProfile profile = PeakProfile::Diurnal;
	std::uint64_t seed = 42;
	int n = 3;
	SplitFractions fractions;
	double pool_fraction = 0.20;

	// stage parameters
	double tau = kDefaultEntropyThreshold;
	int split_hour = kDefaultSplitHour;
	std::vector<std::size_t> k_list{2, 3, 4, 5};
	V4Segmentation mode = V4Segmentation::MinimizeGain;
	std::vector<Variant> variants{Variant::V1, Variant::V2, Variant::V3, Variant::V4};
	BackendChoice backend = BackendChoice::MockPerfect;
	double noise_rate = 0.05;
	std::uint64_t noise_seed = 7;
	HttpBackendConfig http;
	std::filesystem::path templates = default_template_dir();
	std::filesystem::path out = "out";

	/// Hash of the data-identity fields, 16 hex digits.
	std::string data_hash() const;
	std::filesystem::path run_dir() const { return out / ("run-" + data_hash()); }
};

/// `key = value` lines, `#` comments. Unknown keys are a ConfigError.
void apply_config_text(PipelineConfig &config, std::string_view text);
void apply_config_file(PipelineConfig &config, const std::filesystem::path &path);
/// Applies one key; the same keys as the config file.
void apply_config_value(PipelineConfig &config, std::string_view key, std::string_view value);

inline const std::vector<std::string> &pipeline_commands() {
	static const std::vector<std::string> commands{"ingest",    "synth",  "split",    "train-evaluator", "emit-pairs",
	                                               "mine",      "refine", "evaluate", "report"};
	return commands;
}

enum ExitCode { kExitOk = 0, kExitUserError = 1, kExitBackendError = 2 };

/// Runs one command. Artifacts land in config.run_dir(); progress goes to
/// `log`, a JSON error record to `err` on failure. Partial outputs are removed.
int run_command(std::string_view command, const PipelineConfig &config, std::ostream &log, std::ostream &err);

} // namespace promptmine
