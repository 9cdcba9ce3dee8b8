#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "promptmine/errors.hpp"
#include "promptmine/pipeline.hpp"

int main(int argc, char **argv) {
	using namespace promptmine;

	CLI::App app{"promptmine: prompt mining and refinement for POI visit forecasting"};
	app.require_subcommand(1);
	app.fallthrough();

	std::string config_path;
	// Flags are collected as raw strings and applied on top of the config file.
	std::vector<std::pair<std::string, std::string>> overrides;
	const auto flag = [&](const std::string &name, const std::string &key, const std::string &help) {
		app.add_option_function<std::string>(
		       name, [&overrides, key](const std::string &v) { overrides.emplace_back(key, v); }, help)
		    ->group("Pipeline");
	};

	app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
	flag("--seed", "seed", "seed for synthesis, splitting and training");
	flag("--variant", "variant", "comma-separated v1..v4, or all");
	flag("--k", "k", "comma-separated segment counts for v4");
	flag("--mode", "mode", "v4 segmentation: minimize-eq5, maximize-ig or diurnal");
	flag("--backend", "backend", "mock-perfect, mock-noisy or http");
	flag("--tau", "tau", "entropy threshold in bits");
	flag("--out", "out", "output root");
	flag("--source", "source", "records file for ingest");
	flag("--input", "source", "alias of --source");
	flag("--format", "format", "records format: jsonl or csv");
	flag("--num-pois", "num_pois", "synthetic POI count");
	flag("--days", "days", "synthetic days per POI");
	flag("--profile", "profile", "synthetic profile: flat or diurnal");
	flag("--n", "n", "history days per window");
	flag("--split-hour", "split_hour", "hour splitting the work shift");
	flag("--noise-rate", "noise_rate", "corruption rate of the noisy mock");
	flag("--url", "url", "generation service base URL");
	flag("--templates", "templates", "template directory");

	for (const auto &command : pipeline_commands()) app.add_subcommand(command, "run the " + command + " stage");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int code = app.exit(e);
		return code == 0 ? kExitOk : kExitUserError;
	}

	PipelineConfig config;
	try {
		if (!config_path.empty()) apply_config_file(config, config_path);
		for (const auto &[key, value] : overrides) apply_config_value(config, key, value);
	} catch (const Error &e) {
		std::cerr << nlohmann::json{{"status", "error"}, {"kind", e.kind()}, {"message", e.what()}}.dump() << '\n';
		return kExitUserError;
	}
	const auto *sub = app.get_subcommands().front();
	return run_command(sub->get_name(), config, std::cout, std::cerr);
}
