#include "promptmine/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "promptmine/errors.hpp"
#include "promptmine/random.hpp"

namespace promptmine {

using json = nlohmann::json;

std::vector<std::string> tokenize(std::string_view text) {
	std::vector<std::string> tokens;
	std::string cur;
	for (char ch : text) {
		const auto c = static_cast<unsigned char>(ch);
		// bytes >= 0x80 belong to multi-byte UTF-8 symbols and stay in the token
		if (std::isalnum(c) || c >= 0x80) {
			cur += static_cast<char>(std::tolower(c));
		} else if (!cur.empty()) {
			tokens.push_back(std::move(cur));
			cur.clear();
		}
	}
	if (!cur.empty()) tokens.push_back(std::move(cur));
	return tokens;
}

std::vector<std::uint32_t> hashed_features(std::string_view text, std::size_t feature_dim) {
	const auto tokens = tokenize(text);
	std::vector<std::uint32_t> idx;
	idx.reserve(tokens.size() * 2);
	std::string key;
	for (std::size_t i = 0; i < tokens.size(); ++i) {
		key = "u:" + tokens[i];
		idx.push_back(static_cast<std::uint32_t>(fnv1a64(key) % feature_dim));
		if (i + 1 < tokens.size()) {
			key = "b:" + tokens[i] + ' ' + tokens[i + 1];
			idx.push_back(static_cast<std::uint32_t>(fnv1a64(key) % feature_dim));
		}
	}
	std::sort(idx.begin(), idx.end());
	idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
	return idx;
}

namespace {

double sigmoid(double z) {
	if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
	const double e = std::exp(z);
	return e / (1.0 + e);
}

// log(1 + exp(-m))
double softplus_neg(double m) { return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)); }

struct Problem {
	std::vector<std::vector<std::uint32_t>> features;
	std::vector<int> labels;
	std::size_t dim;
	double c;

	// theta = [w..., b]
	double evaluate(const std::vector<double> &theta, std::vector<double> &grad) const {
		grad.assign(theta.size(), 0.0);
		double f = 0.0;
		const double b = theta[dim];
		for (std::size_t i = 0; i < features.size(); ++i) {
			double z = b;
			for (auto j : features[i]) z += theta[j];
			const double y = labels[i] ? 1.0 : -1.0;
			f += c * softplus_neg(y * z);
			const double r = c * (sigmoid(z) - (labels[i] ? 1.0 : 0.0));
			for (auto j : features[i]) grad[j] += r;
			grad[dim] += r;
		}
		for (std::size_t j = 0; j < dim; ++j) {
			f += 0.5 * theta[j] * theta[j];
			grad[j] += theta[j];
		}
		return f;
	}
};

double dot(const std::vector<double> &a, const std::vector<double> &b) {
	double s = 0.0;
	for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
	return s;
}

double max_abs(const std::vector<double> &v) {
	double m = 0.0;
	for (double x : v) m = std::max(m, std::abs(x));
	return m;
}

} // namespace

ClassifierModel train_classifier(std::span<const LabeledText> corpus, std::uint64_t /*seed*/,
                                 ClassifierHyperparams hp, std::size_t feature_dim) {
	// Full-batch L-BFGS from a zero start is deterministic without any draws;
	// the seed is accepted for interface symmetry with the corpus builders.
	bool has0 = false, has1 = false;
	for (const auto &item : corpus) (item.label ? has1 : has0) = true;
	if (!has0 || !has1) throw DegenerateCorpusError("classifier corpus must contain both labels");
	if (feature_dim == 0) throw ConfigError("feature_dim must be positive");

	Problem prob{{}, {}, feature_dim, hp.l2_inverse_strength};
	prob.features.reserve(corpus.size());
	for (const auto &item : corpus) {
		prob.features.push_back(hashed_features(item.text, feature_dim));
		prob.labels.push_back(item.label ? 1 : 0);
	}

	const std::size_t n = feature_dim + 1;
	std::vector<double> theta(n, 0.0), grad, next(n), next_grad, dir(n);
	double f = prob.evaluate(theta, grad);

	std::deque<std::vector<double>> s_hist, y_hist;
	std::deque<double> rho_hist;
	int iter = 0;
	while (iter < hp.max_iterations && max_abs(grad) > hp.gradient_tolerance) {
		// two-loop recursion
		dir = grad;
		std::vector<double> alpha(s_hist.size());
		for (std::size_t i = s_hist.size(); i-- > 0;) {
			alpha[i] = rho_hist[i] * dot(s_hist[i], dir);
			for (std::size_t j = 0; j < n; ++j) dir[j] -= alpha[i] * y_hist[i][j];
		}
		double gamma = 1.0;
		if (!s_hist.empty()) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
		for (auto &d : dir) d *= gamma;
		for (std::size_t i = 0; i < s_hist.size(); ++i) {
			const double beta = rho_hist[i] * dot(y_hist[i], dir);
			for (std::size_t j = 0; j < n; ++j) dir[j] += s_hist[i][j] * (alpha[i] - beta);
		}
		for (auto &d : dir) d = -d;

		double slope = dot(grad, dir);
		if (slope >= 0) { // not a descent direction; restart from steepest descent
			s_hist.clear();
			y_hist.clear();
			rho_hist.clear();
			for (std::size_t j = 0; j < n; ++j) dir[j] = -grad[j];
			slope = dot(grad, dir);
		}
		double step = s_hist.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(grad, grad))) : 1.0;

		// backtracking line search with the Armijo condition
		double f_next = 0.0;
		bool accepted = false;
		for (int ls = 0; ls < 40; ++ls) {
			for (std::size_t j = 0; j < n; ++j) next[j] = theta[j] + step * dir[j];
			f_next = prob.evaluate(next, next_grad);
			if (f_next <= f + 1e-4 * step * slope) {
				accepted = true;
				break;
			}
			step *= 0.5;
		}
		++iter;
		if (!accepted) break;

		std::vector<double> s(n), y(n);
		for (std::size_t j = 0; j < n; ++j) {
			s[j] = next[j] - theta[j];
			y[j] = next_grad[j] - grad[j];
		}
		const double sy = dot(s, y);
		if (sy > 1e-10) {
			s_hist.push_back(std::move(s));
			y_hist.push_back(std::move(y));
			rho_hist.push_back(1.0 / sy);
			if (static_cast<int>(s_hist.size()) > hp.history_size) {
				s_hist.pop_front();
				y_hist.pop_front();
				rho_hist.pop_front();
			}
		}
		theta.swap(next);
		grad.swap(next_grad);
		f = f_next;
	}

	ClassifierModel model;
	model.feature_dim = feature_dim;
	model.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(feature_dim));
	model.bias = theta[feature_dim];
	model.hyperparams = hp;
	model.iterations_run = iter;
	model.final_gradient_norm = max_abs(grad);
	return model;
}

Classification classify(const ClassifierModel &model, std::string_view text) {
	double z = model.bias;
	for (auto j : hashed_features(text, model.feature_dim)) z += model.weights[j];
	Classification c;
	c.score = sigmoid(z);
	c.label = c.score >= 0.5 ? 1 : 0;
	return c;
}

double accuracy(const ClassifierModel &model, std::span<const LabeledText> corpus) {
	if (corpus.empty()) return 0.0;
	std::size_t correct = 0;
	for (const auto &item : corpus) correct += classify(model, item.text).label == item.label;
	return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

QualityVerdict gate(const ClassifierModel &model, std::string_view text, double threshold) {
	const double h = char_entropy_bits(text);
	const auto c = classify(model, text);
	return make_verdict(c.score, c.label, h, threshold);
}

std::string model_to_json(const ClassifierModel &model) {
	json j;
	j["format_version"] = 1;
	j["feature_dim"] = model.feature_dim;
	j["bias"] = model.bias;
	j["weights"] = model.weights;
	j["hyperparams"] = {{"l2_inverse_strength", model.hyperparams.l2_inverse_strength},
	                    {"max_iterations", model.hyperparams.max_iterations},
	                    {"gradient_tolerance", model.hyperparams.gradient_tolerance},
	                    {"history_size", model.hyperparams.history_size}};
	j["iterations_run"] = model.iterations_run;
	j["final_gradient_norm"] = model.final_gradient_norm;
	return j.dump();
}

ClassifierModel model_from_json(std::string_view text) {
	try {
		const auto j = json::parse(text);
		if (j.at("format_version").get<int>() != 1) throw SchemaError("unsupported model format version");
		ClassifierModel m;
		m.feature_dim = j.at("feature_dim").get<std::size_t>();
		m.bias = j.at("bias").get<double>();
		m.weights = j.at("weights").get<std::vector<double>>();
		if (m.weights.size() != m.feature_dim) throw SchemaError("model weight count does not match feature_dim");
		const auto &hp = j.at("hyperparams");
		m.hyperparams.l2_inverse_strength = hp.at("l2_inverse_strength").get<double>();
		m.hyperparams.max_iterations = hp.at("max_iterations").get<int>();
		m.hyperparams.gradient_tolerance = hp.at("gradient_tolerance").get<double>();
		m.hyperparams.history_size = hp.at("history_size").get<int>();
		m.iterations_run = j.at("iterations_run").get<int>();
		m.final_gradient_norm = j.at("final_gradient_norm").get<double>();
		return m;
	} catch (const json::exception &e) {
		throw SchemaError(std::string("malformed model file: ") + e.what());
	}
}

void save_model(const ClassifierModel &model, const std::filesystem::path &path) {
	std::ofstream out(path);
	if (!out) throw IoError("cannot write " + path.string());
	out << model_to_json(model) << '\n';
}

ClassifierModel load_model(const std::filesystem::path &path) {
	if (!std::filesystem::exists(path)) throw IoError("model not found: " + path.string());
	std::ifstream in(path);
	if (!in) throw IoError("cannot open " + path.string());
	std::stringstream ss;
	ss << in.rdbuf();
	return model_from_json(ss.str());
}

} // namespace promptmine
