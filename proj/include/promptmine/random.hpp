#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace promptmine {

inline std::uint64_t splitmix64(std::uint64_t x) {
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c : bytes) {
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

/// Seeded generator whose draws are identical across standard libraries
/// (the distribution adaptors in <random> are implementation-defined).
class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	std::uint64_t next() { return engine_(); }

	/// Uniform in [0, n).
	std::size_t index(std::size_t n) {
		const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
		std::uint64_t r;
		do {
			r = engine_();
		} while (r >= limit);
		return static_cast<std::size_t>(r % n);
	}

	/// Uniform in [0, 1) with 53 bits.
	double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

	template <typename T>
	void shuffle(std::vector<T> &items) {
		for (std::size_t i = items.size(); i > 1; --i) {
			std::swap(items[i - 1], items[index(i)]);
		}
	}

	std::mt19937_64 &engine() { return engine_; }

private:
	std::mt19937_64 engine_;
};

} // namespace promptmine
