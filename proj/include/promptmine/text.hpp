#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace promptmine::text {

/// Decodes UTF-8 into Unicode scalar values. Invalid bytes decode as U+FFFD.
std::u32string decode_utf8(std::string_view bytes);

template <typename Int>
std::string join(std::span<const Int> values, std::string_view sep) {
	std::string out;
	for (std::size_t i = 0; i < values.size(); ++i) {
		if (i) out += sep;
		out += std::to_string(values[i]);
	}
	return out;
}

/// "HH:00"
std::string hour_label(int hour);

/// Maximal runs of ASCII digits, in order.
std::vector<std::int64_t> digit_runs(std::string_view s);

std::string lower(std::string_view s);

} // namespace promptmine::text
