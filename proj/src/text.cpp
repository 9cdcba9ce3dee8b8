#include "promptmine/text.hpp"

#include <cctype>
#include <cstdio>

namespace promptmine::text {

std::u32string decode_utf8(std::string_view bytes) {
	constexpr char32_t kReplacement = 0xFFFD;
	std::u32string out;
	out.reserve(bytes.size());
	std::size_t i = 0;
	while (i < bytes.size()) {
		const auto b0 = static_cast<unsigned char>(bytes[i]);
		int extra = 0;
		char32_t cp = 0;
		if (b0 < 0x80) {
			out.push_back(b0);
			++i;
			continue;
		} else if ((b0 & 0xE0) == 0xC0) {
			extra = 1;
			cp = b0 & 0x1F;
		} else if ((b0 & 0xF0) == 0xE0) {
			extra = 2;
			cp = b0 & 0x0F;
		} else if ((b0 & 0xF8) == 0xF0) {
			extra = 3;
			cp = b0 & 0x07;
		} else {
			out.push_back(kReplacement);
			++i;
			continue;
		}
		if (i + extra >= bytes.size()) {
			out.push_back(kReplacement);
			++i;
			continue;
		}
		bool ok = true;
		for (int j = 1; j <= extra; ++j) {
			const auto b = static_cast<unsigned char>(bytes[i + j]);
			if ((b & 0xC0) != 0x80) {
				ok = false;
				break;
			}
			cp = (cp << 6) | (b & 0x3F);
		}
		static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
		if (!ok || cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
			out.push_back(kReplacement);
			++i;
			continue;
		}
		out.push_back(cp);
		i += extra + 1;
	}
	return out;
}

std::string hour_label(int hour) {
	char buf[8];
	std::snprintf(buf, sizeof buf, "%02d:00", hour);
	return buf;
}

std::vector<std::int64_t> digit_runs(std::string_view s) {
	std::vector<std::int64_t> out;
	std::size_t i = 0;
	while (i < s.size()) {
		if (std::isdigit(static_cast<unsigned char>(s[i]))) {
			std::int64_t v = 0;
			while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
				v = v * 10 + (s[i] - '0');
				++i;
			}
			out.push_back(v);
		} else {
			++i;
		}
	}
	return out;
}

std::string lower(std::string_view s) {
	std::string out(s);
	for (auto &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	return out;
}

} // namespace promptmine::text
