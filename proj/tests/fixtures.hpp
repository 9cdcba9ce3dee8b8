#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "promptmine/types.hpp"

namespace fixtures {

using namespace promptmine;

inline const HourlySeries kMon{0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 2, 0, 2, 1, 0, 0, 0, 0, 1, 0, 0, 0};
inline const HourlySeries kTue{0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 2, 1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1};
inline const HourlySeries kWed{0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 3, 0, 0, 1, 0, 0};
inline const HourlySeries kThu{0, 1, 0, 1, 0, 0, 1, 2, 1, 0, 0, 1, 3, 0, 1, 2, 0, 1, 0, 1, 0, 0, 2, 0};

inline Date day(int d) { return std::chrono::year{2022} / std::chrono::December / d; }

/// The Mobil store in Osseo, open around the clock, Mon-Wed history, Thu target.
inline ForecastWindow mobil_window() {
	ForecastWindow w;
	w.poi = PoiMeta{"poi-mobil", "Mobil", "WI, Osseo", 0, 24};
	w.history = {DayRecord::make(day(26), kMon), DayRecord::make(day(27), kTue), DayRecord::make(day(28), kWed)};
	w.target = DayRecord::make(day(29), kThu);
	return w;
}

inline ForecastWindow constant_window(std::int64_t c, int open = 0, int close = 24) {
	HourlySeries s{};
	s.fill(c);
	ForecastWindow w;
	w.poi = PoiMeta{"poi-const", "Acme", "TX, Austin", open, close};
	w.history = {DayRecord::make(day(26), s), DayRecord::make(day(27), s), DayRecord::make(day(28), s)};
	w.target = DayRecord::make(day(29), s);
	return w;
}

inline const std::string kInitialText =
    "In Region WI, Osseo, what is the daily human mobility of Mobil Store from Mon to Wed? "
    "[0,0,0,0,0,0,0,0,1,0,1,1,2,0,2,1,0,0,0,0,1,0,0,0,0,0,0,0,1,0,0,1,1,0,0,1,2,1,1,0,0,0,1,1,0,1,0,1,"
    "0,0,0,0,0,1,0,0,1,1,1,1,0,0,1,1,1,0,3,0,0,1,0,0].";

inline const std::string kV1History =
    "This is a Mobil in WI, Osseo. The human mobility of the past 3 days are: "
    "0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 2, 0, 2, 1, 0, 0, 0, 0, 1, 0, 0, 0 people (per hour) came here from "
    "00:00 to 24:00 (working time) on Mon. "
    "0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 2, 1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1 people (per hour) came here from "
    "00:00 to 24:00 (working time) on Tue. "
    "0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 3, 0, 0, 1, 0, 0 people (per hour) came here from "
    "00:00 to 24:00 (working time) on Wed. How many people will visit this place tomorrow?";

inline const std::string kV1Future =
    "On Thu, there are 0, 1, 0, 1, 0, 0, 1, 2, 1, 0, 0, 1, 3, 0, 1, 2, 0, 1, 0, 1, 0, 0, 2, 0 people who will "
    "visit Mobil during working time.";

inline const std::string kV3Future =
    "On Thu, there will be 7 people to visit Mobil during the first half of the work shift and 10 people to visit "
    "Mobil during the latter half of the work shift. Therefore, there are 17 people will visit here.";

inline const std::string kV4Future =
    "On Thu, there will be 3, 5, 2, 7 people to visit Mobil during these 4 different time segments. Therefore, "
    "there are 17 people will visit Mobil on Thu.";

} // namespace fixtures
