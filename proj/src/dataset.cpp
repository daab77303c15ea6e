#include "sir/dataset.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace sir {

namespace {

struct Weighted {
  std::string_view value;
  unsigned weight;
};

struct Place {
  std::string_view city;
  std::string_view county;
  unsigned weight;
};

constexpr Place kPlaces[] = {
    {"Anderson", "Madison", 2},    {"Greenfield", "Hancock", 2},   {"Coars", "Hamilton", 1},
    {"Skellyville", "Skelly", 1},  {"Greenwood (Waters)", "Johnson", 1}, {"Marion", "Marion", 10},
    {"Hickory", "Hamilton", 1},    {"Lafayette", "Madison", 1},    {"Carmel", "Hamilton", 1},
    {"Brownsburg", "Hendricks", 1}, {"Clovesdale", "Putnam", 1},   {"Kendallville", "Holtz", 1},
    {"Lebanon", "Boone", 3},       {"Hamilton", "Hamilton", 1},    {"Franklin", "Jefferson", 1},
    {"Clayton (Belleville)", "Hendricks", 1}, {"Franklin (Amity)", "Johnson", 1},
    {"Mooresville", "Morgan", 1},  {"Ellettswood", "Madison", 1},
};

constexpr Weighted kCourseType[] = {{"Public", 6}, {"Private", 1}, {"Open to public", 1}};
constexpr Weighted kPrice[] = {{"Low", 5}, {"Moderate", 3}, {"Premium", 3}};
constexpr Weighted kHoles[] = {{"9", 3}, {"18", 6}, {"36", 1}};
constexpr Weighted kDifficulty[] = {{"Easy", 3}, {"Moderate", 4}, {"Hard", 3}, {"Executive", 1}};
constexpr Weighted kTerrain[] = {{"Varied", 3}, {"Flat", 4}, {"Rolling", 4}, {"Hilly", 1}};

constexpr std::string_view kStreets[] = {
    "Northshore Blvd", "Club House Dr", "E. 22nd St.", "N. Riley Hwy", "Greenack Road", "W. 19th St.",
    "W. Kessler Blvd", "Drakeshire Pkwy", "E. Feltz Rd", "Cobblestone Lane", "Cold Spring Rd",
    "Country Club Rd", "Hwy Augusta Rd", "Running Tree Lane", "S. Franklin Rd", "Golf Club Rd",
    "Perry Warth Rd", "W. 58th St.", "N. 100th", "E. 131st St.",
};

constexpr std::string_view kAreaCodes[] = {"317", "755", "219"};

// Plain modulo over raw engine output: std::*_distribution results differ
// between standard libraries, mt19937's raw sequence does not.
template <typename T, std::size_t N>
const T& pick(std::mt19937& rng, const T (&pool)[N]) {
  unsigned total = 0;
  for (const auto& p : pool) total += p.weight;
  unsigned r = rng() % total;
  for (const auto& p : pool) {
    if (r < p.weight) return p;
    r -= p.weight;
  }
  return pool[N - 1];
}

unsigned uniform(std::mt19937& rng, unsigned lo, unsigned hi) { return lo + rng() % (hi - lo + 1); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string generate_dataset(std::uint32_t seed, std::size_t n_rows) {
  if (n_rows == 0) throw std::invalid_argument("n_rows must be at least 1");
  std::mt19937 rng(seed);
  std::ostringstream out;
  out << "Address,City,County,Phone,Course Type,Price,Holes,Difficulty,Terrain,Web page\n";
  for (std::size_t i = 0; i < n_rows; ++i) {
    const auto& place = pick(rng, kPlaces);
    const auto& type = pick(rng, kCourseType);
    const auto& price = pick(rng, kPrice);
    const auto& holes = pick(rng, kHoles);
    const auto& difficulty = pick(rng, kDifficulty);
    const auto& terrain = pick(rng, kTerrain);
    const auto number = uniform(rng, 100, 12999);
    const auto street = kStreets[rng() % std::size(kStreets)];
    const auto area = kAreaCodes[rng() % std::size(kAreaCodes)];
    const auto exchange = uniform(rng, 200, 999);
    const auto line = uniform(rng, 1000, 9999);

    const std::vector<std::string> fields{
        std::to_string(number) + " " + std::string(street),
        std::string(place.city),
        std::string(place.county),
        std::string(area) + "-" + std::to_string(exchange) + "-" + std::to_string(line),
        std::string(type.value),
        std::string(price.value),
        std::string(holes.value),
        std::string(difficulty.value),
        std::string(terrain.value),
        "http://www.holegolf.com/show",
    };
    for (std::size_t f = 0; f < fields.size(); ++f) out << (f ? "," : "") << csv_field(fields[f]);
    out << "\n";
  }
  return out.str();
}

}  // namespace sir
