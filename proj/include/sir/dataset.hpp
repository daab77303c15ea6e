#pragma once

#include <cstdint>
#include <string>

namespace sir {

// Synthetic golf-course table: Address, City, County, Phone, Course Type,
// Price, Holes, Difficulty, Terrain, Web page. Values come from fixed pools;
// the output depends only on (seed, n_rows). Throws std::invalid_argument
// when n_rows is 0.
std::string generate_dataset(std::uint32_t seed, std::size_t n_rows);

}  // namespace sir
