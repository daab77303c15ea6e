// sir_oracle: gold answers by brute-force scan.
//
//   sir_oracle <table.csv> <query>      print the answer as JSON
//   sir_oracle --fill <corpus.tasks>    rewrite every gold: line that follows
//                                       a gold-query: line, in place

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "oracle.hpp"

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int fill(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 1;
  }
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  in.close();

  std::optional<oracle::Sheet> sheet;
  std::string pending;
  std::size_t filled = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.rfind("dataset:", 0) == 0) {
      auto dir = std::filesystem::path(path).parent_path();
      sheet = oracle::read_csv_file((dir / trim(line.substr(8))).string());
    } else if (line.rfind("gold-query:", 0) == 0) {
      pending = trim(line.substr(11));
    } else if (line.rfind("gold:", 0) == 0 && !pending.empty()) {
      if (!sheet) {
        std::cerr << path << ":" << i + 1 << ": gold-query before dataset\n";
        return 1;
      }
      lines[i] = "gold: " + oracle::answer(oracle::parse_query(pending, *sheet), *sheet).dump();
      pending.clear();
      ++filled;
    } else if (line == "end") {
      pending.clear();
    }
  }
  std::ofstream out(path);
  for (auto& l : lines) out << l << "\n";
  std::cerr << "filled " << filled << " gold answers\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    if (argc == 3 && std::string(argv[1]) == "--fill") return fill(argv[2]);
    if (argc != 3) {
      std::cerr << "usage: sir_oracle <table.csv> <query> | sir_oracle --fill <corpus.tasks>\n";
      return 1;
    }
    auto sheet = oracle::read_csv_file(argv[1]);
    std::cout << oracle::answer(oracle::parse_query(argv[2], sheet), sheet).dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "sir_oracle: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
