// Compares two CSV tables written by rydsub: identical headers and metadata
// (apart from keys given with --ignore), numbers equal within a tolerance.
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "rydsub/io.hpp"

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: rydsub_compare_csv expected.csv actual.csv [--tol 1e-8] [--ignore key]...\n";
    return 2;
  }
  double tol = 1e-8;
  std::set<std::string> ignore;
  for (int i = 3; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--tol")) tol = std::stod(argv[i + 1]);
    else if (!std::strcmp(argv[i], "--ignore")) ignore.insert(argv[i + 1]);
  }
  std::ifstream fa(argv[1]), fb(argv[2]);
  if (!fa || !fb) {
    std::cerr << "cannot open inputs\n";
    return 2;
  }
  const auto a = rydsub::io::read_csv(fa);
  const auto b = rydsub::io::read_csv(fb);
  int bad = 0;
  for (const auto* m : {&a.meta, &b.meta})
    for (const auto& [k, v] : *m) {
      if (ignore.count(k)) continue;
      const auto& other = m == &a.meta ? b.meta : a.meta;
      const auto it = other.find(k);
      if (it == other.end() || it->second != v) {
        std::cerr << "metadata differs: " << k << '\n';
        ++bad;
      }
    }
  if (a.columns != b.columns || a.rows.size() != b.rows.size()) {
    std::cerr << "table shape differs\n";
    return 1;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.columns.size(); ++j) {
      const double d = std::abs(a.rows[i][j] - b.rows[i][j]);
      worst = std::max(worst, d);
      if (d > tol * std::max(1.0, std::abs(a.rows[i][j]))) {
        if (bad < 20) std::cerr << "row " << i << " column " << a.columns[j] << ": " << a.rows[i][j] << " vs " << b.rows[i][j] << '\n';
        ++bad;
      }
    }
  std::cout << argv[2] << ": max abs difference " << worst << (bad ? " FAIL" : " ok") << '\n';
  return bad ? 1 : 0;
}
