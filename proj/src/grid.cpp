#include "swarmgame/grid.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace swarmgame {

double Grid::sum() const {
  double s = 0.0;
  for (double v : cells_) s += v;
  return s;
}

CellIndex cell_of(Vec2 s, int size) {
  auto idx = [size](double v) {
    const int i = static_cast<int>(std::floor(v * size));
    return std::clamp(i, 0, size - 1);
  };
  return {idx(s.y), idx(s.x)};
}

void write_grid(std::ostream& os, const Grid& g) {
  const auto old_precision = os.precision(17);
  for (int r = 0; r < g.size(); ++r) {
    for (int c = 0; c < g.size(); ++c) {
      if (c) os << ' ';
      os << g.at(r, c);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

Grid read_grid(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw std::runtime_error("grid line " + std::to_string(line_no) + ": bad value '" + tok + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::runtime_error("grid: empty input");
  Grid g(n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n) {
      throw std::runtime_error("grid row " + std::to_string(r + 1) + ": expected " +
                               std::to_string(n) + " values");
    }
    for (int c = 0; c < n; ++c) g.at(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return g;
}

}  // namespace swarmgame
