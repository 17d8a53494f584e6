#include "gallai/cnf.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <sstream>

namespace gallai {

CnfInstance encode_cnf(const AvoidanceProblem& problem) {
  CnfInstance inst;
  inst.num_points = problem.cfg.size();
  inst.r = problem.r;
  const int r = problem.r;

  std::map<PointPair, std::size_t> pair_index;
  for (const RectangleCopy& rect : problem.rainbow_forbidden) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        PointPair pair{rect.corners[i], rect.corners[j]};
        if (pair.p > pair.q) std::swap(pair.p, pair.q);
        pair_index.emplace(pair, 0);
      }
    }
  }
  for (auto& [pair, index] : pair_index) {
    index = inst.equality_pairs.size();
    inst.equality_pairs.push_back(pair);
  }
  inst.num_vars = inst.num_points * r +
                  static_cast<int>(inst.equality_pairs.size()) * (1 + r);

  auto& clauses = inst.clauses;
  for (PointId p = 0; p < inst.num_points; ++p) {
    std::vector<int> at_least_one;
    for (Color c = 0; c < r; ++c) at_least_one.push_back(inst.assignment_var(p, c));
    clauses.push_back(std::move(at_least_one));
    for (Color c = 0; c < r; ++c) {
      for (Color d = c + 1; d < r; ++d) {
        clauses.push_back({-inst.assignment_var(p, c), -inst.assignment_var(p, d)});
      }
    }
  }

  for (const SegmentCopy& seg : problem.mono_forbidden) {
    for (Color c = 0; c < r; ++c) {
      clauses.push_back(
          {-inst.assignment_var(seg.p, c), -inst.assignment_var(seg.q, c)});
    }
  }

  for (std::size_t k = 0; k < inst.equality_pairs.size(); ++k) {
    const auto [p, q] = inst.equality_pairs[k];
    const int e = inst.equality_var(k);
    std::vector<int> e_implies_some = {-e};
    for (Color c = 0; c < r; ++c) {
      const int z = inst.conjunction_var(k, c);
      const int xp = inst.assignment_var(p, c);
      const int xq = inst.assignment_var(q, c);
      clauses.push_back({-z, xp});
      clauses.push_back({-z, xq});
      clauses.push_back({-xp, -xq, z});
      clauses.push_back({-z, e});
      e_implies_some.push_back(z);
    }
    clauses.push_back(std::move(e_implies_some));
  }

  for (const RectangleCopy& rect : problem.rainbow_forbidden) {
    std::vector<int> some_equal;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        PointPair pair{rect.corners[i], rect.corners[j]};
        if (pair.p > pair.q) std::swap(pair.p, pair.q);
        some_equal.push_back(inst.equality_var(pair_index.at(pair)));
      }
    }
    std::sort(some_equal.begin(), some_equal.end());
    clauses.push_back(std::move(some_equal));
  }
  return inst;
}

void write_dimacs(const CnfInstance& instance, std::ostream& out) {
  out << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << '\n';
  for (const auto& clause : instance.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
}

std::string to_dimacs(const CnfInstance& instance) {
  std::ostringstream out;
  write_dimacs(instance, out);
  return out.str();
}

std::variant<Coloring, Unsatisfiable> parse_model(const CnfInstance& instance,
                                                  std::string_view text) {
  std::optional<bool> satisfiable;
  std::vector<int> values(instance.num_vars + 1, 0);  // 0 unset, +1, -1
  bool terminated = false;

  std::size_t line_no = 0;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const char tag = line[first];
    const std::string rest = line.substr(first + 1);
    if (tag == 'c') continue;
    if (tag == 's') {
      std::istringstream words(rest);
      std::string status;
      words >> status;
      if (status == "SATISFIABLE") {
        satisfiable = true;
      } else if (status == "UNSATISFIABLE") {
        satisfiable = false;
      } else {
        throw CnfError("line " + std::to_string(line_no) +
                       ": unrecognized status '" + status + "'");
      }
      continue;
    }
    if (tag != 'v') {
      throw CnfError("line " + std::to_string(line_no) +
                     ": expected 'c', 's' or 'v' line");
    }
    std::istringstream words(rest);
    std::string word;
    while (words >> word) {
      int lit = 0;
      const auto [ptr, ec] =
          std::from_chars(word.data(), word.data() + word.size(), lit);
      if (ec != std::errc() || ptr != word.data() + word.size()) {
        throw CnfError("line " + std::to_string(line_no) + ": bad literal '" +
                       word + "'");
      }
      if (lit == 0) {
        terminated = true;
        continue;
      }
      const int var = lit < 0 ? -lit : lit;
      if (var > instance.num_vars) {
        throw CnfError("literal " + word + " exceeds variable count " +
                       std::to_string(instance.num_vars));
      }
      values[var] = lit < 0 ? -1 : 1;
    }
  }

  if (!satisfiable) throw CnfError("solver output has no status line");
  if (!*satisfiable) return Unsatisfiable{};
  if (!terminated) throw CnfError("model is not terminated by 0");

  Coloring coloring{instance.r, std::vector<Color>(instance.num_points, -1)};
  for (PointId p = 0; p < instance.num_points; ++p) {
    for (Color c = 0; c < instance.r; ++c) {
      if (values[instance.assignment_var(p, c)] <= 0) continue;
      if (coloring.colors[p] >= 0) {
        throw CnfError("model assigns two colors to point " + std::to_string(p));
      }
      coloring.colors[p] = c;
    }
    if (coloring.colors[p] < 0) {
      throw CnfError("model assigns no color to point " + std::to_string(p));
    }
  }
  return coloring;
}

}  // namespace gallai
