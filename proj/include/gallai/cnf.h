// Propositional encoding of an avoidance problem for external SAT solvers.
//
// Variable layout (1-based, DIMACS):
//   x(p, c) = p * r + c + 1                      assignment variables
//   e(pair) = N * r + k + 1                      one per distinct pair k that
//                                                occurs in some rectangle,
//                                                pairs in lexicographic order
//   z(pair, c) = N * r + E + k * r + c + 1       z <-> x(p, c) & x(q, c)
// Clause order: exactly-one groups per point, monochromatic-segment clauses,
// equality definitions per pair, one "some pair equal" clause per rectangle.

#ifndef GALLAI_CNF_H_
#define GALLAI_CNF_H_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gallai/geometry.h"
#include "gallai/search.h"

namespace gallai {

class CnfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CnfInstance {
  PointId num_points = 0;
  int r = 0;
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<PointPair> equality_pairs;  // index k -> pair of e-variable k

  int assignment_var(PointId p, Color c) const { return p * r + c + 1; }
  int equality_var(std::size_t k) const {
    return num_points * r + static_cast<int>(k) + 1;
  }
  int conjunction_var(std::size_t k, Color c) const {
    return num_points * r + static_cast<int>(equality_pairs.size()) +
           static_cast<int>(k) * r + c + 1;
  }
};

CnfInstance encode_cnf(const AvoidanceProblem& problem);

void write_dimacs(const CnfInstance& instance, std::ostream& out);
std::string to_dimacs(const CnfInstance& instance);

struct Unsatisfiable {};

// Parses SAT-competition solver output ("s SATISFIABLE" / "s UNSATISFIABLE",
// "v <lits> ... 0" lines, "c" comments) and decodes the assignment variables.
// Throws CnfError on malformed output or a model that violates an
// exactly-one group.
std::variant<Coloring, Unsatisfiable> parse_model(const CnfInstance& instance,
                                                  std::string_view text);

}  // namespace gallai

#endif  // GALLAI_CNF_H_
