// Command-line front end. Exit codes: 0 for the positive verdict (arrow
// holds, witness found), 1 for the contradicting or assumption-failing
// verdict, 2 for operational errors. Every run prints one JSON document with
// a run manifest and a report on `out`.

#ifndef GALLAI_CLI_H_
#define GALLAI_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace gallai {

inline constexpr const char* kToolVersion = "0.1.0";

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace gallai

#endif  // GALLAI_CLI_H_
