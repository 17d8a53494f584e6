// JSON schemas for configurations, colorings, witnesses and pipeline
// verdicts, plus file helpers. Reals are written with 17 significant digits.

#ifndef GALLAI_IO_H_
#define GALLAI_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "gallai/geometry.h"
#include "gallai/proof.h"
#include "gallai/search.h"

namespace gallai {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Indented JSON; arrays of scalars stay on one line.
std::string dump_json(const Json& value);
std::string format_real(double value);

Json provenance_to_json(const Provenance& prov);
Provenance provenance_from_json(const Json& j);

Json configuration_to_json(const Configuration& cfg);
// Re-validates every designated pair against its declared length.
Configuration configuration_from_json(const Json& j,
                                      double eps = kDistanceTolerance);

Json coloring_to_json(const Coloring& coloring);
Coloring coloring_from_json(const Json& j);

Json witness_to_json(const Witness& witness, const Configuration& cfg);
Witness witness_from_json(const Json& j);

Json verdict_to_json(const PipelineVerdict& verdict, const Configuration& world);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

std::string sha256_hex(const std::string& bytes);

}  // namespace gallai

#endif  // GALLAI_IO_H_
