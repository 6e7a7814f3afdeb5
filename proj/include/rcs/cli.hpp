// cli.hpp: configuration documents, summary records and the rcs_cli commands.
//
// Config (JSON):
//   {"bands": [[-2, 2]],
//    "divisor": [{"gap_index": 0, "mu": "-inf", "s": 0}, {"gap_index": 1, "mu": "inf", "s": 0}],
//    "g": -0.5, "A_plus": 0, "D": 1}
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcs/systems.hpp"

namespace rcs::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kSchema = 2,
  kMath = 3,
  kIo = 4,
  kCaseMismatch = 5,
  kNormalForm = 6,
};

// Malformed document; the message starts with the offending field path.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemConfig {
  std::vector<Band> bands;
  Divisor divisor;
  Normalization norm;
};

// Schema checks only (exit 2 class); mathematical checks happen in to_system.
SystemConfig parse_config(const std::string& json_text);
SystemConfig load_config(const std::string& path);
std::string config_to_json(const SystemConfig& c);

// Throws ValidationError (exit 3 class).
ReflectionlessSystem to_system(const SystemConfig& c);
SystemConfig config_of(const ReflectionlessSystem& sys);

// Single "key=value ..." line; bands, mu, s, g, A_plus and D are enough to
// rebuild the system (see config_from_summary).
std::string summary_line(const ReflectionlessSystem& sys);
SystemConfig config_from_summary(const std::string& line);

// "const:a" with a real or +-inf, or a config path.
AnySystem load_system_or_constant(const std::string& source);

std::string fmt(double x);  // 17 significant digits

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rcs::cli
