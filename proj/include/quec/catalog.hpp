#pragma once

#include <string>
#include <vector>

#include "quec/codes.hpp"

namespace quec {

// Plain-text code catalog. Grammar (one item per line, '#' starts a comment):
//
//   code <name>
//   d <int>
//   n <int>
//   k <int>
//   inputs <int>...              logical input positions
//   mode strict|detection|degenerate
//   detect_only 0|1
//   circuit                      followed by serialize_circuit lines, then "end"
//   stabilizers                  followed by "<phase> <compact word>" lines, then "end"
//   correctable                  same line form as stabilizers, then "end"
//   syndromes                    followed by "<r_1 .. r_m> : <phase> <compact word>", then "end"
//   endcode
//
// Phases are in units of i (d = 2) or w (odd d); compact words use I, X^a, Z^b
// tokens such as "XZ2".
std::string write_catalog(const std::vector<CodeSpec>& codes);
// Throws std::invalid_argument naming the offending line.
std::vector<CodeSpec> read_catalog(const std::string& text);

void save_catalog(const std::string& path, const std::vector<CodeSpec>& codes);
std::vector<CodeSpec> load_catalog(const std::string& path);

}  // namespace quec
