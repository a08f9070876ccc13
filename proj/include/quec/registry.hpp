#pragma once

#include <string>
#include <vector>

#include "quec/codes.hpp"

namespace quec {

// Bundled fixtures:
//   bitflip3, phaseflip3      [[3,1]]_2 repetition codes (X resp. Z errors)
//   detect4                   [[4,2,2]]_2, detect-only
//   five_qubit                [[5,1,3]]_2
//   qutrit_x, qutrit_z        [[3,1]]_3 repetition codes (X^a resp. Z^b errors)
//   qutrit_erasure            [[3,1]]_3, errors on qutrit 2
//   shor9                     [[9,1,3]]_2
//   qutrit9                   [[9,1,3]]_3
const std::vector<std::string>& registry_names();
// Throws std::out_of_range for an unknown name.
CodeSpec registry_code(const std::string& name);

// Printed syndrome tables. Table labels are kept as printed; `error` is the
// operator they denote on the fixture's qudit ordering.
struct GoldenRow {
    std::string label;
    PauliWord error;
    Syndrome expected;
};

struct GoldenTable {
    std::string id;    // e.g. "S4-X"
    std::string code;  // registry name
    std::vector<GoldenRow> rows;
};

std::vector<GoldenTable> golden_tables();
std::vector<GoldenTable> golden_tables_for(const std::string& code);

// Generator sets that appear in print but are not the registry's choice,
// kept so the conflict can be checked mechanically.
struct PrintedGenerators {
    std::string code;
    std::vector<std::string> words;  // compact notation
};
std::vector<PrintedGenerators> printed_generator_variants();

}  // namespace quec
