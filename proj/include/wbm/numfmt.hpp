#pragma once

#include <string>

namespace wbm {

/// Shortest decimal form that parses back to exactly the same double; keeps
/// emitted files both readable and bit-reproducible.
std::string format_number(double value);

}  // namespace wbm
