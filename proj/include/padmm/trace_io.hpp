#pragma once

#include <iosfwd>
#include <string>

#include "padmm/solver.hpp"

namespace padmm {

/// JSON Lines: one header object, then one object per iteration. Doubles are
/// written with 17 significant digits so re-reading is bit-exact; infinities
/// are written as the strings "inf"/"-inf".
void write_trace(std::ostream& out, const Trace& t);
void write_trace_file(const std::string& path, const Trace& t);
std::string trace_to_string(const Trace& t);

Trace read_trace(std::istream& in);
Trace read_trace_file(const std::string& path);

}  // namespace padmm
