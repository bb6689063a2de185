#pragma once

#include <cstdint>
#include <string>

namespace smdg {

// Fixed scientific notation, 6 significant digits. All numeric CSV content
// goes through this so identical runs produce identical bytes.
std::string fmt_sci(double v);

// FNV-1a 64-bit, hex string; used for the config hash stamped on outputs.
std::string fnv1a_hex(const std::string& data);

} // namespace smdg
