#pragma once

#include <string_view>

namespace foilgen {

/// "major.minor.patch" of this build; stamped into every dataset record.
std::string_view library_version();

}  // namespace foilgen
