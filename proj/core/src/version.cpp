#include "foilgen/version.hpp"

namespace foilgen {

std::string_view library_version() { return FOILGEN_VERSION_STRING; }

}  // namespace foilgen
