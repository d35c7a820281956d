#pragma once

namespace chiralpinem {

inline const char* version_string() { return "0.1.0"; }

}  // namespace chiralpinem
