#pragma once

#include <string>

namespace afesim {

/// Writes content to path via a temporary file plus rename, so partial
/// outputs are never left behind.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace afesim
