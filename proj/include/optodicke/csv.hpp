#pragma once

// File output shared by the CLI and benchmarks.

#include <filesystem>
#include <string>
#include <string_view>

namespace optodicke {

// %.17g, the round-trip format used by every CSV emitter.
std::string format_double(double v);

// Creates parent directories; throws ValidationError when the file cannot be written.
void write_text(const std::filesystem::path& path, std::string_view text);

} // namespace optodicke
