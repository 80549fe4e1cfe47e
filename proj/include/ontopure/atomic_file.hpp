#pragma once

#include <filesystem>
#include <functional>
#include <string_view>

namespace ontopure {

// Writes `data` to a temporary file next to `path`, fsyncs it, then renames it
// over `path`. A crash at any point leaves either the old or the new file in
// place, never a torn one. `before_rename` runs after the temp file is durable;
// if it throws, the temp file is removed and the target is untouched.
// Throws OntologyError(Io) on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view data,
                       const std::function<void()>& before_rename = {});

}  // namespace ontopure
