#pragma once

#include <filesystem>
#include <string>

namespace pathmap::zipfile {

/// Packs a directory tree into a stored (uncompressed) ZIP archive with
/// fixed timestamps, so identical trees produce identical archives.
void pack_directory(const std::filesystem::path& directory,
                    const std::filesystem::path& archive_path);

} // namespace pathmap::zipfile
