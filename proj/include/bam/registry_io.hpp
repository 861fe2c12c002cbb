#ifndef BAM_REGISTRY_IO_HPP
#define BAM_REGISTRY_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bam/builder.hpp"

namespace bam {

/// Monitor file: a JSON document tagged `"format": "bam-monitor"` with an
/// integer `schema_version`. Bounds are written in shortest round-trip decimal
/// form, so load(save(r)) reproduces every bound bit for bit. See
/// docs/formats.md for the field layout.
inline constexpr const char* kMonitorFormat = "bam-monitor";
inline constexpr int kMonitorSchemaVersion = 1;

void write_registry(const MonitorRegistry& registry, std::ostream& out);
std::string registry_to_string(const MonitorRegistry& registry);
MonitorRegistry read_registry(std::istream& in);

void save_registry(const MonitorRegistry& registry, const std::filesystem::path& path);
MonitorRegistry load_registry(const std::filesystem::path& path);

} // namespace bam

#endif // BAM_REGISTRY_IO_HPP
