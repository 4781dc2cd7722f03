#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace odeim {

// Ordered key=value pairs; the text form is one pair per line with '#'
// comment lines ignored on read.
using Manifest = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const Manifest& manifest, std::ostream& out);
void write_manifest(const Manifest& manifest, const std::string& path);

Manifest read_manifest(std::istream& in);
Manifest read_manifest_file(const std::string& path);

std::optional<std::string> manifest_value(const Manifest& manifest, const std::string& key);

}  // namespace odeim
