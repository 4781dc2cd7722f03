#include "odeim/manifest.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "odeim/error.hpp"

namespace odeim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void write_manifest(const Manifest& manifest, std::ostream& out) {
    for (const auto& [key, value] : manifest) out << key << "=" << value << "\n";
    if (!out) throw Error("manifest: write failed");
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("manifest: cannot open " + path + " for writing");
    write_manifest(manifest, out);
}

Manifest read_manifest(std::istream& in) {
    Manifest manifest;
    std::string line;
    while (std::getline(in, line)) {
        const std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ArgumentError("manifest: line without '=': " + entry);
        manifest.emplace_back(trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
    }
    return manifest;
}

Manifest read_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("manifest: cannot open " + path);
    return read_manifest(in);
}

std::optional<std::string> manifest_value(const Manifest& manifest, const std::string& key) {
    for (const auto& [k, v] : manifest)
        if (k == key) return v;
    return std::nullopt;
}

}  // namespace odeim
