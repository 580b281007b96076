#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace atomiso {

struct FixtureFile {
  std::string filename;
  std::string json;
};

/// Names of the bundled fixtures.
std::vector<std::string> fixture_names();

/// Files making up a fixture. Throws ValidationError for an unknown name.
const std::vector<FixtureFile>& fixture(const std::string& name);

/// Writes the fixture's files into dir and returns their paths.
std::vector<std::filesystem::path> emit_fixture(const std::string& name, const std::filesystem::path& dir);

}  // namespace atomiso
