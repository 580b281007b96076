#include "atomiso/fixtures.hpp"

#include <fstream>
#include <map>

#include "atomiso/errors.hpp"

namespace atomiso {

namespace {

constexpr const char* kVertices = "{{a, b} | a, b in atoms, a != b}";
constexpr const char* kKneserEdges =
    "{({a, b}, {c, d}) | a, b, c, d in atoms, a != b and a != c and a != d and b != c and b != d and c != d}";

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string structure(const std::string& backend, const std::string& name, const std::string& universe,
                      const std::vector<std::pair<std::string, std::string>>& binary,
                      const std::string& families = "") {
  std::string s = "{\n  \"backend\": " + quoted(backend) + ",\n  \"name\": " + quoted(name) +
                  ",\n  \"universe\": " + quoted(universe) + ",\n  \"relations\": [";
  for (std::size_t i = 0; i < binary.size(); ++i) {
    s += i ? ",\n" : "\n";
    s += "    {\"name\": " + quoted(binary[i].first) + ", \"arity\": 2, \"interp\": " + quoted(binary[i].second) + "}";
  }
  s += binary.empty() ? "]" : "\n  ]";
  s += ",\n  \"families\": [" + families + "]\n}\n";
  return s;
}

// A function from X to itself.
std::string function(const std::string& backend, const std::string& X, const std::string& graph) {
  return "{\n  \"backend\": " + quoted(backend) + ",\n  \"dom\": " + quoted(X) + ",\n  \"cod\": " + quoted(X) +
         ",\n  \"graph\": " + quoted(graph) + "\n}\n";
}

const std::map<std::string, std::vector<FixtureFile>>& corpus() {
  static const std::map<std::string, std::vector<FixtureFile>> k = [] {
    std::map<std::string, std::vector<FixtureFile>> m;
    m["kneser"] = {{"kneser.json", structure("equality", "kneser", kVertices, {{"E", kKneserEdges}})}};
    m["nondefiso"] = {
        {"nondefiso_A.json", structure("equality", "atoms", "atoms", {{"E", "empty"}})},
        {"nondefiso_B.json", structure("equality", "two-subsets", kVertices, {{"E", "empty"}})},
    };
    const std::string pairs_and_atoms = "{(a, b) | a, b in atoms} + atoms";
    m["smoothing"] = {
        {"smoothing_A.json", structure("equality", "smoothing", pairs_and_atoms, {})},
        {"smoothing_B.json", structure("equality", "smoothing", pairs_and_atoms, {})},
        {"smoothing_f.json", function("equality", pairs_and_atoms,
                                      "{(a, (a, #1)) | a in atoms} + {((a, #1), a) | a in atoms} + "
                                      "{((a, b), (a, b)) | a, b in atoms, b != #1}")},
    };
    const std::string triangles = "{(a, b, c) | a, b, c in atoms, R(a, b, c)}";
    m["circle"] = {
        {"circle_A.json", structure("cyclic", "circle-forward", triangles,
                                    {{"E", "{((a, b, c), (b, c, a)) | a, b, c in atoms, R(a, b, c)}"}})},
        {"circle_B.json", structure("cyclic", "circle-backward", triangles,
                                    {{"E", "{((a, b, c), (c, a, b)) | a, b, c in atoms, R(a, b, c)}"}})},
        {"circle_f.json", function("cyclic", triangles,
                                   "{((a, b, c), (a, b, c)) | a, b, c in atoms, R(a, b, c) and (R(c, 0, a) or 0 = a)} + "
                                   "{((a, b, c), (c, a, b)) | a, b, c in atoms, R(a, b, c) and (R(a, 0, b) or 0 = b)} + "
                                   "{((a, b, c), (b, c, a)) | a, b, c in atoms, R(a, b, c) and (R(b, 0, c) or 0 = c)}")},
    };
    m["neighborhoods"] = {{"neighborhoods.json",
                           structure("equality", "neighborhoods", kVertices, {{"E", kKneserEdges}},
                                     "\n    {\"name\": \"N\", \"arity\": 1, \"index\": " + quoted(kVertices) +
                                         ", \"interp\": " + quoted(kKneserEdges) + "}\n  ")}};
    return m;
  }();
  return k;
}

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : corpus()) out.push_back(name);
  return out;
}

const std::vector<FixtureFile>& fixture(const std::string& name) {
  auto it = corpus().find(name);
  if (it == corpus().end()) throw ValidationError("unknown fixture " + name);
  return it->second;
}

std::vector<std::filesystem::path> emit_fixture(const std::string& name, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& f : fixture(name)) {
    auto path = dir / f.filename;
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write " + path.string());
    os << f.json;
    out.push_back(path);
  }
  return out;
}

}  // namespace atomiso
