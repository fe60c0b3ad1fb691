#include "finmeas/cli/instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "finmeas/errors.hpp"

namespace finmeas::cli {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) {
    out.push_back(w);
  }
  return out;
}

bool valid_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Builder {
 public:
  void set_atoms(std::size_t count, std::size_t line) {
    if (atom_count_) {
      throw ParseError(line, "'atoms' declared twice");
    }
    if (count == 0) {
      throw ParseError(line, "atom count must be positive");
    }
    atom_count_ = count;
    instance_.atom_count = count;
  }

  void set_names(std::vector<std::string> names, std::size_t line) {
    require_atoms(line, "'names'");
    if (!instance_.names.empty()) {
      throw ParseError(line, "'names' declared twice");
    }
    if (names.size() != *atom_count_) {
      throw ParseError(line, "expected " + std::to_string(*atom_count_) + " atom names, got " +
                                 std::to_string(names.size()));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!valid_name(names[i]) || all_digits(names[i])) {
        throw ParseError(line, "invalid atom name '" + names[i] + "'");
      }
      if (!name_index_.emplace(names[i], i).second) {
        throw ParseError(line, "duplicate atom name '" + names[i] + "'");
      }
    }
    instance_.names = std::move(names);
  }

  void begin_family(const std::string& name, std::size_t line) {
    require_atoms(line, "families");
    check_new_name(name, line, "family");
    if (std::any_of(instance_.families.begin(), instance_.families.end(),
                    [&](const NamedFamily& f) { return f.name == name; })) {
      throw ParseError(line, "family '" + name + "' defined twice");
    }
    instance_.families.push_back({name, {}, line});
  }

  void add_set(Element set, std::size_t line) {
    if (set.is_zero()) {
      throw ParseError(line, "empty set in family '" + instance_.families.back().name + "'");
    }
    instance_.families.back().sets.push_back(std::move(set));
  }

  void begin_decomposition(const std::string& name, std::size_t line) {
    require_atoms(line, "decompositions");
    check_new_name(name, line, "decomposition");
    if (std::any_of(instance_.decompositions.begin(), instance_.decompositions.end(),
                    [&](const NamedDecomposition& d) { return d.name == name; })) {
      throw ParseError(line, "decomposition '" + name + "' defined twice");
    }
    instance_.decompositions.push_back({name, {}, line});
  }

  void add_level(const std::string& family, std::size_t line) {
    if (!valid_name(family)) {
      throw ParseError(line, "invalid family reference '" + family + "'");
    }
    instance_.decompositions.back().levels.push_back(family);
    level_lines_.emplace_back(instance_.decompositions.size() - 1, line);
  }

  Element parse_set(std::string_view text, std::size_t line) const {
    if (text.front() != '{') {
      if (text.size() != *atom_count_) {
        throw ParseError(line, "bitstring '" + std::string(text) + "' has length " +
                                   std::to_string(text.size()) + ", expected " +
                                   std::to_string(*atom_count_));
      }
      try {
        return Element::from_bitstring(text);
      } catch (const InputError& e) {
        throw ParseError(line, e.what());
      }
    }
    if (text.back() != '}') {
      throw ParseError(line, "unterminated set '" + std::string(text) + "'");
    }
    std::string body(text.substr(1, text.size() - 2));
    std::replace(body.begin(), body.end(), ',', ' ');
    std::vector<std::size_t> atoms;
    for (const auto& token : words(body)) {
      atoms.push_back(atom_index(token, line));
    }
    return Element::from_indices(*atom_count_, atoms);
  }

  InstanceFile finish() {
    if (!atom_count_) {
      throw ParseError(0, "missing 'atoms' declaration");
    }
    std::vector<std::size_t> seen(instance_.decompositions.size(), 0);
    for (const auto& [d, line] : level_lines_) {
      const auto& name = instance_.decompositions[d].levels[seen[d]++];
      if (std::none_of(instance_.families.begin(), instance_.families.end(),
                       [&](const NamedFamily& f) { return f.name == name; })) {
        throw ParseError(line, "decomposition '" + instance_.decompositions[d].name +
                                   "' refers to undefined family '" + name + "'");
      }
    }
    for (const auto& d : instance_.decompositions) {
      if (d.levels.empty()) {
        throw ParseError(d.line, "decomposition '" + d.name + "' has no levels");
      }
    }
    return std::move(instance_);
  }

 private:
  void require_atoms(std::size_t line, const std::string& what) const {
    if (!atom_count_) {
      throw ParseError(line, what + " must follow the 'atoms' declaration");
    }
  }

  static void check_new_name(const std::string& name, std::size_t line, const std::string& kind) {
    if (!valid_name(name)) {
      throw ParseError(line, "invalid " + kind + " name '" + name + "'");
    }
  }

  std::size_t atom_index(const std::string& token, std::size_t line) const {
    if (all_digits(token)) {
      std::size_t value = 0;
      try {
        value = std::stoul(token);
      } catch (const std::exception&) {
        throw ParseError(line, "atom index '" + token + "' out of range");
      }
      if (value >= *atom_count_) {
        throw ParseError(line, "atom index " + token + " out of range [0, " +
                                   std::to_string(*atom_count_) + ")");
      }
      return value;
    }
    const auto it = name_index_.find(token);
    if (it == name_index_.end()) {
      throw ParseError(line, "unknown atom '" + token + "'");
    }
    return it->second;
  }

  std::optional<std::size_t> atom_count_;
  std::map<std::string, std::size_t> name_index_;
  InstanceFile instance_;
  std::vector<std::pair<std::size_t, std::size_t>> level_lines_;
};

// "family name:" or "family name :" -> name
std::optional<std::string> section_name(const std::vector<std::string>& w) {
  if (w.size() == 2 && w[1].size() > 1 && w[1].back() == ':') {
    return w[1].substr(0, w[1].size() - 1);
  }
  if (w.size() == 3 && w[2] == ":") {
    return w[1];
  }
  return std::nullopt;
}

std::string json_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

const NamedFamily& InstanceFile::family(std::string_view name) const {
  for (const auto& f : families) {
    if (f.name == name) {
      return f;
    }
  }
  throw InputError("no family named '" + std::string(name) + "'");
}

Family InstanceFile::to_family(const NamedFamily& family) const {
  if (family.sets.empty()) {
    const std::string what = "family '" + family.name + "' has no sets";
    if (family.line > 0) {
      throw ParseError(family.line, what);
    }
    throw InputError(what);
  }
  return Family(family.sets);
}

std::vector<Family> InstanceFile::all_families() const {
  if (families.empty()) {
    throw InputError("instance defines no families");
  }
  std::vector<Family> out;
  for (const auto& f : families) {
    out.push_back(to_family(f));
  }
  return out;
}

InstanceFile parse_instance(std::string_view text) {
  enum class Section { None, Family, Decomposition };
  Builder builder;
  Section section = Section::None;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto w = words(line);
    if (w[0] == "atoms") {
      if (w.size() != 2 || !all_digits(w[1])) {
        throw ParseError(line_no, "expected 'atoms <count>'");
      }
      builder.set_atoms(std::stoul(w[1]), line_no);
      section = Section::None;
    } else if (w[0] == "names") {
      builder.set_names({w.begin() + 1, w.end()}, line_no);
      section = Section::None;
    } else if (w[0] == "family" || w[0] == "decomposition") {
      const auto name = section_name(w);
      if (!name) {
        throw ParseError(line_no, "expected '" + w[0] + " <name>:'");
      }
      if (w[0] == "family") {
        builder.begin_family(*name, line_no);
        section = Section::Family;
      } else {
        builder.begin_decomposition(*name, line_no);
        section = Section::Decomposition;
      }
    } else if (section == Section::Family) {
      // Sets may contain spaces inside braces; bitstrings are one word.
      if (line.front() != '{' && w.size() != 1) {
        throw ParseError(line_no, "expected one set per line");
      }
      builder.add_set(builder.parse_set(line, line_no), line_no);
    } else if (section == Section::Decomposition) {
      for (const auto& ref : w) {
        builder.add_level(ref, line_no);
      }
    } else {
      throw ParseError(line_no, "unexpected '" + w[0] + "' outside a family or decomposition");
    }
  }
  return builder.finish();
}

InstanceFile parse_instance_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  auto fail = [](const std::string& where, const std::string& what) -> ParseError {
    return ParseError(0, where + ": " + what);
  };
  if (!doc.is_object()) {
    throw fail("$", "expected an object");
  }
  Builder builder;
  if (!doc.contains("atoms") || !doc["atoms"].is_number_unsigned()) {
    throw fail("atoms", "expected a positive integer");
  }
  builder.set_atoms(doc["atoms"].get<std::size_t>(), 0);

  if (doc.contains("names")) {
    if (!doc["names"].is_array()) {
      throw fail("names", "expected an array of strings");
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < doc["names"].size(); ++i) {
      if (!doc["names"][i].is_string()) {
        throw fail(json_path("names", i), "expected a string");
      }
      names.push_back(doc["names"][i].get<std::string>());
    }
    builder.set_names(std::move(names), 0);
  }

  const json families = doc.value("families", json::array());
  if (!families.is_array()) {
    throw fail("families", "expected an array");
  }
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto where = json_path("families", f);
    const auto& entry = families[f];
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
      throw fail(where, "expected an object with a string 'name'");
    }
    try {
      builder.begin_family(entry["name"].get<std::string>(), 0);
      const json sets = entry.value("sets", json::array());
      if (!sets.is_array()) {
        throw fail(where + ".sets", "expected an array");
      }
      for (std::size_t s = 0; s < sets.size(); ++s) {
        const auto set_where = json_path(where + ".sets", s);
        const auto& set = sets[s];
        if (set.is_string()) {
          builder.add_set(builder.parse_set(set.get<std::string>(), 0), 0);
        } else if (set.is_array()) {
          std::string listed = "{";
          for (const auto& atom : set) {
            if (atom.is_number_unsigned()) {
              listed += std::to_string(atom.get<std::size_t>()) + " ";
            } else if (atom.is_string()) {
              listed += atom.get<std::string>() + " ";
            } else {
              throw fail(set_where, "atoms must be indices or names");
            }
          }
          builder.add_set(builder.parse_set(listed + "}", 0), 0);
        } else {
          throw fail(set_where, "expected a bitstring or an array of atoms");
        }
      }
    } catch (const ParseError& e) {
      if (std::string_view(e.what()).starts_with(where)) {
        throw;
      }
      throw fail(where, e.what());
    }
  }

  const json decompositions = doc.value("decompositions", json::array());
  if (!decompositions.is_array()) {
    throw fail("decompositions", "expected an array");
  }
  for (std::size_t d = 0; d < decompositions.size(); ++d) {
    const auto where = json_path("decompositions", d);
    const auto& entry = decompositions[d];
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("levels") || !entry["levels"].is_array()) {
      throw fail(where, "expected an object with 'name' and 'levels'");
    }
    try {
      builder.begin_decomposition(entry["name"].get<std::string>(), 0);
      for (const auto& level : entry["levels"]) {
        if (!level.is_string()) {
          throw fail(where + ".levels", "expected family names");
        }
        builder.add_level(level.get<std::string>(), 0);
      }
    } catch (const ParseError& e) {
      if (std::string_view(e.what()).starts_with(where)) {
        throw;
      }
      throw fail(where, e.what());
    }
  }
  try {
    return builder.finish();
  } catch (const ParseError& e) {
    throw fail("decompositions", e.what());
  }
}

InstanceFile load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read instance file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (path.extension() == ".json") {
    return parse_instance_json(buffer.str());
  }
  return parse_instance(buffer.str());
}

std::string serialize_text(const InstanceFile& instance) {
  std::ostringstream out;
  out << "atoms " << instance.atom_count << "\n";
  if (!instance.names.empty()) {
    out << "names";
    for (const auto& n : instance.names) {
      out << " " << n;
    }
    out << "\n";
  }
  for (const auto& f : instance.families) {
    out << "\nfamily " << f.name << ":\n";
    for (const auto& s : f.sets) {
      out << "  " << s.bitstring() << "\n";
    }
  }
  for (const auto& d : instance.decompositions) {
    out << "\ndecomposition " << d.name << ":\n";
    for (const auto& level : d.levels) {
      out << "  " << level << "\n";
    }
  }
  return out.str();
}

std::string serialize_json(const InstanceFile& instance) {
  json doc;
  doc["atoms"] = instance.atom_count;
  if (!instance.names.empty()) {
    doc["names"] = instance.names;
  }
  doc["families"] = json::array();
  for (const auto& f : instance.families) {
    json sets = json::array();
    for (const auto& s : f.sets) {
      sets.push_back(s.indices());
    }
    doc["families"].push_back({{"name", f.name}, {"sets", sets}});
  }
  doc["decompositions"] = json::array();
  for (const auto& d : instance.decompositions) {
    doc["decompositions"].push_back({{"name", d.name}, {"levels", d.levels}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace finmeas::cli
