#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "disamb/error.hpp"
#include "disamb/util.hpp"

namespace disamb {

/// One publication: the alias list as printed, optionally the gold entity per alias.
struct PaperRecord {
  std::string paper_id;
  std::vector<std::string> aliases;
  std::optional<std::vector<std::string>> entities;

  bool operator==(const PaperRecord&) const = default;
};

/// One occurrence of the disputed alias: the classification instance.
struct Persona {
  std::string paper_id;
  std::string entity;

  bool operator==(const Persona&) const = default;
};

/// An alias mapped to two or more gold entities, with its per-paper occurrences.
struct AmbiguousCase {
  std::string alias;
  std::vector<Persona> personas;     // ordered by paper_id
  std::vector<std::string> entities; // distinct gold entities, sorted; class index = position
  std::size_t class_count = 0;       // == entities.size(), >= 2
};

enum class CorpusFormat { jsonl, csv };

namespace detail {

inline void validate_record(const PaperRecord& rec) {
  if (rec.aliases.empty())
    throw ValidationError("paper '" + rec.paper_id + "': empty alias list");
  std::set<std::string> seen;
  for (const auto& a : rec.aliases) {
    if (a.empty())
      throw ValidationError("paper '" + rec.paper_id + "': empty alias");
    if (!seen.insert(a).second)
      throw ValidationError("paper '" + rec.paper_id + "': duplicate alias '" + a + "'");
  }
  if (rec.entities && rec.entities->size() != rec.aliases.size())
    throw ValidationError("paper '" + rec.paper_id + "': entities length " +
                          std::to_string(rec.entities->size()) + " does not match aliases length " +
                          std::to_string(rec.aliases.size()));
}

// Minimal RFC-4180-style parsing: fields separated by ',', quoted with '"',
// embedded quotes doubled. No multi-line fields.
inline std::vector<std::string> parse_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          i += 2;
        } else {
          quoted = false;
          ++i;
        }
      } else {
        cur += ch;
        ++i;
      }
    } else if (ch == '"') {
      if (!cur.empty())
        throw ValidationError("line " + std::to_string(line_no) + ": stray quote in csv field");
      quoted = true;
      ++i;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
      ++i;
    } else {
      cur += ch;
      ++i;
    }
  }
  if (quoted)
    throw ValidationError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(cur);
  return fields;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> trimmed_list(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  out.reserve(in.size());
  for (const auto& s : in) out.push_back(trim(s));
  return out;
}

}  // namespace detail

/// Parse a corpus stream. Records come back in input order; aliases and
/// entities are whitespace-trimmed, everything else byte-for-byte.
inline std::vector<PaperRecord> load_corpus(std::istream& in, CorpusFormat format) {
  std::vector<PaperRecord> records;
  std::set<std::string> paper_ids;
  std::string line;
  std::size_t line_no = 0;
  bool saw_csv_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    PaperRecord rec;
    if (format == CorpusFormat::jsonl) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!j.is_object() || !j.contains("paper_id") || !j.contains("aliases"))
        throw ValidationError("line " + std::to_string(line_no) +
                              ": object with 'paper_id' and 'aliases' required");
      try {
        rec.paper_id = j.at("paper_id").get<std::string>();
        rec.aliases = detail::trimmed_list(j.at("aliases").get<std::vector<std::string>>());
        if (j.contains("entities") && !j.at("entities").is_null())
          rec.entities = detail::trimmed_list(j.at("entities").get<std::vector<std::string>>());
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      auto fields = detail::parse_csv_line(line, line_no);
      if (line_no == 1 && !fields.empty() && trim(fields[0]) == "paper_id") {
        saw_csv_header = true;
        continue;
      }
      if (fields.size() < 2 || fields.size() > 3)
        throw ValidationError("line " + std::to_string(line_no) +
                              ": expected 2 or 3 csv columns, got " +
                              std::to_string(fields.size()));
      rec.paper_id = fields[0];
      rec.aliases = detail::trimmed_list(split(fields[1], ';'));
      if (fields.size() == 3 && !trim(fields[2]).empty())
        rec.entities = detail::trimmed_list(split(fields[2], ';'));
    }
    detail::validate_record(rec);
    if (!paper_ids.insert(rec.paper_id).second)
      throw ValidationError("duplicate paper_id '" + rec.paper_id + "' (line " +
                            std::to_string(line_no) + ")");
    records.push_back(std::move(rec));
  }
  (void)saw_csv_header;
  return records;
}

inline std::vector<PaperRecord> load_corpus(const std::string& text, CorpusFormat format) {
  std::istringstream in(text);
  return load_corpus(in, format);
}

inline void save_corpus(const std::vector<PaperRecord>& records, std::ostream& out,
                        CorpusFormat format) {
  if (format == CorpusFormat::jsonl) {
    for (const auto& rec : records) {
      nlohmann::ordered_json j;
      j["paper_id"] = rec.paper_id;
      j["aliases"] = rec.aliases;
      if (rec.entities) j["entities"] = *rec.entities;
      out << j.dump() << '\n';
    }
  } else {
    out << "paper_id,aliases,entities\n";
    for (const auto& rec : records) {
      auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (xs[i].find(';') != std::string::npos)
            throw ValidationError("value '" + xs[i] + "' contains ';', not representable in csv");
          if (i) s += ';';
          s += xs[i];
        }
        return s;
      };
      out << detail::csv_escape(rec.paper_id) << ',' << detail::csv_escape(join(rec.aliases))
          << ',' << (rec.entities ? detail::csv_escape(join(*rec.entities)) : std::string())
          << '\n';
    }
  }
}

/// Group gold-labelled occurrences by alias and keep the aliases naming two or
/// more distinct entities. Cases are ordered by alias, personas by paper_id.
inline std::vector<AmbiguousCase> extract_ambiguous_cases(const std::vector<PaperRecord>& corpus) {
  for (const auto& rec : corpus)
    if (!rec.entities)
      throw ValidationError("gold standard required: paper '" + rec.paper_id +
                            "' carries no entities");
  // alias -> list of (paper_id, entity)
  std::map<std::string, std::vector<Persona>> occurrences;
  for (const auto& rec : corpus)
    for (std::size_t i = 0; i < rec.aliases.size(); ++i)
      occurrences[rec.aliases[i]].push_back({rec.paper_id, (*rec.entities)[i]});

  std::vector<AmbiguousCase> cases;
  for (auto& [alias, personas] : occurrences) {
    std::set<std::string> ents;
    for (const auto& p : personas) ents.insert(p.entity);
    if (ents.size() < 2) continue;
    AmbiguousCase c;
    c.alias = alias;
    c.personas = personas;
    std::sort(c.personas.begin(), c.personas.end(),
              [](const Persona& a, const Persona& b) { return a.paper_id < b.paper_id; });
    c.entities.assign(ents.begin(), ents.end());
    c.class_count = c.entities.size();
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace disamb
