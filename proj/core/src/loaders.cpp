#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chronorder/corpus.hpp"
#include "chronorder/error.hpp"

namespace chronorder {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void strip_bom(std::string& s) {
  if (s.size() >= 3 && s.compare(0, 3, "\xEF\xBB\xBF") == 0) s.erase(0, 3);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<int> parse_year(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
  }
  return std::stoi(std::string(s));
}

Document make_document(std::string id, std::optional<int> year, std::string_view text,
                       const TokenizeOptions& options, const std::string& where) {
  if (id.empty()) throw ParseError(where + ": empty id");
  Document doc{std::move(id), year, tokenize(text, options)};
  if (doc.tokens.empty()) {
    throw ValidationError(where + ": document '" + doc.id + "' has no tokens after normalization");
  }
  return doc;
}

std::vector<Document> load_jsonl(const fs::path& path, const TokenizeOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) strip_bom(line);
    if (trim(line).empty()) continue;
    const std::string where = path.filename().string() + " line " + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!rec.is_object()) throw ParseError(where + ": record is not an object");
    if (!rec.contains("id") || !rec["id"].is_string()) {
      throw ParseError(where + ": missing string field 'id'");
    }
    const std::string id = rec["id"].get<std::string>();
    const std::string rec_where = where + " (id '" + id + "')";
    if (!rec.contains("text") || !rec["text"].is_string()) {
      throw ParseError(rec_where + ": missing string field 'text'");
    }
    std::optional<int> year;
    if (rec.contains("date") && !rec["date"].is_null()) {
      if (!rec["date"].is_number_integer()) throw ParseError(rec_where + ": 'date' must be an integer");
      year = rec["date"].get<int>();
    }
    docs.push_back(make_document(id, year, rec["text"].get<std::string>(), options, rec_where));
  }
  return docs;
}

// RFC 4180 records; quoted fields may contain commas, quotes ("") and newlines.
std::vector<std::vector<std::string>> parse_csv(const std::string& text, const std::string& name) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) {
          throw ParseError(name + " line " + std::to_string(line) + ": stray quote in field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::exchange(field, {}));
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::exchange(field, {}));
        rows.push_back(std::exchange(row, {}));
        field_started = false;
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError(name + ": unterminated quoted field");
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Document> load_csv(const fs::path& path, const TokenizeOptions& options) {
  std::string text = read_file(path);
  strip_bom(text);
  const std::string name = path.filename().string();
  auto rows = parse_csv(text, name);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  if (header.size() != 3 || trim(header[0]) != "id" || trim(header[1]) != "date" ||
      trim(header[2]) != "text") {
    throw ParseError(name + ": header must be 'id,date,text'");
  }
  std::vector<Document> docs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    const std::string where = name + " record " + std::to_string(r);
    if (row.size() != 3) {
      throw ParseError(where + ": expected 3 fields, got " + std::to_string(row.size()));
    }
    std::optional<int> year;
    const std::string date = trim(row[1]);
    if (!date.empty()) {
      year = parse_year(date);
      if (!year) throw ParseError(where + " (id '" + row[0] + "'): date '" + date + "' is not an integer");
    }
    docs.push_back(make_document(trim(row[0]), year, row[2], options,
                                 where + " (id '" + row[0] + "')"));
  }
  return docs;
}

std::vector<Document> load_directory(const fs::path& path, const TokenizeOptions& options) {
  if (!fs::is_directory(path)) throw ValidationError("'" + path.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  for (const auto& file : files) {
    const std::string stem = file.stem().string();
    std::string id = stem;
    std::optional<int> year;
    if (const auto us = stem.rfind('_'); us != std::string::npos && us > 0) {
      if (auto y = parse_year(std::string_view(stem).substr(us + 1))) {
        year = y;
        id = stem.substr(0, us);
      }
    }
    docs.push_back(make_document(id, year, read_file(file), options, file.filename().string()));
  }
  return docs;
}

}  // namespace

Corpus load_corpus(const fs::path& path, CorpusFormat format, const TokenizeOptions& options) {
  if (!fs::exists(path)) throw ValidationError("corpus path '" + path.string() + "' does not exist");
  std::vector<Document> docs;
  switch (format) {
    case CorpusFormat::jsonl: docs = load_jsonl(path, options); break;
    case CorpusFormat::csv: docs = load_csv(path, options); break;
    case CorpusFormat::directory: docs = load_directory(path, options); break;
  }
  if (docs.empty()) throw ValidationError("no documents in '" + path.string() + "'");
  return Corpus(std::move(docs));
}

}  // namespace chronorder
