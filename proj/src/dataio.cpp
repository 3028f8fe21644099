#include "vsparse/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vsparse {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw std::runtime_error(msg.str());
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return in;
}

bool parse_int(const std::string& token, long& value) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

RawDataset read_edge_list(const std::string& path, int index_base) {
  if (index_base != 0 && index_base != 1) {
    throw std::invalid_argument("read_edge_list: index_base must be 0 or 1");
  }
  std::ifstream in = open_or_throw(path);
  RawDataset raw;
  raw.format = "edgelist";

  std::string line;
  int line_no = 0;
  long max_vertex = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream fields(cleaned);
    std::string a, b, extra;
    if (!(fields >> a)) continue;          // blank line
    if (a[0] == '#' || a[0] == '%') continue;  // comment
    if (!(fields >> b)) parse_fail(path, line_no, "expected two vertex ids");
    if (fields >> extra && !extra.empty() && extra[0] != '#' && extra[0] != '%') {
      parse_fail(path, line_no, "trailing content after edge");
    }
    long u = 0;
    long v = 0;
    if (!parse_int(a, u) || !parse_int(b, v)) {
      parse_fail(path, line_no, "malformed vertex id in '" + line + "'");
    }
    u -= index_base;
    v -= index_base;
    if (u < 0 || v < 0) parse_fail(path, line_no, "vertex id below index base");
    raw.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_vertex = std::max({max_vertex, u, v});
  }
  raw.n = static_cast<int>(max_vertex + 1);
  raw.vertex_class.assign(static_cast<std::size_t>(raw.n), "");
  return raw;
}

namespace {

struct GmlToken {
  enum class Kind { Key, Number, String, Open, Close, End } kind = Kind::End;
  std::string text;
  int line = 0;
};

class GmlLexer {
 public:
  GmlLexer(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  GmlToken next() {
    skip_space_and_comments();
    GmlToken token;
    token.line = line_;
    int c = in_.peek();
    if (c == EOF) return token;
    if (c == '[') {
      in_.get();
      token.kind = GmlToken::Kind::Open;
      return token;
    }
    if (c == ']') {
      in_.get();
      token.kind = GmlToken::Kind::Close;
      return token;
    }
    if (c == '"') {
      in_.get();
      std::string value;
      while ((c = in_.get()) != EOF && c != '"') {
        if (c == '\n') ++line_;
        value.push_back(static_cast<char>(c));
      }
      if (c == EOF) parse_fail(path_, token.line, "unterminated string");
      token.kind = GmlToken::Kind::String;
      token.text = std::move(value);
      return token;
    }
    std::string word;
    while ((c = in_.peek()) != EOF && !std::isspace(c) && c != '[' && c != ']') {
      word.push_back(static_cast<char>(in_.get()));
    }
    token.text = std::move(word);
    token.kind = looks_numeric(token.text) ? GmlToken::Kind::Number : GmlToken::Kind::Key;
    return token;
  }

 private:
  static bool looks_numeric(const std::string& word) {
    if (word.empty()) return false;
    const char c = word[0];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  void skip_space_and_comments() {
    for (;;) {
      const int c = in_.peek();
      if (c == EOF) return;
      if (c == '\n') {
        ++line_;
        in_.get();
      } else if (std::isspace(c)) {
        in_.get();
      } else if (c == '#') {
        int d = 0;
        while ((d = in_.get()) != EOF && d != '\n') {
        }
        ++line_;
      } else {
        return;
      }
    }
  }

  std::istream& in_;
  std::string path_;
  int line_ = 1;
};

// Consume a balanced [ ... ] whose opening bracket was already read.
void skip_block(GmlLexer& lexer, const std::string& path, int line) {
  int depth = 1;
  while (depth > 0) {
    const GmlToken token = lexer.next();
    if (token.kind == GmlToken::Kind::End) parse_fail(path, line, "unbalanced brackets");
    if (token.kind == GmlToken::Kind::Open) ++depth;
    if (token.kind == GmlToken::Kind::Close) --depth;
  }
}

struct GmlRecord {
  std::map<std::string, std::string> scalars;
  int line = 0;
};

GmlRecord read_record(GmlLexer& lexer, const std::string& path, int open_line) {
  GmlRecord record;
  record.line = open_line;
  for (;;) {
    const GmlToken token = lexer.next();
    if (token.kind == GmlToken::Kind::End) parse_fail(path, open_line, "unbalanced brackets");
    if (token.kind == GmlToken::Kind::Close) return record;
    if (token.kind != GmlToken::Kind::Key) {
      parse_fail(path, token.line, "expected a key inside record");
    }
    const GmlToken value = lexer.next();
    if (value.kind == GmlToken::Kind::Open) {
      skip_block(lexer, path, value.line);  // nested block (e.g. graphics)
    } else if (value.kind == GmlToken::Kind::Number || value.kind == GmlToken::Kind::String) {
      record.scalars.emplace(token.text, value.text);
    } else {
      parse_fail(path, value.line, "expected a value for key '" + token.text + "'");
    }
  }
}

}  // namespace

RawDataset read_gml(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  GmlLexer lexer(in, path);

  RawDataset raw;
  raw.format = "gml";
  std::map<long, int> id_to_index;
  std::vector<std::pair<long, long>> edge_ids;
  std::vector<int> edge_lines;
  bool saw_graph = false;
  int open_blocks = 0;

  for (;;) {
    const GmlToken token = lexer.next();
    if (token.kind == GmlToken::Kind::End) {
      if (open_blocks != 0) parse_fail(path, token.line, "unbalanced brackets");
      break;
    }
    if (token.kind == GmlToken::Kind::Close) {
      if (--open_blocks < 0) parse_fail(path, token.line, "unbalanced brackets");
      continue;
    }
    if (token.kind != GmlToken::Kind::Key) continue;

    if (token.text == "node" || token.text == "edge") {
      const GmlToken open = lexer.next();
      if (open.kind != GmlToken::Kind::Open) {
        parse_fail(path, open.line, "expected [ after " + token.text);
      }
      const GmlRecord record = read_record(lexer, path, open.line);
      if (token.text == "node") {
        const auto id_it = record.scalars.find("id");
        if (id_it == record.scalars.end()) parse_fail(path, record.line, "node without id");
        long id = 0;
        if (!parse_int(id_it->second, id)) parse_fail(path, record.line, "non-integer node id");
        if (id_to_index.count(id)) parse_fail(path, record.line, "duplicate node id");
        id_to_index[id] = static_cast<int>(raw.vertex_class.size());
        std::string cls;
        if (const auto it = record.scalars.find("value"); it != record.scalars.end()) {
          cls = it->second;
        } else if (const auto it2 = record.scalars.find("label"); it2 != record.scalars.end()) {
          cls = it2->second;
        }
        if (!cls.empty()) raw.has_classes = true;
        raw.vertex_class.push_back(cls);
      } else {
        const auto src = record.scalars.find("source");
        const auto dst = record.scalars.find("target");
        if (src == record.scalars.end() || dst == record.scalars.end()) {
          parse_fail(path, record.line, "edge without source/target");
        }
        long u = 0;
        long v = 0;
        if (!parse_int(src->second, u) || !parse_int(dst->second, v)) {
          parse_fail(path, record.line, "non-integer edge endpoint");
        }
        edge_ids.emplace_back(u, v);
        edge_lines.push_back(record.line);
      }
      continue;
    }

    if (token.text == "graph") {
      const GmlToken open = lexer.next();
      if (open.kind != GmlToken::Kind::Open) parse_fail(path, open.line, "expected [ after graph");
      saw_graph = true;
      ++open_blocks;  // records inside are handled by the main loop
      continue;
    }

    // Any other key: swallow its scalar value or block.
    const GmlToken value = lexer.next();
    if (value.kind == GmlToken::Kind::Open) {
      skip_block(lexer, path, value.line);
    } else if (value.kind == GmlToken::Kind::End) {
      parse_fail(path, token.line, "dangling key '" + token.text + "'");
    }
  }

  if (!saw_graph && id_to_index.empty()) {
    throw std::runtime_error(path + ": no graph found");
  }

  raw.n = static_cast<int>(raw.vertex_class.size());
  for (std::size_t e = 0; e < edge_ids.size(); ++e) {
    const auto u = id_to_index.find(edge_ids[e].first);
    const auto v = id_to_index.find(edge_ids[e].second);
    if (u == id_to_index.end() || v == id_to_index.end()) {
      parse_fail(path, edge_lines[e], "edge references unknown node id");
    }
    raw.edges.emplace_back(u->second, v->second);
  }
  return raw;
}

Matrix to_dense(const RawDataset& raw) {
  Matrix m = Matrix::Zero(raw.n, raw.n);
  for (const auto& [u, v] : raw.edges) m(u, v) += 1.0;
  return m;
}

namespace {

LabelsWithMapping map_label_strings(const std::vector<std::string>& values) {
  LabelsWithMapping out;
  std::map<std::string, int> seen;
  std::vector<int> labels;
  labels.reserve(values.size());
  for (const std::string& value : values) {
    auto it = seen.find(value);
    if (it == seen.end()) {
      it = seen.emplace(value, static_cast<int>(out.mapping.names.size()) + 1).first;
      out.mapping.names.push_back(value);
    }
    labels.push_back(it->second);
  }
  out.labels = make_labels(std::move(labels), static_cast<int>(out.mapping.names.size()));
  return out;
}

}  // namespace

LabelsWithMapping read_labels(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::string> single;
  std::vector<std::pair<long, std::string>> pairs;
  bool pair_format = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#' || line[0] == '%') continue;
    const auto comma = line.find(',');
    if (comma != std::string::npos) {
      pair_format = true;
      long vertex = 0;
      if (!parse_int(line.substr(0, comma), vertex) || vertex < 0) {
        parse_fail(path, line_no, "malformed vertex index");
      }
      pairs.emplace_back(vertex, line.substr(comma + 1));
    } else {
      single.push_back(line);
    }
  }

  if (pair_format) {
    if (!single.empty()) throw std::runtime_error(path + ": mixed single and vertex,label lines");
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> values(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].first != static_cast<long>(i)) {
        throw std::runtime_error(path + ": vertex indices must cover 0..n-1 without gaps");
      }
      values[i] = pairs[i].second;
    }
    // first-appearance mapping follows file order, not vertex order
    std::vector<std::string> file_order;
    {
      std::ifstream again = open_or_throw(path);
      std::string l;
      while (std::getline(again, l)) {
        while (!l.empty() && (l.back() == '\r' || l.back() == ' ')) l.pop_back();
        if (l.empty() || l[0] == '#' || l[0] == '%') continue;
        const auto c = l.find(',');
        if (c != std::string::npos) file_order.push_back(l.substr(c + 1));
      }
    }
    LabelsWithMapping mapped = map_label_strings(file_order);
    // re-map values (vertex order) with the established mapping
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < mapped.mapping.names.size(); ++k) {
      index[mapped.mapping.names[k]] = static_cast<int>(k) + 1;
    }
    std::vector<int> labels(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) labels[i] = index.at(values[i]);
    mapped.labels = make_labels(std::move(labels), static_cast<int>(mapped.mapping.names.size()));
    return mapped;
  }

  if (single.empty()) throw std::runtime_error(path + ": empty label file");
  return map_label_strings(single);
}

LabelsWithMapping labels_from_dataset(const RawDataset& raw) {
  if (!raw.has_classes) {
    throw std::invalid_argument("dataset carries no per-vertex class attribute");
  }
  for (int i = 0; i < raw.n; ++i) {
    if (raw.vertex_class[static_cast<std::size_t>(i)].empty()) {
      std::ostringstream msg;
      msg << "vertex " << i << " has no class attribute";
      throw std::runtime_error(msg.str());
    }
  }
  return map_label_strings(raw.vertex_class);
}

void write_edge_list(const std::string& path, const AdjacencyMatrix& a,
                     const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const std::string& comment : header_comments) out << "# " << comment << "\n";
  const int n = a.n();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.entries(i, j) != 0.0) out << i << " " << j << "\n";
    }
  }
}

void write_labels(const std::string& path, const LabelVector& labels,
                  const LabelMapping& mapping,
                  const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const std::string& comment : header_comments) out << "# " << comment << "\n";
  for (int y : labels.labels) {
    if (!mapping.names.empty()) {
      out << mapping.names[static_cast<std::size_t>(y - 1)] << "\n";
    } else {
      out << y << "\n";
    }
  }
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ",";
    out_ << field(cells[i]);
  }
  out_ << "\n";
}

std::string CsvWriter::field(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted += "\"";
  return quoted;
}

std::string CsvWriter::number(double v) {
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buffer, ptr);
}

std::string CsvWriter::number(int v) { return std::to_string(v); }

}  // namespace vsparse
