#include "treelip/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace treelip {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    ++line_no;
    f(line_no, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

[[noreturn]] void fail_line(std::size_t line, const std::string& message) {
  throw IoError("line " + std::to_string(line) + ": " + message);
}

}  // namespace

std::string format_tree(const Tree& tree) {
  std::ostringstream out;
  out << "tree v" << tree.size() << '\n';
  for (std::size_t v = 1; v < tree.size(); ++v) {
    out << v << ' ' << tree.parent_table()[v] << '\n';
  }
  return out.str();
}

Tree parse_tree(std::string_view text, std::size_t capacity) {
  std::vector<VertexId> parents;
  std::vector<bool> seen;
  bool header = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty()) return;
    if (!header) {
      if (line.substr(0, 6) != "tree v") fail_line(line_no, "expected header 'tree v<count>'");
      const auto count = parse_number<std::size_t>(line.substr(6));
      if (!count || *count == 0) fail_line(line_no, "invalid vertex count");
      if (*count > capacity) {
        throw CapacityError("tree file declares " + std::to_string(*count) +
                            " vertices, capacity is " + std::to_string(capacity));
      }
      parents.assign(*count, 0);
      seen.assign(*count, false);
      seen[0] = true;
      header = true;
      return;
    }
    const auto fields = split_ws(line);
    if (fields.size() != 2) fail_line(line_no, "expected '<id> <parent-id>'");
    const auto id = parse_number<VertexId>(fields[0]);
    const auto parent = parse_number<VertexId>(fields[1]);
    if (!id || !parent) fail_line(line_no, "vertex ids must be non-negative integers");
    if (*id == 0 || *id >= parents.size()) fail_line(line_no, "vertex id out of range");
    if (seen[*id]) fail_line(line_no, "duplicate vertex " + std::to_string(*id));
    seen[*id] = true;
    parents[*id] = *parent;
  });
  if (!header) throw IoError("empty tree file");
  for (std::size_t v = 0; v < seen.size(); ++v) {
    if (!seen[v]) throw IoError("vertex " + std::to_string(v) + " has no parent line");
  }
  return Tree::from_parents(parents, capacity);
}

std::optional<Tree> generate_from_spec(std::string_view source, std::size_t capacity) {
  const auto colon = source.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const std::string_view kind = source.substr(0, colon);
  if (kind != "regular" && kind != "random") return std::nullopt;

  std::map<std::string, std::uint64_t, std::less<>> params;
  std::string_view rest = source.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw IoError("generator parameter '" + std::string(item) + "' is not key=value");
    }
    const auto value = parse_number<std::uint64_t>(trim(item.substr(eq + 1)));
    if (!value) throw IoError("generator parameter '" + std::string(item) + "' needs an integer");
    params[std::string(trim(item.substr(0, eq)))] = *value;
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  auto take = [&](std::string_view key) {
    const auto it = params.find(key);
    if (it == params.end()) {
      throw IoError(std::string(kind) + " generator needs '" + std::string(key) + "'");
    }
    const std::uint64_t value = it->second;
    params.erase(it);
    return value;
  };
  std::optional<Tree> tree;
  if (kind == "regular") {
    const auto q = take("q");
    const auto depth = take("depth");
    if (!params.empty()) throw IoError("unknown generator parameter '" + params.begin()->first + "'");
    tree = generate_regular(q, depth, capacity);
  } else {
    const auto seed = take("seed");
    const auto max = take("max");
    const auto depth = take("depth");
    if (!params.empty()) throw IoError("unknown generator parameter '" + params.begin()->first + "'");
    tree = generate_random(seed, max, depth, capacity);
  }
  return tree;
}

std::shared_ptr<const Tree> load_tree(const std::string& source, std::size_t capacity) {
  if (auto generated = generate_from_spec(source, capacity)) {
    return std::make_shared<const Tree>(std::move(*generated));
  }
  return std::make_shared<const Tree>(parse_tree(read_file(source), capacity));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("cannot write '" + path + "'");
}

FunctionFile parse_function_file(std::string_view text) {
  FunctionFile out;
  bool header = false;
  std::string dsl;
  bool has_dsl = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty()) return;
    if (!header) {
      if (line.substr(0, 7) != "func k=") fail_line(line_no, "expected header 'func k=<int>'");
      const auto k = parse_number<unsigned>(line.substr(7));
      if (!k || *k < 1) fail_line(line_no, "k must be a positive integer");
      out.k = *k;
      header = true;
      return;
    }
    if (line.substr(0, 4) == "dsl ") {
      if (!out.entries.empty()) fail_line(line_no, "cannot mix dsl and explicit lines");
      dsl.append(line.substr(4)).push_back('\n');
      has_dsl = true;
      return;
    }
    if (has_dsl) fail_line(line_no, "cannot mix dsl and explicit lines");
    const auto fields = split_ws(line);
    if (fields.size() < 2 || fields.size() > 3) fail_line(line_no, "expected '<id> <re> [<im>]'");
    const auto id = parse_number<VertexId>(fields[0]);
    const auto re = parse_number<double>(fields[1]);
    const auto im = fields.size() == 3 ? parse_number<double>(fields[2]) : std::optional(0.0);
    if (!id || !re || !im) fail_line(line_no, "malformed value line");
    out.entries.emplace_back(*id, Complex(*re, *im));
  });
  if (!header) throw IoError("empty function file");
  if (has_dsl) out.dsl = parse_symbol(dsl);
  return out;
}

TreeFunction materialize(const FunctionFile& file, std::shared_ptr<const Tree> tree,
                         const WeightTable& table) {
  if (file.dsl) return evaluate(*file.dsl, std::move(tree), table);
  Eigen::VectorXcd values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(tree->size()));
  for (const auto& [id, value] : file.entries) {
    if (id >= tree->size()) {
      throw IoError("function file names vertex " + std::to_string(id) + " outside the tree");
    }
    values(static_cast<Eigen::Index>(id)) = value;
  }
  return TreeFunction(std::move(tree), std::move(values), "function-file");
}

}  // namespace treelip
