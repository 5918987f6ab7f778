#pragma once

#include "treelip/funcspace.hpp"
#include "treelip/symbol.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treelip {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Tree text: "tree v<count>", then one "<id> <parent-id>" line per non-root vertex.
std::string format_tree(const Tree& tree);
Tree parse_tree(std::string_view text, std::size_t capacity = kDefaultVertexCapacity);

/// "regular:q=<int>,depth=<int>" or "random:seed=<int>,max=<int>,depth=<int>".
/// Returns nullopt when `source` is not a generator spec at all.
std::optional<Tree> generate_from_spec(std::string_view source,
                                       std::size_t capacity = kDefaultVertexCapacity);

/// Generator spec or path to a tree file.
std::shared_ptr<const Tree> load_tree(const std::string& source,
                                      std::size_t capacity = kDefaultVertexCapacity);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Function file: "func k=<int>", then "dsl <text>" lines or "<id> <re> [<im>]" lines.
struct FunctionFile {
  unsigned k = 1;
  std::optional<SymbolSpec> dsl;
  std::vector<std::pair<VertexId, Complex>> entries;
};

FunctionFile parse_function_file(std::string_view text);

/// Explicit entries on a zero background, or the DSL evaluated on the tree.
TreeFunction materialize(const FunctionFile& file, std::shared_ptr<const Tree> tree,
                         const WeightTable& table);

}  // namespace treelip
