#pragma once

// Unordered forests (multisets of unordered trees) and one-hole contexts.
//
// A Forest keeps its trees sorted by canonical text, so equality of forests is
// equality of canonical texts regardless of how siblings were listed. A
// context is a forest containing at most one hole leaf, written `?` in files
// (`◦` is accepted on input).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hilbert {

inline constexpr std::string_view kHoleLabel = "?";
inline constexpr std::string_view kBottomLabel = "_|_";

class Tree;

class Forest {
 public:
  Forest() = default;  // the empty forest

  static Forest from_trees(std::vector<Tree> trees);
  static Forest hole();

  const std::vector<Tree>& trees() const { return trees_; }
  bool empty() const { return trees_.empty(); }
  std::size_t node_count() const { return nodes_; }  // holes not counted
  std::size_t hole_count() const { return holes_; }

  /// Canonical rendering: top-level trees joined by " + ", children by ",".
  std::string text() const;
  /// Comma-joined canonical tree texts; the equality key.
  const std::string& key() const { return key_; }

  friend bool operator==(const Forest& a, const Forest& b) { return a.key_ == b.key_; }
  friend bool operator<(const Forest& a, const Forest& b) { return a.key_ < b.key_; }

 private:
  std::vector<Tree> trees_;  // sorted by canonical text
  std::string key_;
  std::size_t nodes_ = 0;
  std::size_t holes_ = 0;
};

class Tree {
 public:
  Tree(std::string label, Forest children);

  const std::string& label() const { return label_; }
  const Forest& children() const { return children_; }
  const std::string& text() const { return text_; }
  bool is_hole() const { return label_ == kHoleLabel; }

 private:
  std::string label_;
  Forest children_;
  std::string text_;
};

Forest forest_add(const Forest& a, const Forest& b);
/// root_label(h): a single tree whose children are the trees of h.
Forest forest_root(std::string_view label, const Forest& h);
bool forest_equal(const Forest& a, const Forest& b);

std::string forest_text(const Forest& h);
/// Grammar: `name` | `name(child, ...)` joined by `,` or `+`; `?`/`◦` for the
/// hole; empty text (or `0`) for the empty forest.
Forest parse_forest(std::string_view text);

class UntypedSubstitution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Element of the one-hole context algebra: sort 0 (no hole) or sort 1.
class Context {
 public:
  Context() = default;
  explicit Context(Forest forest);
  static Context hole() { return Context(Forest::hole()); }

  const Forest& forest() const { return forest_; }
  int sort() const { return static_cast<int>(forest_.hole_count()); }
  std::string text() const { return forest_.text(); }

  friend bool operator==(const Context&, const Context&) = default;
  friend bool operator<(const Context& a, const Context& b) { return a.forest_ < b.forest_; }

 private:
  Forest forest_;
};

/// c[? := d]; c must have exactly one hole.
Context context_substitute(const Context& c, const Context& d);
/// Multiset sum; at most one side may carry the hole.
Context context_add(const Context& a, const Context& b);
Context context_root(std::string_view label, const Context& c);
Context parse_context(std::string_view text);

/// Ordered ranked tree used for automaton inputs and FCNS binary trees.
struct OrderedTree {
  std::string label;
  std::vector<OrderedTree> children;

  std::size_t size() const;
  std::string text() const;
  friend bool operator==(const OrderedTree&, const OrderedTree&) = default;
  friend auto operator<=>(const OrderedTree&, const OrderedTree&) = default;
};

OrderedTree parse_ordered_tree(std::string_view text);

/// First-child/next-sibling decoding with sibling order forgotten: the left
/// child becomes the first child, the right child the next sibling, `_|_` is
/// the empty forest. Nodes must have arity 0 (`_|_` only) or 2.
Forest fcns_decode(const OrderedTree& binary);

}  // namespace hilbert
