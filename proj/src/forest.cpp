#include "hilbert/forest.hpp"

#include <algorithm>

#include "hilbert/parse_util.hpp"

namespace hilbert {

namespace {

constexpr std::string_view kHoleAlias = "\xE2\x97\xA6";    // ◦
constexpr std::string_view kBottomAlias = "\xE2\x8A\xA5";  // ⊥

std::string join_keys(const std::vector<Tree>& trees, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (i) out += sep;
    out += trees[i].text();
  }
  return out;
}

bool label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string read_label(Cursor& in) {
  if (in.consume(kBottomLabel) || in.consume(kBottomAlias)) return std::string(kBottomLabel);
  if (in.consume('?') || in.consume(kHoleAlias)) return std::string(kHoleLabel);
  if (!Cursor::ident_start(in.peek())) in.fail("expected label");
  std::string label;
  while (label_char(in.peek_raw())) {
    label += in.peek_raw();
    in.set_local_position(in.local_position() + 1);
  }
  return label;
}

Forest parse_forest_list(Cursor& in, char close);

Tree parse_tree(Cursor& in) {
  std::size_t at = in.position();
  std::string label = read_label(in);
  Forest children;
  if (in.consume('(')) children = parse_forest_list(in, ')');
  if (label == kHoleLabel && !children.empty()) throw ParseError("hole cannot have children", at);
  return Tree(label, children);
}

Forest parse_forest_list(Cursor& in, char close) {
  std::vector<Tree> trees;
  if (in.peek() == close || in.at_end()) {
    if (close && !in.consume(close)) in.fail(std::string("expected '") + close + "'");
    return Forest();
  }
  if (in.peek() == '0') {
    in.consume('0');
  } else {
    trees.push_back(parse_tree(in));
  }
  while (in.consume(',') || in.consume('+')) {
    if (in.consume('0')) continue;
    trees.push_back(parse_tree(in));
  }
  if (close) in.expect(close);
  return Forest::from_trees(std::move(trees));
}

Forest substitute_hole(const Forest& c, const Forest& d) {
  std::vector<Tree> out;
  for (const Tree& t : c.trees()) {
    if (t.is_hole()) {
      out.insert(out.end(), d.trees().begin(), d.trees().end());
    } else if (t.children().hole_count() > 0) {
      out.emplace_back(t.label(), substitute_hole(t.children(), d));
    } else {
      out.push_back(t);
    }
  }
  return Forest::from_trees(std::move(out));
}

void ordered_text(const OrderedTree& t, std::string& out) {
  out += t.label;
  if (t.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ',';
    ordered_text(t.children[i], out);
  }
  out += ')';
}

OrderedTree parse_ordered(Cursor& in) {
  OrderedTree t;
  t.label = read_label(in);
  if (in.consume('(')) {
    if (!in.consume(')')) {
      do {
        t.children.push_back(parse_ordered(in));
      } while (in.consume(','));
      in.expect(')');
    }
  }
  return t;
}

}  // namespace

Tree::Tree(std::string label, Forest children)
    : label_(std::move(label)), children_(std::move(children)) {
  text_ = label_;
  if (!children_.empty()) text_ += "(" + children_.key() + ")";
}

Forest Forest::from_trees(std::vector<Tree> trees) {
  std::sort(trees.begin(), trees.end(),
            [](const Tree& a, const Tree& b) { return a.text() < b.text(); });
  Forest f;
  for (const Tree& t : trees) {
    if (t.is_hole()) {
      f.holes_ += 1;
    } else {
      f.nodes_ += 1 + t.children().node_count();
      f.holes_ += t.children().hole_count();
    }
  }
  f.key_ = join_keys(trees, ",");
  f.trees_ = std::move(trees);
  return f;
}

Forest Forest::hole() { return from_trees({Tree(std::string(kHoleLabel), Forest())}); }

std::string Forest::text() const { return join_keys(trees_, " + "); }

Forest forest_add(const Forest& a, const Forest& b) {
  std::vector<Tree> trees = a.trees();
  trees.insert(trees.end(), b.trees().begin(), b.trees().end());
  return Forest::from_trees(std::move(trees));
}

Forest forest_root(std::string_view label, const Forest& h) {
  return Forest::from_trees({Tree(std::string(label), h)});
}

bool forest_equal(const Forest& a, const Forest& b) { return a == b; }

std::string forest_text(const Forest& h) { return h.text(); }

Forest parse_forest(std::string_view text) {
  Cursor in(text);
  Forest f = parse_forest_list(in, '\0');
  if (!in.at_end()) in.fail("unexpected input");
  return f;
}

Context::Context(Forest forest) : forest_(std::move(forest)) {
  if (forest_.hole_count() > 1) throw std::invalid_argument("context has more than one hole");
}

Context context_substitute(const Context& c, const Context& d) {
  if (c.sort() != 1) throw UntypedSubstitution("substitution into a context without a hole");
  return Context(substitute_hole(c.forest(), d.forest()));
}

Context context_add(const Context& a, const Context& b) {
  if (a.sort() + b.sort() > 1) throw UntypedSubstitution("sum of two contexts with holes");
  return Context(forest_add(a.forest(), b.forest()));
}

Context context_root(std::string_view label, const Context& c) {
  return Context(forest_root(label, c.forest()));
}

Context parse_context(std::string_view text) { return Context(parse_forest(text)); }

std::size_t OrderedTree::size() const {
  std::size_t n = 1;
  for (const OrderedTree& c : children) n += c.size();
  return n;
}

std::string OrderedTree::text() const {
  std::string out;
  ordered_text(*this, out);
  return out;
}

OrderedTree parse_ordered_tree(std::string_view text) {
  Cursor in(text);
  OrderedTree t = parse_ordered(in);
  if (!in.at_end()) in.fail("unexpected input");
  return t;
}

Forest fcns_decode(const OrderedTree& binary) {
  if (binary.label == kBottomLabel) {
    if (!binary.children.empty()) throw std::invalid_argument("_|_ must be a leaf");
    return Forest();
  }
  if (binary.children.size() != 2)
    throw std::invalid_argument("node '" + binary.label + "' must have two children");
  return forest_add(forest_root(binary.label, fcns_decode(binary.children[0])),
                    fcns_decode(binary.children[1]));
}

}  // namespace hilbert
