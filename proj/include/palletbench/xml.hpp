#pragma once

// Reader for the small XML dialect the schema files use: elements,
// attributes, comments, an optional prolog. No namespaces, no CDATA,
// no DTD. Text content between elements is ignored. Any byte sequence
// either parses or raises ParseError with a line/column and element path;
// it never crashes.

#include <string>
#include <string_view>
#include <vector>

#include "palletbench/errors.hpp"

namespace palletbench {

struct XmlAttr {
  std::string name;
  std::string value;
};

struct XmlElement {
  std::string name;
  std::vector<XmlAttr> attrs;
  std::vector<XmlElement> children;
  int line = 0;

  const std::string* attr(std::string_view key) const {
    for (const auto& a : attrs)
      if (a.name == key) return &a.value;
    return nullptr;
  }

  std::vector<const XmlElement*> children_named(std::string_view key) const {
    std::vector<const XmlElement*> out;
    for (const auto& c : children)
      if (c.name == key) out.push_back(&c);
    return out;
  }
};

namespace detail {

class XmlReader {
 public:
  explicit XmlReader(std::string_view text) : text_(text) {}

  XmlElement parse() {
    skip_misc();
    if (eof()) fail("document contains no root element");
    XmlElement root = parse_element();
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  std::vector<std::string> path_;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  char take() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string where = "/";
    for (const auto& p : path_) where += p + "/";
    if (!path_.empty()) where.pop_back();
    throw ParseError(where, "line " + std::to_string(line_) + ": " + msg);
  }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
  static bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.' || c == ':';
  }

  void skip_space() {
    while (!eof() && is_space(peek())) take();
  }

  // whitespace, prolog, comments, stray text between elements
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>", "unterminated processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "unterminated comment");
      } else if (starts_with("<!")) {
        skip_until(">", "unterminated declaration");
      } else if (!eof() && peek() != '<') {
        take();  // ignored character data
      } else {
        return;
      }
    }
  }

  void skip_until(std::string_view terminator, const char* err) {
    while (!eof()) {
      if (starts_with(terminator)) {
        for (size_t i = 0; i < terminator.size(); ++i) take();
        return;
      }
      take();
    }
    fail(err);
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::string name;
    while (!eof() && is_name_char(peek())) name += take();
    return name;
  }

  std::string parse_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    const char quote = take();
    std::string value;
    for (;;) {
      if (eof()) fail("unterminated attribute value");
      char c = take();
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        value += parse_entity();
      } else {
        value += c;
      }
    }
    return value;
  }

  std::string parse_entity() {
    std::string ent;
    while (!eof() && peek() != ';' && ent.size() < 12) ent += take();
    if (eof() || peek() != ';') fail("malformed entity reference");
    take();
    if (ent == "amp") return "&";
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    if (ent.size() > 1 && ent[0] == '#') {
      long code = 0;
      bool hex = ent[1] == 'x' || ent[1] == 'X';
      for (size_t i = hex ? 2 : 1; i < ent.size(); ++i) {
        char c = ent[i];
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else fail("malformed character reference");
        code = code * (hex ? 16 : 10) + digit;
        if (code > 0x10ffff) fail("character reference out of range");
      }
      if (code < 0x20 && code != 0x09 && code != 0x0a && code != 0x0d)
        fail("control character reference");
      // ASCII only; multi-byte code points are not needed by the grammar
      if (code > 0x7f) fail("non-ASCII character reference");
      return std::string(1, static_cast<char>(code));
    }
    fail("unknown entity \"&" + ent + ";\"");
  }

  XmlElement parse_element() {
    if (eof() || peek() != '<') fail("expected '<'");
    take();
    XmlElement el;
    el.line = line_;
    el.name = parse_name();
    path_.push_back(el.name);

    for (;;) {
      skip_space();
      if (eof()) fail("unterminated start tag");
      if (peek() == '>') {
        take();
        parse_children(el);
        break;
      }
      if (starts_with("/>")) {
        take();
        take();
        break;
      }
      XmlAttr attr;
      attr.name = parse_name();
      for (const auto& existing : el.attrs)
        if (existing.name == attr.name) fail("duplicate attribute \"" + attr.name + "\"");
      skip_space();
      if (eof() || peek() != '=') fail("expected '=' after attribute name");
      take();
      skip_space();
      attr.value = parse_attr_value();
      el.attrs.push_back(std::move(attr));
    }

    path_.pop_back();
    return el;
  }

  void parse_children(XmlElement& el) {
    for (;;) {
      skip_misc();
      if (eof()) fail("missing closing tag </" + el.name + ">");
      if (starts_with("</")) {
        take();
        take();
        std::string name = parse_name();
        if (name != el.name)
          fail("closing tag </" + name + "> does not match <" + el.name + ">");
        skip_space();
        if (eof() || peek() != '>') fail("malformed closing tag");
        take();
        return;
      }
      el.children.push_back(parse_element());
    }
  }
};

}  // namespace detail

inline XmlElement parse_xml(std::string_view text) { return detail::XmlReader(text).parse(); }

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

}  // namespace palletbench
