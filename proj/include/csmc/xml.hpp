#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "csmc/model.hpp"

namespace csmc {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Element tree for the documents this tool emits: elements, attributes,
// self-closing tags, an optional XML declaration, no mixed content.
struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
      if (k == key) return &v;
    return nullptr;
  }

  const XmlNode* child(std::string_view tag) const {
    for (const auto& c : children)
      if (c.name == tag) return &c;
    return nullptr;
  }
};

namespace detail {

class XmlParser {
 public:
  explicit XmlParser(std::string_view src) : src_(src) {}

  XmlNode parse() {
    skip_ws();
    if (src_.substr(pos_).starts_with("<?")) {
      size_t end = src_.find("?>", pos_);
      if (end == std::string_view::npos)
        throw ParseError("unterminated XML declaration", 0, 0);
      pos_ = end + 2;
      skip_ws();
    }
    XmlNode root = parse_element();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("trailing content after root element", 0, 0);
    return root;
  }

 private:
  XmlNode parse_element() {
    expect('<');
    XmlNode node;
    node.name = read_name();
    for (;;) {
      skip_ws();
      if (peek() == '/') {
        ++pos_;
        expect('>');
        return node;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      std::string key = read_name();
      skip_ws();
      expect('=');
      skip_ws();
      char quote = peek();
      if (quote != '"' && quote != '\'')
        throw ParseError("expected quoted attribute value", 0, 0);
      ++pos_;
      std::string value;
      while (pos_ < src_.size() && src_[pos_] != quote) value += src_[pos_++];
      expect(quote);
      node.attrs.emplace_back(std::move(key), unescape(value));
    }
    for (;;) {
      skip_ws();
      if (src_.substr(pos_).starts_with("</")) {
        pos_ += 2;
        std::string closing = read_name();
        if (closing != node.name)
          throw ParseError("mismatched closing tag '" + closing + "'", 0, 0);
        skip_ws();
        expect('>');
        return node;
      }
      if (peek() != '<')
        throw ParseError("unexpected text content", 0, 0);
      node.children.push_back(parse_element());
    }
  }

  static std::string unescape(const std::string& s) {
    std::string out;
    for (size_t i = 0; i < s.size();) {
      if (s[i] != '&') {
        out += s[i++];
        continue;
      }
      auto take = [&](std::string_view ent, char c) {
        if (s.compare(i, ent.size(), ent) == 0) {
          out += c;
          i += ent.size();
          return true;
        }
        return false;
      };
      if (take("&amp;", '&') || take("&lt;", '<') || take("&gt;", '>') ||
          take("&quot;", '"') || take("&apos;", '\''))
        continue;
      throw ParseError("unknown entity in attribute value", 0, 0);
    }
    return out;
  }

  char peek() const {
    if (pos_ >= src_.size()) throw ParseError("unexpected end of XML", 0, 0);
    return src_[pos_];
  }

  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "' in XML", 0, 0);
    ++pos_;
  }

  std::string read_name() {
    std::string out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
          c == '.') {
        out += c;
        ++pos_;
      } else {
        break;
      }
    }
    if (out.empty()) throw ParseError("expected XML name", 0, 0);
    return out;
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  std::string_view src_;
  size_t pos_ = 0;
};

}  // namespace detail

inline XmlNode xml_parse(std::string_view text) {
  return detail::XmlParser(text).parse();
}

}  // namespace csmc
