// Copyright 2026 The ontoenrich Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <string>
#include <string_view>

#include "ontoenrich/corpus.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

namespace {

bool starts_at(std::string_view s, std::size_t i, std::string_view token) {
  return s.substr(i, token.size()) == token;
}

// Removes balanced open...close regions, nesting aware.
std::string remove_nested(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  out.reserve(s.size());
  int depth = 0;
  for (std::size_t i = 0; i < s.size();) {
    if (starts_at(s, i, open)) {
      ++depth;
      i += open.size();
    } else if (depth > 0 && starts_at(s, i, close)) {
      --depth;
      i += close.size();
    } else {
      if (depth == 0) out.push_back(s[i]);
      ++i;
    }
  }
  return out;
}

std::string remove_between(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t b = s.find(open, i);
    if (b == std::string_view::npos) break;
    out.append(s.substr(i, b - i));
    const std::size_t e = s.find(close, b + open.size());
    if (e == std::string_view::npos) {
      i = s.size();
      break;
    }
    i = e + close.size();
  }
  if (i < s.size()) out.append(s.substr(i));
  return out;
}

// Drops <ref>..</ref>, self-closing refs and other block elements whose
// content is not prose; remaining tags are removed but keep their content.
std::string strip_tags(std::string_view s) {
  static const char* kDropContent[] = {"ref", "math", "gallery", "table", "timeline", "score",
                                       "syntaxhighlight", "source", "code", "pre"};
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t close = s.find('>', i);
    if (close == std::string_view::npos) {
      out.append(s.substr(i));
      break;
    }
    std::string_view tag = s.substr(i + 1, close - i - 1);
    const bool self_closing = !tag.empty() && tag.back() == '/';
    std::size_t name_end = 0;
    while (name_end < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[name_end])))) ++name_end;
    const std::string name = to_lower(tag.substr(0, name_end));
    i = close + 1;
    if (self_closing || name.empty()) continue;
    for (const char* drop : kDropContent) {
      if (name == drop) {
        const std::string end_tag = "</" + name;
        std::size_t e = i;
        for (;;) {
          e = s.find('<', e);
          if (e == std::string_view::npos || to_lower(s.substr(e, end_tag.size())) == end_tag) break;
          ++e;
        }
        if (e == std::string_view::npos) {
          i = s.size();
        } else {
          const std::size_t gt = s.find('>', e);
          i = gt == std::string_view::npos ? s.size() : gt + 1;
        }
        break;
      }
    }
  }
  return out;
}

std::string rewrite_links(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (starts_at(s, i, "[[")) {
      // Find the matching ]] with nesting (file captions contain links).
      int depth = 0;
      std::size_t j = i;
      while (j < s.size()) {
        if (starts_at(s, j, "[[")) {
          ++depth;
          j += 2;
        } else if (starts_at(s, j, "]]")) {
          --depth;
          j += 2;
          if (depth == 0) break;
        } else {
          ++j;
        }
      }
      std::string_view inner = s.substr(i + 2, (depth == 0 ? j - 2 : j) - i - 2);
      i = j;
      const std::size_t colon = inner.find(':');
      if (colon != std::string_view::npos) {
        const std::string ns = to_lower(trim(inner.substr(0, colon)));
        if (ns == "file" || ns == "image" || ns == "category" || ns == "media") continue;
      }
      const std::size_t bar = inner.rfind('|');
      out.append(rewrite_links(bar == std::string_view::npos ? inner : inner.substr(bar + 1)));
    } else if (s[i] == '[' && (starts_at(s, i + 1, "http://") || starts_at(s, i + 1, "https://") ||
                               starts_at(s, i + 1, "//"))) {
      const std::size_t e = s.find(']', i);
      if (e == std::string_view::npos) {
        ++i;
        continue;
      }
      std::string_view inner = s.substr(i + 1, e - i - 1);
      const std::size_t sp = inner.find(' ');
      if (sp != std::string_view::npos) out.append(inner.substr(sp + 1));
      i = e + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

}  // namespace

std::string decode_xml_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const std::string_view ent = s.substr(i + 1, semi - i - 1);
    std::string rep;
    if (ent == "lt") rep = "<";
    else if (ent == "gt") rep = ">";
    else if (ent == "amp") rep = "&";
    else if (ent == "quot") rep = "\"";
    else if (ent == "apos") rep = "'";
    else if (ent == "nbsp") rep = " ";
    else if (!ent.empty() && ent[0] == '#') {
      unsigned long cp = 0;
      try {
        cp = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')
                 ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                 : std::stoul(std::string(ent.substr(1)));
      } catch (const std::exception&) {
        out.push_back('&');
        continue;
      }
      // UTF-8 encode.
      if (cp < 0x80) {
        rep.push_back(static_cast<char>(cp));
      } else if (cp < 0x800) {
        rep.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        rep.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else if (cp < 0x10000) {
        rep.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        rep.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        rep.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else {
        rep.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        rep.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        rep.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        rep.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      }
    } else {
      out.push_back('&');
      continue;
    }
    out += rep;
    i = semi;
  }
  return out;
}

std::string strip_wikitext(std::string_view markup) {
  std::string s = remove_between(markup, "<!--", "-->");
  s = remove_nested(s, "{{", "}}");
  s = remove_nested(s, "{|", "|}");
  s = strip_tags(s);
  s = rewrite_links(s);

  std::string out;
  for (std::string line : split(s, '\n')) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '=' && line.back() == '=') continue;  // heading
    if (line.rfind("__", 0) == 0) continue;                   // magic words
    std::size_t k = 0;
    while (k < line.size() && (line[k] == '*' || line[k] == '#' || line[k] == ':' || line[k] == ';')) ++k;
    line = trim(std::string_view(line).substr(k));
    std::string clean;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '\'' && i + 1 < line.size() && line[i + 1] == '\'') {
        while (i + 1 < line.size() && line[i + 1] == '\'') ++i;
        continue;
      }
      clean.push_back(line[i]);
    }
    const auto words = split_whitespace(clean);
    if (words.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += join(words, " ");
  }
  return out;
}

}  // namespace ontoenrich
