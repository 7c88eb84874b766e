#include "lvckit/textnorm.hpp"

#include <string>

#include "lvckit/errors.hpp"

namespace lvc {

namespace {

// Decodes the code point at i, advancing i. Invalid sequences yield false;
// the caller copies the offending byte through untouched.
bool decode_next(std::string_view s, std::size_t& i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    i += 1;
    return true;
  }
  int extra = 0;
  char32_t acc = 0;
  if ((b0 & 0xe0) == 0xc0) {
    extra = 1;
    acc = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    extra = 2;
    acc = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    extra = 3;
    acc = b0 & 0x07;
  } else {
    return false;
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) return false;
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((b & 0xc0) != 0x80) return false;
    acc = (acc << 6) | (b & 0x3f);
  }
  cp = acc;
  i += static_cast<std::size_t>(extra) + 1;
  return true;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

// Lowercase mapping over ASCII, Latin-1 Supplement and Latin Extended-A.
// Returns 1 or 2 code points (dotted capital I expands under Standard).
std::size_t lower_map(char32_t cp, Casing casing, char32_t out[2]) {
  if (cp < 0x80) {
    if (cp >= U'A' && cp <= U'Z') {
      if (casing == Casing::Turkish && cp == U'I') {
        out[0] = 0x0131;  // dotless i
        return 1;
      }
      out[0] = cp + 0x20;
      return 1;
    }
    out[0] = cp;
    return 1;
  }
  if (cp >= 0x00c0 && cp <= 0x00de && cp != 0x00d7) {
    out[0] = cp + 0x20;
    return 1;
  }
  if (cp == 0x0130) {  // LATIN CAPITAL LETTER I WITH DOT ABOVE
    out[0] = U'i';
    if (casing == Casing::Turkish) return 1;
    out[1] = 0x0307;  // default mapping keeps the dot as a combining mark
    return 2;
  }
  if ((cp >= 0x0100 && cp <= 0x012f) || (cp >= 0x0132 && cp <= 0x0137) ||
      (cp >= 0x014a && cp <= 0x0177)) {
    out[0] = (cp % 2 == 0) ? cp + 1 : cp;
    return 1;
  }
  if (cp >= 0x0139 && cp <= 0x0148) {
    out[0] = (cp % 2 == 1) ? cp + 1 : cp;
    return 1;
  }
  if (cp == 0x0178) {  // Y with diaeresis
    out[0] = 0x00ff;
    return 1;
  }
  if (cp == 0x0179 || cp == 0x017b || cp == 0x017d) {
    out[0] = cp + 1;
    return 1;
  }
  out[0] = cp;
  return 1;
}

}  // namespace

Casing casing_from_string(std::string_view name) {
  if (name == "standard") return Casing::Standard;
  if (name == "turkish") return Casing::Turkish;
  throw ConfigError("unknown casing policy: " + std::string(name) +
                    " (expected standard|turkish)");
}

std::string_view casing_name(Casing casing) {
  return casing == Casing::Standard ? "standard" : "turkish";
}

std::string to_lower(std::string_view text, Casing casing) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = 0;
    const std::size_t before = i;
    if (!decode_next(text, i, cp)) {
      out.push_back(text[before]);
      i = before + 1;
      continue;
    }
    char32_t mapped[2];
    const std::size_t n = lower_map(cp, casing, mapped);
    for (std::size_t k = 0; k < n; ++k) append_utf8(out, mapped[k]);
  }
  return out;
}

}  // namespace lvc
