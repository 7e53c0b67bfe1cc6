#pragma once

// Minimal XML well-formedness checker: balanced tags, quoted attributes,
// legal names, known entities, a single root. Enough to validate generated SVG.

#include <cctype>
#include <string>
#include <vector>

namespace oracle {

struct XmlCheck {
    bool ok = true;
    std::string error;
    std::string root;
    int elements = 0;
};

inline XmlCheck check_xml(const std::string& s)
{
    XmlCheck out;
    std::vector<std::string> stack;
    std::size_t i = 0;
    bool closed_root = false;
    auto fail = [&](const std::string& why) {
        out.ok = false;
        out.error = why + " at offset " + std::to_string(i);
        return out;
    };
    auto name_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
    };
    auto check_text = [&](std::size_t from, std::size_t to) {
        for (std::size_t k = from; k < to; ++k) {
            if (s[k] == '&') {
                const std::size_t end = s.find(';', k);
                if (end == std::string::npos || end > to) return false;
                const std::string ent = s.substr(k + 1, end - k - 1);
                if (ent != "amp" && ent != "lt" && ent != "gt" && ent != "quot" && ent != "apos" &&
                    !(ent.size() > 1 && ent[0] == '#')) {
                    return false;
                }
            }
        }
        return true;
    };

    while (i < s.size()) {
        const std::size_t lt = s.find('<', i);
        const std::size_t text_end = lt == std::string::npos ? s.size() : lt;
        if (!check_text(i, text_end)) return fail("bad entity in text");
        for (std::size_t k = i; k < text_end; ++k) {
            if (s[k] == '>') return fail("stray '>'");
            if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[k]))) return fail("text outside root");
        }
        if (lt == std::string::npos) break;
        i = lt;
        if (s.compare(i, 5, "<?xml") == 0) {
            const std::size_t end = s.find("?>", i);
            if (end == std::string::npos || i != s.find_first_not_of(" \t\r\n")) return fail("bad declaration");
            i = end + 2;
            continue;
        }
        if (s.compare(i, 4, "<!--") == 0) {
            const std::size_t end = s.find("-->", i);
            if (end == std::string::npos) return fail("unterminated comment");
            i = end + 3;
            continue;
        }
        const bool closing = i + 1 < s.size() && s[i + 1] == '/';
        std::size_t k = i + (closing ? 2 : 1);
        const std::size_t name_start = k;
        if (k >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[k])) || s[k] == '_')) return fail("bad tag name");
        while (k < s.size() && name_char(s[k])) ++k;
        const std::string name = s.substr(name_start, k - name_start);
        if (closing) {
            while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
            if (k >= s.size() || s[k] != '>') return fail("bad closing tag");
            if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
            stack.pop_back();
            if (stack.empty()) closed_root = true;
            i = k + 1;
            continue;
        }
        if (closed_root) return fail("second root element");
        if (stack.empty()) out.root = name;
        ++out.elements;
        std::vector<std::string> seen;
        while (true) {
            while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
            if (k >= s.size()) return fail("unterminated tag");
            if (s[k] == '>') {
                stack.push_back(name);
                i = k + 1;
                break;
            }
            if (s.compare(k, 2, "/>") == 0) {
                if (stack.empty()) closed_root = true;
                i = k + 2;
                break;
            }
            const std::size_t attr_start = k;
            while (k < s.size() && name_char(s[k])) ++k;
            if (k == attr_start) return fail("bad attribute name");
            const std::string attr = s.substr(attr_start, k - attr_start);
            for (const auto& a : seen) {
                if (a == attr) return fail("duplicate attribute " + attr);
            }
            seen.push_back(attr);
            if (k >= s.size() || s[k] != '=') return fail("attribute without value");
            ++k;
            if (k >= s.size() || (s[k] != '"' && s[k] != '\'')) return fail("unquoted attribute");
            const char quote = s[k];
            const std::size_t end = s.find(quote, k + 1);
            if (end == std::string::npos) return fail("unterminated attribute");
            if (s.find('<', k + 1) < end) return fail("'<' in attribute");
            if (!check_text(k + 1, end)) return fail("bad entity in attribute");
            k = end + 1;
        }
    }
    if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
    if (out.root.empty()) return fail("no root element");
    return out;
}

}  // namespace oracle
