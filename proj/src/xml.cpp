#include "satsmell/xml.hpp"

#include <cctype>

#include "satsmell/errors.hpp"

namespace satsmell::xml {

namespace {

struct Cursor {
    std::string_view s;
    size_t pos = 0;

    bool eof() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    bool starts_with(std::string_view t) const { return s.substr(pos, t.size()) == t; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw MalformedReport("malformed XML at offset " + std::to_string(pos) + ": " + what);
    }
};

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

std::string read_name(Cursor& c) {
    if (c.eof() || !is_name_start(c.peek())) c.fail("expected name");
    size_t start = c.pos;
    while (!c.eof() && is_name_char(c.peek())) ++c.pos;
    return std::string(c.s.substr(start, c.pos - start));
}

void decode_entity(Cursor& c, std::string& out) {
    // c.pos sits on '&'
    size_t end = c.s.find(';', c.pos);
    if (end == std::string_view::npos || end - c.pos > 12) c.fail("unterminated entity");
    std::string_view body = c.s.substr(c.pos + 1, end - c.pos - 1);
    if (body == "amp") out += '&';
    else if (body == "lt") out += '<';
    else if (body == "gt") out += '>';
    else if (body == "quot") out += '"';
    else if (body == "apos") out += '\'';
    else if (!body.empty() && body[0] == '#') {
        int base = 10;
        std::string_view digits = body.substr(1);
        if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
            base = 16;
            digits = digits.substr(1);
        }
        unsigned long code = 0;
        try {
            code = std::stoul(std::string(digits), nullptr, base);
        } catch (...) {
            c.fail("bad character reference");
        }
        // Emit as UTF-8.
        if (code < 0x80) {
            out += static_cast<char>(code);
        } else if (code < 0x800) {
            out += static_cast<char>(0xC0 | (code >> 6));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else if (code < 0x10000) {
            out += static_cast<char>(0xE0 | (code >> 12));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (code >> 18));
            out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        }
    } else {
        c.fail("unknown entity &" + std::string(body) + ";");
    }
    c.pos = end + 1;
}

std::string read_attr_value(Cursor& c) {
    if (c.eof() || (c.peek() != '"' && c.peek() != '\'')) c.fail("expected quoted attribute value");
    char quote = c.peek();
    ++c.pos;
    std::string out;
    while (!c.eof() && c.peek() != quote) {
        if (c.peek() == '&') {
            decode_entity(c, out);
        } else if (c.peek() == '<') {
            c.fail("'<' in attribute value");
        } else {
            out += c.peek();
            ++c.pos;
        }
    }
    if (c.eof()) c.fail("unterminated attribute value");
    ++c.pos;
    return out;
}

// Skips <?...?>, <!--...-->, <!DOCTYPE...> (with nested brackets). Returns false
// if the cursor is not on one of those.
bool skip_misc(Cursor& c) {
    if (c.starts_with("<?")) {
        size_t end = c.s.find("?>", c.pos);
        if (end == std::string_view::npos) c.fail("unterminated processing instruction");
        c.pos = end + 2;
        return true;
    }
    if (c.starts_with("<!--")) {
        size_t end = c.s.find("-->", c.pos);
        if (end == std::string_view::npos) c.fail("unterminated comment");
        c.pos = end + 3;
        return true;
    }
    if (c.starts_with("<!")) {
        // DOCTYPE or similar; tolerate one level of [...] internal subset.
        int depth = 0;
        while (!c.eof()) {
            char ch = c.peek();
            if (ch == '[') ++depth;
            if (ch == ']') --depth;
            if (ch == '>' && depth <= 0) {
                ++c.pos;
                return true;
            }
            ++c.pos;
        }
        c.fail("unterminated declaration");
    }
    return false;
}

Element parse_element(Cursor& c) {
    if (c.eof() || c.peek() != '<') c.fail("expected element");
    ++c.pos;
    Element el;
    el.name = read_name(c);
    while (true) {
        c.skip_ws();
        if (c.eof()) c.fail("unterminated start tag");
        if (c.starts_with("/>")) {
            c.pos += 2;
            return el;
        }
        if (c.peek() == '>') {
            ++c.pos;
            break;
        }
        std::string key = read_name(c);
        c.skip_ws();
        if (c.eof() || c.peek() != '=') c.fail("expected '=' after attribute name");
        ++c.pos;
        c.skip_ws();
        el.attrs.emplace_back(std::move(key), read_attr_value(c));
    }
    // Content until matching end tag.
    while (true) {
        if (c.eof()) c.fail("missing </" + el.name + ">");
        if (c.starts_with("</")) {
            c.pos += 2;
            std::string closing = read_name(c);
            if (closing != el.name)
                c.fail("mismatched end tag </" + closing + ">, expected </" + el.name + ">");
            c.skip_ws();
            if (c.eof() || c.peek() != '>') c.fail("malformed end tag");
            ++c.pos;
            return el;
        }
        if (c.starts_with("<![CDATA[")) {
            size_t end = c.s.find("]]>", c.pos);
            if (end == std::string_view::npos) c.fail("unterminated CDATA section");
            el.text.append(c.s.substr(c.pos + 9, end - c.pos - 9));
            c.pos = end + 3;
            continue;
        }
        if (skip_misc(c)) continue;
        if (c.peek() == '<') {
            el.children.push_back(parse_element(c));
            continue;
        }
        if (c.peek() == '&') {
            decode_entity(c, el.text);
            continue;
        }
        el.text += c.peek();
        ++c.pos;
    }
}

}  // namespace

Element parse(std::string_view bytes) {
    // Strip a UTF-8 BOM if present.
    if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes = bytes.substr(3);
    Cursor c{bytes};
    c.skip_ws();
    while (!c.eof() && skip_misc(c)) c.skip_ws();
    if (c.eof() || c.peek() != '<') c.fail("no root element");
    Element root = parse_element(c);
    c.skip_ws();
    while (!c.eof() && skip_misc(c)) c.skip_ws();
    if (!c.eof()) c.fail("trailing content after root element");
    return root;
}

}  // namespace satsmell::xml
