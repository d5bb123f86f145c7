#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace satsmell::xml {

// Element-tree node of a non-validating XML subset parser: elements,
// attributes, character data, comments, CDATA, prolog and DOCTYPE are
// handled; namespaces are kept verbatim in names.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<Element> children;
    std::string text;

    const std::string* attr(std::string_view key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }

    // Direct children with a given tag name.
    std::vector<const Element*> children_named(std::string_view tag) const {
        std::vector<const Element*> out;
        for (const auto& c : children)
            if (c.name == tag) out.push_back(&c);
        return out;
    }

    const Element* first_child(std::string_view tag) const {
        for (const auto& c : children)
            if (c.name == tag) return &c;
        return nullptr;
    }
};

// Parses a whole document and returns the root element.
// Throws MalformedReport on anything that is not well-formed.
Element parse(std::string_view bytes);

}  // namespace satsmell::xml
