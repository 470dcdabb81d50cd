#pragma once

// Readers and writers for net systems.
//
// Textual format, one directive per line:
//
//     # comment
//     place <id> [tokens=<n>]
//     transition <id>
//     arc <src> <dst>
//
// Ids are arbitrary non-whitespace tokens and must be unique across places and
// transitions.  Arcs must connect a place to a transition or vice versa.
//
// The PNML reader accepts the usual exchange subset: <place> (with an optional
// <initialMarking><text>n</text>), <transition> and <arc source target>.
// Everything else (pages, graphics, names, tool specifics) is skipped with a
// warning so files exported by other tools still load.

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pntar/net.hpp"

namespace pntar {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

struct ParseResult {
    NetSystem system;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

} // namespace detail

inline ParseResult parse_net(std::istream& in) {
    ParseResult res;
    PetriNet& net = res.system.net;
    std::vector<std::pair<std::string, uint32_t>> tokens;      // label -> initial count
    std::vector<std::pair<std::string, std::string>> arcs;     // resolved after all nodes
    std::vector<int> arc_lines;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto words = detail::split_ws(line);
        if (words.empty()) continue;

        const std::string& kw = words[0];
        try {
            if (kw == "place") {
                if (words.size() < 2 || words.size() > 3)
                    throw ParseError("expected 'place <id> [tokens=<n>]'", lineno);
                net.add_place(words[1]);
                if (words.size() == 3) {
                    const std::string& opt = words[2];
                    if (opt.rfind("tokens=", 0) != 0)
                        throw ParseError("unknown place option '" + opt + "'", lineno);
                    std::size_t pos = 0;
                    const std::string num = opt.substr(7);
                    unsigned long n = 0;
                    try {
                        n = std::stoul(num, &pos);
                    } catch (const std::exception&) {
                        throw ParseError("bad token count '" + num + "'", lineno);
                    }
                    if (pos != num.size() || num.empty() || num[0] == '-')
                        throw ParseError("bad token count '" + num + "'", lineno);
                    if (n > 0) tokens.emplace_back(words[1], static_cast<uint32_t>(n));
                }
            } else if (kw == "transition") {
                if (words.size() != 2)
                    throw ParseError("expected 'transition <id>'", lineno);
                net.add_transition(words[1]);
            } else if (kw == "arc") {
                if (words.size() != 3)
                    throw ParseError("expected 'arc <src> <dst>'", lineno);
                arcs.emplace_back(words[1], words[2]);
                arc_lines.push_back(lineno);
            } else {
                throw ParseError("unknown directive '" + kw + "'", lineno);
            }
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), lineno);
        }
    }

    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const auto& [src, dst] = arcs[i];
        try {
            auto [src_is_place, src_id] = net.find(src);
            auto [dst_is_place, dst_id] = net.find(dst);
            if (src_is_place == dst_is_place)
                throw ValidationError("arc '" + src + " -> " + dst +
                                      "' must connect a place and a transition");
            if (src_is_place)
                net.add_arc_pt(src_id, dst_id);
            else
                net.add_arc_tp(src_id, dst_id);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), arc_lines[i]);
        }
    }

    std::vector<std::pair<PlaceId, uint32_t>> m0;
    for (const auto& [label, n] : tokens) m0.emplace_back(net.place_by_label(label), n);
    res.system.m0 = Marking(std::move(m0));
    net.validate();
    return res;
}

inline ParseResult parse_net(const std::string& text) {
    std::istringstream in(text);
    return parse_net(in);
}

inline void render_net(const NetSystem& sys, std::ostream& out) {
    const PetriNet& net = sys.net;
    for (PlaceId p = 0; p < net.num_places(); ++p) {
        out << "place " << net.place_label(p);
        if (uint32_t n = sys.m0.count(p)) out << " tokens=" << n;
        out << "\n";
    }
    for (TransitionId t = 0; t < net.num_transitions(); ++t)
        out << "transition " << net.transition_label(t) << "\n";
    for (TransitionId t = 0; t < net.num_transitions(); ++t) {
        for (PlaceId p : net.pre(t))
            out << "arc " << net.place_label(p) << " " << net.transition_label(t) << "\n";
        for (PlaceId p : net.post(t))
            out << "arc " << net.transition_label(t) << " " << net.place_label(p) << "\n";
    }
}

inline std::string render_net(const NetSystem& sys) {
    std::ostringstream out;
    render_net(sys, out);
    return out.str();
}

// ---------------------------------------------------------------------------
// PNML subset
// ---------------------------------------------------------------------------

namespace detail {

struct XmlTag {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    bool closing = false;       // </name>
    bool self_closing = false;  // <name/>
    std::size_t end = 0;        // offset just past '>'
};

inline std::string xml_attr(const XmlTag& tag, const std::string& key) {
    for (const auto& [k, v] : tag.attrs)
        if (k == key) return v;
    return {};
}

// Scans the tag starting at text[pos] == '<'.  Throws on malformed input; this
// is not a general XML parser, just enough for the PNML exchange subset.
inline XmlTag scan_tag(const std::string& text, std::size_t pos, int line) {
    XmlTag tag;
    std::size_t i = pos + 1;
    auto fail = [&](const std::string& msg) -> std::size_t {
        throw ParseError("malformed XML: " + msg, line);
    };
    if (i < text.size() && text[i] == '/') {
        tag.closing = true;
        ++i;
    }
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                               text[i] == ':' || text[i] == '_' || text[i] == '-' ||
                               text[i] == '.'))
        tag.name += text[i++];
    if (tag.name.empty()) fail("empty tag name");
    while (i < text.size() && text[i] != '>') {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] == '/' || text[i] == '?') {
            tag.self_closing = true;
            ++i;
            continue;
        }
        std::string key;
        while (i < text.size() && text[i] != '=' && text[i] != '>' &&
               !std::isspace(static_cast<unsigned char>(text[i])))
            key += text[i++];
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size() || text[i] != '=') {
            if (!key.empty()) tag.attrs.emplace_back(key, "");
            continue;
        }
        ++i;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size() || (text[i] != '"' && text[i] != '\'')) fail("unquoted attribute");
        char quote = text[i++];
        std::string val;
        while (i < text.size() && text[i] != quote) val += text[i++];
        if (i >= text.size()) fail("unterminated attribute value");
        ++i;
        tag.attrs.emplace_back(key, val);
    }
    if (i >= text.size()) fail("unterminated tag");
    tag.end = i + 1;
    return tag;
}

} // namespace detail

inline bool looks_like_pnml(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '<';
    }
    return false;
}

inline ParseResult parse_pnml(const std::string& text) {
    using detail::XmlTag;
    ParseResult res;
    PetriNet& net = res.system.net;

    struct PendingArc {
        std::string source, target;
        int line;
    };
    std::vector<PendingArc> arcs;
    std::vector<std::pair<std::string, uint32_t>> tokens;

    // Tags we understand plus pure containers we silently walk through.
    auto known = [](const std::string& n) {
        return n == "pnml" || n == "net" || n == "page" || n == "place" ||
               n == "transition" || n == "arc" || n == "initialMarking" || n == "text";
    };

    std::size_t pos = 0;
    int line = 1;
    std::string cur_place;        // place element being read, if any
    bool in_marking = false;
    bool in_text = false;
    bool skip_known_child = false;
    std::string text_content;
    std::vector<std::string> ignored;

    auto bump_lines = [&](std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
    };

    while (pos < text.size()) {
        std::size_t lt = text.find('<', pos);
        if (lt == std::string::npos) break;
        if (in_text) text_content += text.substr(pos, lt - pos);
        bump_lines(pos, lt);
        // comments and processing instructions
        if (text.compare(lt, 4, "<!--") == 0) {
            std::size_t end = text.find("-->", lt);
            if (end == std::string::npos) throw ParseError("unterminated XML comment", line);
            bump_lines(lt, end);
            pos = end + 3;
            continue;
        }
        if (text.compare(lt, 2, "<?") == 0 || text.compare(lt, 2, "<!") == 0) {
            std::size_t end = text.find('>', lt);
            if (end == std::string::npos) throw ParseError("unterminated XML declaration", line);
            pos = end + 1;
            continue;
        }

        XmlTag tag = detail::scan_tag(text, lt, line);
        pos = tag.end;

        if (tag.closing) {
            if (tag.name == "place") cur_place.clear();
            else if (tag.name == "initialMarking") in_marking = false;
            else if (tag.name == "text") {
                in_text = false;
                if (in_marking && !cur_place.empty() && !skip_known_child) {
                    try {
                        long n = std::stol(text_content);
                        if (n < 0) throw ParseError("negative initial marking", line);
                        if (n > 0) tokens.emplace_back(cur_place, static_cast<uint32_t>(n));
                    } catch (const ParseError&) {
                        throw;
                    } catch (const std::exception&) {
                        throw ParseError("bad initial marking '" + text_content + "'", line);
                    }
                }
            }
            continue;
        }

        try {
            if (tag.name == "place") {
                std::string id = detail::xml_attr(tag, "id");
                if (id.empty()) throw ParseError("place without id", line);
                net.add_place(id);
                if (!tag.self_closing) cur_place = id;
            } else if (tag.name == "transition") {
                std::string id = detail::xml_attr(tag, "id");
                if (id.empty()) throw ParseError("transition without id", line);
                net.add_transition(id);
            } else if (tag.name == "arc") {
                PendingArc a;
                a.source = detail::xml_attr(tag, "source");
                a.target = detail::xml_attr(tag, "target");
                a.line = line;
                if (a.source.empty() || a.target.empty())
                    throw ParseError("arc without source/target", line);
                arcs.push_back(a);
            } else if (tag.name == "initialMarking") {
                in_marking = true;
                text_content.clear();
            } else if (tag.name == "text") {
                in_text = true;
                skip_known_child = !in_marking;
                text_content.clear();
            } else if (!known(tag.name)) {
                ignored.push_back(tag.name);
            }
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line);
        }
    }

    for (const auto& a : arcs) {
        try {
            auto [src_is_place, src_id] = net.find(a.source);
            auto [dst_is_place, dst_id] = net.find(a.target);
            if (src_is_place == dst_is_place)
                throw ValidationError("arc '" + a.source + " -> " + a.target +
                                      "' must connect a place and a transition");
            if (src_is_place)
                net.add_arc_pt(src_id, dst_id);
            else
                net.add_arc_tp(src_id, dst_id);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), a.line);
        }
    }

    std::vector<std::pair<PlaceId, uint32_t>> m0;
    for (const auto& [label, n] : tokens) m0.emplace_back(net.place_by_label(label), n);
    res.system.m0 = Marking(std::move(m0));
    net.validate();

    // Deduplicate the ignore list so a big file does not drown the user.
    std::sort(ignored.begin(), ignored.end());
    ignored.erase(std::unique(ignored.begin(), ignored.end()), ignored.end());
    for (const auto& name : ignored)
        res.warnings.push_back("ignored PNML element <" + name + ">");
    return res;
}

// Dispatches on content: leading '<' means PNML, anything else the textual
// format.
inline ParseResult parse_any(const std::string& text) {
    return looks_like_pnml(text) ? parse_pnml(text) : parse_net(text);
}

} // namespace pntar
