// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/dataset.hpp"

#include "hazpipe/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace hazpipe {

ClassRegistry::ClassRegistry()
    : names_{"poison",
             "oxygen",
             "flammable",
             "flammable-solid",
             "corrosive",
             "dangerous",
             "non-flammable-gas",
             "organic-peroxide",
             "explosive",
             "radioactive",
             "inhalation-hazard",
             "spontaneously-combustible",
             "infectious-substance"},
      aliases_{{"flammable-gas", "flammable"}} {}

const ClassRegistry& ClassRegistry::standard() {
    static const ClassRegistry registry;
    return registry;
}

const std::string& ClassRegistry::name(int class_id) const {
    return names_.at(static_cast<std::size_t>(class_id));
}

std::string ClassRegistry::canonicalize(std::string_view raw_name) {
    std::string out;
    out.reserve(raw_name.size());
    for (char ch : raw_name) {
        if (ch == ' ' || ch == '_') {
            out.push_back('-');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    return out;
}

std::optional<int> ClassRegistry::find(std::string_view raw_name) const {
    std::string canon = canonicalize(raw_name);
    for (const auto& [alias, target] : aliases_) {
        if (canon == alias) {
            canon = target;
            break;
        }
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == canon) return static_cast<int>(i);
    }
    return std::nullopt;
}

int ClassRegistry::resolve(std::string_view raw_name) const {
    if (auto id = find(raw_name)) return *id;
    throw UnknownClass(std::string(raw_name));
}

// ---------------------------------------------------------------------------
// Minimal XML element tree, just enough for VOC annotation documents.
// Attributes are parsed and discarded; standard entities are decoded.

namespace {

struct XmlElement {
    std::string name;
    std::string text;
    std::vector<XmlElement> children;

    const XmlElement* child(std::string_view child_name) const {
        for (const auto& c : children) {
            if (c.name == child_name) return &c;
        }
        return nullptr;
    }
};

class XmlParser {
public:
    explicit XmlParser(std::string_view text) : text_(text) {}

    XmlElement parse_document() {
        skip_prolog();
        XmlElement root = parse_element();
        skip_whitespace_and_comments();
        if (pos_ != text_.size()) throw XmlError("trailing content after root element");
        return root;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) { throw XmlError(what); }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void skip_whitespace() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    void skip_whitespace_and_comments() {
        for (;;) {
            skip_whitespace();
            if (starts_with("<!--")) {
                const auto end = text_.find("-->", pos_ + 4);
                if (end == std::string_view::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else {
                break;
            }
        }
    }

    void skip_prolog() {
        skip_whitespace();
        if (starts_with("<?")) {
            const auto end = text_.find("?>", pos_ + 2);
            if (end == std::string_view::npos) fail("unterminated XML declaration");
            pos_ = end + 2;
        }
        skip_whitespace_and_comments();
    }

    std::string parse_name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == ':' || c == '.') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_attributes() {
        for (;;) {
            skip_whitespace();
            const char c = peek();
            if (c == '>' || c == '/' || c == '\0') return;
            parse_name();
            skip_whitespace();
            if (peek() != '=') fail("malformed attribute");
            ++pos_;
            skip_whitespace();
            const char quote = peek();
            if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
            ++pos_;
            const auto end = text_.find(quote, pos_);
            if (end == std::string_view::npos) fail("unterminated attribute value");
            pos_ = end + 1;
        }
    }

    static std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        std::size_t i = 0;
        while (i < raw.size()) {
            if (raw[i] != '&') {
                out.push_back(raw[i++]);
                continue;
            }
            const auto semi = raw.find(';', i);
            if (semi == std::string_view::npos) throw XmlError("unterminated entity");
            const std::string_view entity = raw.substr(i + 1, semi - i - 1);
            if (entity == "amp") out.push_back('&');
            else if (entity == "lt") out.push_back('<');
            else if (entity == "gt") out.push_back('>');
            else if (entity == "quot") out.push_back('"');
            else if (entity == "apos") out.push_back('\'');
            else throw XmlError("unknown entity: &" + std::string(entity) + ";");
            i = semi + 1;
        }
        return out;
    }

    XmlElement parse_element() {
        if (peek() != '<') fail("expected element");
        ++pos_;
        XmlElement el;
        el.name = parse_name();
        skip_attributes();
        if (starts_with("/>")) {
            pos_ += 2;
            return el;
        }
        if (peek() != '>') fail("malformed start tag");
        ++pos_;

        std::string text;
        for (;;) {
            if (pos_ >= text_.size()) fail("unterminated element: " + el.name);
            if (starts_with("<!--")) {
                const auto end = text_.find("-->", pos_ + 4);
                if (end == std::string_view::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (starts_with("</")) {
                pos_ += 2;
                const std::string closing = parse_name();
                if (closing != el.name) fail("mismatched closing tag: " + closing);
                skip_whitespace();
                if (peek() != '>') fail("malformed closing tag");
                ++pos_;
                break;
            } else if (peek() == '<') {
                el.children.push_back(parse_element());
            } else {
                const auto lt = text_.find('<', pos_);
                if (lt == std::string_view::npos) fail("unterminated element: " + el.name);
                text.append(text_.substr(pos_, lt - pos_));
                pos_ = lt;
            }
        }
        // whitespace around text is formatting, not content
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos) {
            const auto last = text.find_last_not_of(" \t\r\n");
            el.text = decode_entities(std::string_view(text).substr(first, last - first + 1));
        }
        return el;
    }
};

std::string xml_escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const XmlElement& el) {
    double v = 0.0;
    const char* first = el.text.data();
    const char* last = first + el.text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw XmlError("expected a number in <" + el.name + ">");
    }
    return v;
}

int parse_int(const XmlElement& el) {
    const double v = parse_double(el);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw XmlError("expected an integer in <" + el.name + ">");
    return i;
}

const XmlElement& require_child(const XmlElement& parent, std::string_view name) {
    if (const auto* c = parent.child(name)) return *c;
    throw XmlError("missing <" + std::string(name) + "> in <" + parent.name + ">");
}

}  // namespace

VocAnnotation voc_parse(std::string_view xml_text, const ClassRegistry& registry) {
    XmlParser parser(xml_text);
    const XmlElement root = parser.parse_document();
    if (root.name != "annotation") throw XmlError("root element must be <annotation>");

    VocAnnotation ann;
    ann.filename = require_child(root, "filename").text;
    const XmlElement& size = require_child(root, "size");
    ann.width = parse_int(require_child(size, "width"));
    ann.height = parse_int(require_child(size, "height"));
    if (const auto* depth = size.child("depth")) ann.depth = parse_int(*depth);
    if (ann.width <= 0 || ann.height <= 0) throw XmlError("image size must be positive");

    for (const auto& child : root.children) {
        if (child.name != "object") continue;
        VocObject obj;
        obj.class_name = require_child(child, "name").text;
        registry.resolve(obj.class_name);  // reject unknown classes
        if (const auto* difficult = child.child("difficult")) {
            obj.difficult = parse_int(*difficult) != 0;
        }
        const XmlElement& bnd = require_child(child, "bndbox");
        obj.box.x_min = parse_double(require_child(bnd, "xmin"));
        obj.box.y_min = parse_double(require_child(bnd, "ymin"));
        obj.box.x_max = parse_double(require_child(bnd, "xmax"));
        obj.box.y_max = parse_double(require_child(bnd, "ymax"));
        if (!obj.box.valid() || obj.box.x_min < 0 || obj.box.y_min < 0 ||
            obj.box.x_max > ann.width || obj.box.y_max > ann.height) {
            throw OutOfBoundsBox("object box outside image bounds in " + ann.filename);
        }
        ann.objects.push_back(std::move(obj));
    }
    return ann;
}

std::string voc_write(const VocAnnotation& annotation) {
    std::ostringstream out;
    out << "<annotation>\n";
    out << "  <filename>" << xml_escape(annotation.filename) << "</filename>\n";
    out << "  <size>\n";
    out << "    <width>" << annotation.width << "</width>\n";
    out << "    <height>" << annotation.height << "</height>\n";
    out << "    <depth>" << annotation.depth << "</depth>\n";
    out << "  </size>\n";
    for (const auto& obj : annotation.objects) {
        out << "  <object>\n";
        out << "    <name>" << xml_escape(obj.class_name) << "</name>\n";
        out << "    <difficult>" << (obj.difficult ? 1 : 0) << "</difficult>\n";
        out << "    <bndbox>\n";
        out << "      <xmin>" << format_double(obj.box.x_min) << "</xmin>\n";
        out << "      <ymin>" << format_double(obj.box.y_min) << "</ymin>\n";
        out << "      <xmax>" << format_double(obj.box.x_max) << "</xmax>\n";
        out << "      <ymax>" << format_double(obj.box.y_max) << "</ymax>\n";
        out << "    </bndbox>\n";
        out << "  </object>\n";
    }
    out << "</annotation>\n";
    return out.str();
}

SplitResult split_dataset(std::span<const SplitItem> items, double train_fraction,
                          std::uint64_t seed) {
    if (items.empty()) throw EmptySet("cannot split an empty item set");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must be in (0, 1)");
    }

    std::map<int, std::vector<std::string>> by_class;
    for (const auto& item : items) by_class[item.class_id].push_back(item.id);

    std::mt19937_64 rng(seed);
    SplitResult result;
    for (auto& [class_id, ids] : by_class) {
        // explicit Fisher-Yates so the split is identical across platforms
        for (std::size_t i = ids.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(ids[i - 1], ids[j]);
        }
        const auto n = static_cast<double>(ids.size());
        const auto train_count = std::min(
            ids.size(), static_cast<std::size_t>(std::ceil(n * train_fraction - 1e-9)));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            (i < train_count ? result.train : result.test).push_back(ids[i]);
        }
    }
    result.test_empty = result.test.empty();
    return result;
}

namespace {

std::uint8_t clamp_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

void apply_hflip(Frame& frame, VocAnnotation& ann) {
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width / 2; ++x) {
            for (int c = 0; c < 3; ++c) {
                std::swap(frame.rgb(x, y)[c], frame.rgb(frame.width - 1 - x, y)[c]);
            }
        }
    }
    for (auto& obj : ann.objects) {
        const double x_min = ann.width - obj.box.x_max;
        const double x_max = ann.width - obj.box.x_min;
        obj.box.x_min = x_min;
        obj.box.x_max = x_max;
    }
}

void apply_rotation(Frame& frame, VocAnnotation& ann, double degrees) {
    if (degrees == 0.0) return;
    const double rad = degrees * std::numbers::pi / 180.0;
    const double cx = frame.width / 2.0;
    const double cy = frame.height / 2.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);

    // nearest-neighbor inverse mapping; out-of-canvas samples black
    std::vector<std::uint8_t> rotated(frame.pixels.size(), 0);
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            const double dx = (x + 0.5) - cx;
            const double dy = (y + 0.5) - cy;
            const double sx = cx + c * dx + s * dy;
            const double sy = cy - s * dx + c * dy;
            const int ix = static_cast<int>(std::floor(sx));
            const int iy = static_cast<int>(std::floor(sy));
            if (ix >= 0 && ix < frame.width && iy >= 0 && iy < frame.height) {
                const std::uint8_t* src = frame.rgb(ix, iy);
                std::uint8_t* dst = rotated.data() + 3 * (static_cast<std::size_t>(y) * frame.width + x);
                dst[0] = src[0];
                dst[1] = src[1];
                dst[2] = src[2];
            }
        }
    }
    frame.pixels = std::move(rotated);

    for (auto& obj : ann.objects) {
        const Point corners[4] = {{obj.box.x_min, obj.box.y_min},
                                  {obj.box.x_max, obj.box.y_min},
                                  {obj.box.x_max, obj.box.y_max},
                                  {obj.box.x_min, obj.box.y_max}};
        double x_min = std::numeric_limits<double>::infinity();
        double y_min = std::numeric_limits<double>::infinity();
        double x_max = -std::numeric_limits<double>::infinity();
        double y_max = -std::numeric_limits<double>::infinity();
        for (const auto& p : corners) {
            const double dx = p.x - cx;
            const double dy = p.y - cy;
            const double rx = cx + c * dx - s * dy;
            const double ry = cy + s * dx + c * dy;
            x_min = std::min(x_min, rx);
            y_min = std::min(y_min, ry);
            x_max = std::max(x_max, rx);
            y_max = std::max(y_max, ry);
        }
        obj.box = BBox{std::clamp(x_min, 0.0, static_cast<double>(ann.width)),
                       std::clamp(y_min, 0.0, static_cast<double>(ann.height)),
                       std::clamp(x_max, 0.0, static_cast<double>(ann.width)),
                       std::clamp(y_max, 0.0, static_cast<double>(ann.height))};
    }
}

void apply_brightness(Frame& frame, double delta) {
    const double scale = 1.0 + delta;
    for (auto& v : frame.pixels) v = clamp_byte(std::round(v * scale));
}

double sample_uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

}  // namespace

std::pair<Frame, VocAnnotation> augment(const Frame& image, const VocAnnotation& annotation,
                                        std::span<const AugmentOp> ops, std::uint64_t seed) {
    Frame frame = image;
    VocAnnotation ann = annotation;
    std::mt19937_64 rng(seed);

    for (const auto& op : ops) {
        switch (op.kind) {
            case AugmentOp::Kind::HorizontalFlip:
                apply_hflip(frame, ann);
                break;
            case AugmentOp::Kind::Rotate: {
                const double deg =
                    op.randomized ? sample_uniform(rng, -15.0, 15.0) : op.amount;
                if (!(deg >= -15.0 && deg <= 15.0)) {
                    throw std::invalid_argument("rotation must stay within +/-15 degrees");
                }
                apply_rotation(frame, ann, deg);
                break;
            }
            case AugmentOp::Kind::Brightness: {
                const double delta =
                    op.randomized ? sample_uniform(rng, -0.2, 0.2) : op.amount;
                if (!(delta >= -0.2 && delta <= 0.2)) {
                    throw std::invalid_argument("brightness delta must stay within +/-20%");
                }
                apply_brightness(frame, delta);
                break;
            }
        }
    }
    return {std::move(frame), std::move(ann)};
}

}  // namespace hazpipe
