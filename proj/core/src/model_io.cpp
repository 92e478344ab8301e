#include "wristlog/model_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wristlog {

namespace {

std::string format_weight(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- minimal XML reader, just enough for the model schema ----

struct XmlNode {
    std::string name;
    std::map<std::string, std::string> attributes;
    std::vector<XmlNode> children;
    std::string text;

    const XmlNode& child(const std::string& n) const {
        for (const auto& c : children)
            if (c.name == n) return c;
        throw std::runtime_error("model XML: missing element <" + n + ">");
    }
    const XmlNode* find(const std::string& n) const {
        for (const auto& c : children)
            if (c.name == n) return &c;
        return nullptr;
    }
    const std::string& attribute(const std::string& n) const {
        auto it = attributes.find(n);
        if (it == attributes.end())
            throw std::runtime_error("model XML: <" + name + "> missing attribute '" + n + "'");
        return it->second;
    }
};

class XmlParser {
public:
    explicit XmlParser(std::string text) : text_(std::move(text)) {}

    XmlNode parse() {
        skip_whitespace_and_prolog();
        XmlNode root = parse_element();
        return root;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error("model XML: " + what + " near offset " + std::to_string(pos_));
    }

    char peek() { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void skip_whitespace_and_prolog() {
        skip_ws();
        if (text_.compare(pos_, 2, "<?") == 0) {
            auto end = text_.find("?>", pos_);
            if (end == std::string::npos) fail("unterminated prolog");
            pos_ = end + 2;
            skip_ws();
        }
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == '-'))
            ++pos_;
        if (pos_ == start) fail("expected name");
        return text_.substr(start, pos_ - start);
    }

    XmlNode parse_element() {
        if (peek() != '<') fail("expected '<'");
        ++pos_;
        XmlNode node;
        node.name = parse_name();
        skip_ws();
        while (peek() != '>' && peek() != '/') {
            std::string attr = parse_name();
            skip_ws();
            if (peek() != '=') fail("expected '=' after attribute name");
            ++pos_;
            skip_ws();
            if (peek() != '"') fail("expected '\"'");
            ++pos_;
            auto end = text_.find('"', pos_);
            if (end == std::string::npos) fail("unterminated attribute value");
            node.attributes[attr] = text_.substr(pos_, end - pos_);
            pos_ = end + 1;
            skip_ws();
        }
        if (peek() == '/') {
            ++pos_;
            if (peek() != '>') fail("malformed self-closing tag");
            ++pos_;
            return node;
        }
        ++pos_;  // consume '>'

        for (;;) {
            std::size_t next = text_.find('<', pos_);
            if (next == std::string::npos) fail("unterminated element <" + node.name + ">");
            node.text += text_.substr(pos_, next - pos_);
            pos_ = next;
            if (text_.compare(pos_, 2, "</") == 0) {
                pos_ += 2;
                std::string closing = parse_name();
                if (closing != node.name)
                    fail("mismatched closing tag </" + closing + "> for <" + node.name + ">");
                skip_ws();
                if (peek() != '>') fail("malformed closing tag");
                ++pos_;
                return node;
            }
            node.children.push_back(parse_element());
        }
    }
};

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const std::string& where) {
    std::istringstream in(text);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (values.size() != expected)
        throw std::runtime_error("model XML: " + where + " expected " + std::to_string(expected) +
                                 " values, got " + std::to_string(values.size()));
    return values;
}

}  // namespace

void save_model(const NetworkModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());

    out << "<?xml version=\"1.0\"?>\n";
    out << "<network architecture=\"" << to_string(model.arch) << "\" input=\"" << model.input_dim
        << "\" hidden=\"" << model.hidden_dim << "\" output=\"" << model.output_dim
        << "\" features=\"" << to_string(model.feature_kind) << "\" frame-dim=\""
        << model.frame_dim << "\">\n";

    out << "  <codebook>\n";
    for (const auto& s : model.codebook.alphabet()) out << "    <symbol>" << s << "</symbol>\n";
    out << "  </codebook>\n";

    if (model.has_normalizer) {
        out << "  <normalizer>\n    <lo>";
        for (std::size_t i = 0; i < model.normalizer.lo.size(); ++i)
            out << (i ? " " : "") << format_weight(model.normalizer.lo[i]);
        out << "</lo>\n    <hi>";
        for (std::size_t i = 0; i < model.normalizer.hi.size(); ++i)
            out << (i ? " " : "") << format_weight(model.normalizer.hi[i]);
        out << "</hi>\n  </normalizer>\n";
    }

    const auto names = model.weight_names();
    out << "  <weights>\n";
    for (std::size_t m = 0; m < model.weights.size(); ++m) {
        const Matrix& w = model.weights[m];
        out << "    <matrix name=\"" << names[m] << "\" rows=\"" << w.rows << "\" cols=\""
            << w.cols << "\">";
        for (std::size_t k = 0; k < w.data.size(); ++k)
            out << (k ? " " : "") << format_weight(w.data[k]);
        out << "</matrix>\n";
    }
    out << "  </weights>\n</network>\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

NetworkModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();

    XmlNode root = XmlParser(buffer.str()).parse();
    if (root.name != "network") throw std::runtime_error("model XML: root must be <network>");

    NetworkModel model = make_model(architecture_from_string(root.attribute("architecture")),
                                    std::stoi(root.attribute("input")),
                                    std::stoi(root.attribute("hidden")),
                                    std::stoi(root.attribute("output")));
    model.feature_kind = feature_kind_from_string(root.attribute("features"));
    model.frame_dim = std::stoi(root.attribute("frame-dim"));

    std::vector<std::string> alphabet;
    for (const auto& c : root.child("codebook").children) {
        if (c.name != "symbol") throw std::runtime_error("model XML: unexpected <" + c.name + ">");
        alphabet.push_back(c.text);
    }
    model.codebook = LabelCodebook(std::move(alphabet));
    if (model.codebook.size() != static_cast<std::size_t>(model.output_dim))
        throw std::runtime_error("model XML: codebook size does not match output layer");

    if (const XmlNode* norm = root.find("normalizer")) {
        const std::size_t dim = static_cast<std::size_t>(model.input_dim);
        model.normalizer.lo = parse_number_list(norm->child("lo").text, dim, "<lo>");
        model.normalizer.hi = parse_number_list(norm->child("hi").text, dim, "<hi>");
        model.has_normalizer = true;
    }

    const auto names = model.weight_names();
    const XmlNode& weights = root.child("weights");
    if (weights.children.size() != names.size())
        throw std::runtime_error("model XML: expected " + std::to_string(names.size()) +
                                 " weight matrices");
    for (std::size_t m = 0; m < names.size(); ++m) {
        const XmlNode& mat = weights.children[m];
        if (mat.name != "matrix" || mat.attribute("name") != names[m])
            throw std::runtime_error("model XML: expected <matrix name=\"" + names[m] + "\">");
        Matrix& w = model.weights[m];
        if (std::stoul(mat.attribute("rows")) != w.rows ||
            std::stoul(mat.attribute("cols")) != w.cols)
            throw std::runtime_error("model XML: matrix " + names[m] +
                                     " has inconsistent dimensions");
        w.data = parse_number_list(mat.text, w.rows * w.cols, names[m]);
    }
    return model;
}

}  // namespace wristlog
