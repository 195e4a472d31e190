// SPDX-License-Identifier: Apache-2.0
#include "ttconv/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace ttconv {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

struct RawLayer {
    std::string id;
    int line = 0;
    std::optional<Index> kernel;
    std::optional<Index> in_channels;
    std::optional<Index> out_channels;
    std::optional<Index> input_h;
    std::optional<Index> input_w;
    std::optional<bool> selected;
    std::optional<bool> bias;
    std::optional<Index> order;
    std::optional<std::vector<Index>> in_factors;
    std::optional<std::vector<Index>> out_factors;
};

class Parser {
public:
    Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

    NetworkManifest run() {
        parse_lines();
        if (!schema_seen_) {
            fail(1, "missing required key 'schema' (expected " + std::string(kManifestSchema) + ")");
        }
        return validate();
    }

private:
    [[noreturn]] void fail(int line, const std::string& message) const {
        throw ParseError(std::string(source_) + ":" + std::to_string(line) + ": " + message);
    }

    Index parse_int(int line, std::string_view field, std::string_view value) const {
        Index out = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            fail(line, "field '" + std::string(field) + "': expected an integer, got '" +
                           std::string(value) + "'");
        }
        return out;
    }

    bool parse_bool(int line, std::string_view field, std::string_view value) const {
        if (value == "true" || value == "yes") return true;
        if (value == "false" || value == "no") return false;
        fail(line, "field '" + std::string(field) + "': expected true/false/yes/no, got '" +
                       std::string(value) + "'");
    }

    std::vector<Index> parse_factor_list(int line, std::string_view field,
                                         std::string_view value) const {
        std::vector<Index> factors;
        std::size_t start = 0;
        while (start <= value.size()) {
            std::size_t comma = value.find(',', start);
            std::string_view item = trim(value.substr(
                start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (item.empty()) {
                fail(line, "field '" + std::string(field) + "': empty factor entry");
            }
            factors.push_back(parse_int(line, field, item));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return factors;
    }

    void handle_global(int line, std::string_view key, std::string_view value) {
        if (key == "schema") {
            if (value != kManifestSchema) {
                fail(line, "unsupported schema '" + std::string(value) + "', expected '" +
                               std::string(kManifestSchema) + "'");
            }
            schema_seen_ = true;
        } else if (key == "name") {
            manifest_.name = std::string(value);
        } else if (key == "order") {
            manifest_.default_order = parse_int(line, key, value);
        } else if (key == "strategy") {
            if (value == "balanced") {
                manifest_.strategy = FactorStrategy::kBalanced;
            } else if (value == "explicit") {
                manifest_.strategy = FactorStrategy::kExplicit;
            } else {
                fail(line, "field 'strategy': expected balanced or explicit, got '" +
                               std::string(value) + "'");
            }
        } else {
            fail(line, "unknown top-level key '" + std::string(key) + "'");
        }
    }

    void handle_layer_key(int line, RawLayer& layer, std::string_view key,
                          std::string_view value) {
        if (key == "kernel") {
            layer.kernel = parse_int(line, key, value);
        } else if (key == "in") {
            layer.in_channels = parse_int(line, key, value);
        } else if (key == "out") {
            layer.out_channels = parse_int(line, key, value);
        } else if (key == "input") {
            std::size_t x = value.find('x');
            if (x == std::string_view::npos) {
                fail(line, "field 'input': expected <H>x<W>, got '" + std::string(value) + "'");
            }
            layer.input_h = parse_int(line, key, trim(value.substr(0, x)));
            layer.input_w = parse_int(line, key, trim(value.substr(x + 1)));
        } else if (key == "selected") {
            layer.selected = parse_bool(line, key, value);
        } else if (key == "bias") {
            layer.bias = parse_bool(line, key, value);
        } else if (key == "order") {
            layer.order = parse_int(line, key, value);
        } else if (key == "in_factors") {
            layer.in_factors = parse_factor_list(line, key, value);
        } else if (key == "out_factors") {
            layer.out_factors = parse_factor_list(line, key, value);
        } else {
            fail(line, "unknown layer key '" + std::string(key) + "'");
        }
    }

    void parse_lines() {
        std::istringstream stream{std::string(text_)};
        std::string raw_line;
        int line_no = 0;
        RawLayer* current = nullptr;
        while (std::getline(stream, raw_line)) {
            ++line_no;
            std::string_view line{raw_line};
            if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) continue;

            if (line == "}") {
                if (!current) fail(line_no, "'}' outside a layer block");
                current = nullptr;
                continue;
            }
            if (line.starts_with("layer ")) {
                if (current) fail(line_no, "nested layer blocks are not allowed");
                std::string_view rest = trim(line.substr(6));
                if (!rest.ends_with('{')) {
                    fail(line_no, "expected 'layer <id> {', got '" + std::string(line) + "'");
                }
                std::string id{trim(rest.substr(0, rest.size() - 1))};
                if (id.empty()) fail(line_no, "layer id must be non-empty");
                raw_layers_.push_back(RawLayer{});
                raw_layers_.back().id = std::move(id);
                raw_layers_.back().line = line_no;
                current = &raw_layers_.back();
                continue;
            }
            std::size_t eq = line.find('=');
            if (eq == std::string_view::npos) {
                fail(line_no, "expected 'key = value', got '" + std::string(line) + "'");
            }
            std::string_view key = trim(line.substr(0, eq));
            std::string_view value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) {
                fail(line_no, "expected 'key = value', got '" + std::string(line) + "'");
            }
            if (current) {
                handle_layer_key(line_no, *current, key, value);
            } else {
                handle_global(line_no, key, value);
            }
        }
        if (current) fail(line_no, "unterminated layer block '" + current->id + "'");
    }

    NetworkManifest validate() {
        std::vector<std::string> problems;
        auto complain = [&](const RawLayer& layer, const std::string& what) {
            problems.push_back("layer '" + layer.id + "' (line " + std::to_string(layer.line) +
                               "): " + what);
        };
        if (manifest_.default_order < 1) {
            problems.push_back("global order must be >= 1, got " +
                               std::to_string(manifest_.default_order));
        }

        std::set<std::string> seen;
        for (const RawLayer& raw : raw_layers_) {
            if (!seen.insert(raw.id).second) {
                problems.push_back("duplicate layer id '" + raw.id + "' (line " +
                                   std::to_string(raw.line) + ")");
                continue;
            }
            if (!raw.kernel) complain(raw, "missing 'kernel'");
            if (!raw.in_channels) complain(raw, "missing 'in'");
            if (!raw.out_channels) complain(raw, "missing 'out'");
            if (!raw.input_h) complain(raw, "missing 'input'");
            if (raw.kernel && *raw.kernel < 1) complain(raw, "kernel size must be >= 1");
            if (raw.in_channels && *raw.in_channels < 1) complain(raw, "'in' must be >= 1");
            if (raw.out_channels && *raw.out_channels < 1) complain(raw, "'out' must be >= 1");
            if (raw.input_h && (*raw.input_h < 1 || *raw.input_w < 1)) {
                complain(raw, "input extent must be positive");
            }
            if (raw.order && *raw.order < 1) complain(raw, "order must be >= 1");

            const Index order = raw.order.value_or(manifest_.default_order);
            bool factors_ok = true;
            if (manifest_.strategy == FactorStrategy::kExplicit &&
                (!raw.in_factors || !raw.out_factors)) {
                complain(raw, "strategy is explicit but factor lists are missing");
                factors_ok = false;
            }
            if (raw.in_factors && static_cast<Index>(raw.in_factors->size()) != order) {
                complain(raw, "in_factors has " + std::to_string(raw.in_factors->size()) +
                                  " entries, order is " + std::to_string(order));
                factors_ok = false;
            }
            if (raw.out_factors && static_cast<Index>(raw.out_factors->size()) != order) {
                complain(raw, "out_factors has " + std::to_string(raw.out_factors->size()) +
                                  " entries, order is " + std::to_string(order));
                factors_ok = false;
            }
            if (!raw.kernel || !raw.in_channels || !raw.out_channels || !raw.input_h ||
                !factors_ok || order < 1) {
                continue; // plan resolution needs the basics
            }

            ManifestLayer layer;
            layer.id = raw.id;
            layer.selected = raw.selected.value_or(false);
            layer.input_height = *raw.input_h;
            layer.input_width = *raw.input_w;
            layer.explicit_factors = raw.in_factors.has_value() || raw.out_factors.has_value();
            layer.spec.kernel_size = *raw.kernel;
            layer.spec.in_channels = *raw.in_channels;
            layer.spec.out_channels = *raw.out_channels;
            layer.spec.has_bias = raw.bias.value_or(false);
            try {
                layer.spec.in_plan = raw.in_factors
                                         ? plan_explicit(*raw.in_channels, *raw.in_factors)
                                         : plan_balanced(*raw.in_channels, order);
                layer.spec.out_plan = raw.out_factors
                                          ? plan_explicit(*raw.out_channels, *raw.out_factors)
                                          : plan_balanced(*raw.out_channels, order);
                layer.spec.validate();
            } catch (const Error& e) {
                complain(raw, e.what());
                continue;
            }
            if (*raw.input_h < *raw.kernel || *raw.input_w < *raw.kernel) {
                complain(raw, "input extent is smaller than the kernel");
            }
            manifest_.layers.push_back(std::move(layer));
        }

        if (!problems.empty()) {
            std::string message = std::string(source_) + ": manifest validation failed:";
            for (const std::string& p : problems) message += "\n  - " + p;
            throw ValidationError(message);
        }
        return std::move(manifest_);
    }

    std::string_view text_;
    std::string_view source_;
    NetworkManifest manifest_;
    std::vector<RawLayer> raw_layers_;
    bool schema_seen_ = false;
};

std::string factor_list(const std::vector<Index>& factors) {
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(factors[i]);
    }
    return out;
}

} // namespace

const ManifestLayer* NetworkManifest::find_layer(std::string_view id) const {
    auto it = std::find_if(layers.begin(), layers.end(),
                           [&](const ManifestLayer& layer) { return layer.id == id; });
    return it == layers.end() ? nullptr : &*it;
}

NetworkManifest parse_manifest(std::string_view text, std::string_view source_name) {
    return Parser(text, source_name).run();
}

NetworkManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw IoError("cannot open manifest file '" + path.string() + "'");
    }
    std::ostringstream content;
    content << stream.rdbuf();
    return parse_manifest(content.str(), path.string());
}

std::string render_manifest(const NetworkManifest& manifest) {
    std::string out;
    out += "schema = ";
    out += kManifestSchema;
    out += "\n";
    out += "name = " + manifest.name + "\n";
    out += "order = " + std::to_string(manifest.default_order) + "\n";
    out += "strategy = ";
    out += manifest.strategy == FactorStrategy::kBalanced ? "balanced" : "explicit";
    out += "\n";
    for (const ManifestLayer& layer : manifest.layers) {
        out += "\nlayer " + layer.id + " {\n";
        out += "  kernel = " + std::to_string(layer.spec.kernel_size) + "\n";
        out += "  in = " + std::to_string(layer.spec.in_channels) + "\n";
        out += "  out = " + std::to_string(layer.spec.out_channels) + "\n";
        out += "  input = " + std::to_string(layer.input_height) + "x" +
               std::to_string(layer.input_width) + "\n";
        out += "  selected = ";
        out += layer.selected ? "yes" : "no";
        out += "\n";
        out += "  bias = ";
        out += layer.spec.has_bias ? "yes" : "no";
        out += "\n";
        out += "  order = " + std::to_string(layer.spec.tt_order()) + "\n";
        out += "  in_factors = " + factor_list(layer.spec.in_plan.factors) + "\n";
        out += "  out_factors = " + factor_list(layer.spec.out_plan.factors) + "\n";
        out += "}\n";
    }
    return out;
}

} // namespace ttconv
