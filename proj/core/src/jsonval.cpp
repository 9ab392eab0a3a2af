// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/jsonval.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rmg {

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out.push_back(c);
            }
        }
    }
    out.push_back('"');
}

void write_double(std::string& out, double d) {
    if (!std::isfinite(d)) {
        // JSON has no inf/nan literals; the library encodes them as strings
        // where they can legitimately appear (norm exponents).
        out += d > 0 ? "\"inf\"" : (d < 0 ? "\"-inf\"" : "\"nan\"");
        return;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

} // namespace

Json& Json::operator[](const std::string& key) {
    if (type_ == Type::null) type_ = Type::object;
    if (type_ != Type::object) throw std::logic_error("Json: operator[] on non-object");
    for (auto& [k, v] : obj_)
        if (k == key) return v;
    obj_.emplace_back(key, Json());
    return obj_.back().second;
}

void Json::push_back(Json v) {
    if (type_ == Type::null) type_ = Type::array;
    if (type_ != Type::array) throw std::logic_error("Json: push_back on non-array");
    arr_.push_back(std::move(v));
}

void Json::write(std::string& out, int indent, int depth) const {
    auto newline = [&](int d) {
        if (indent >= 0) {
            out.push_back('\n');
            out.append(static_cast<size_t>(indent * d), ' ');
        }
    };
    switch (type_) {
    case Type::null: out += "null"; break;
    case Type::boolean: out += bool_ ? "true" : "false"; break;
    case Type::integer: {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), int_);
        out.append(buf, res.ptr);
        break;
    }
    case Type::number: write_double(out, num_); break;
    case Type::string: write_escaped(out, str_); break;
    case Type::array: {
        if (arr_.empty()) {
            out += "[]";
            break;
        }
        out.push_back('[');
        for (size_t i = 0; i < arr_.size(); i++) {
            if (i > 0) out.push_back(',');
            newline(depth + 1);
            arr_[i].write(out, indent, depth + 1);
        }
        newline(depth);
        out.push_back(']');
        break;
    }
    case Type::object: {
        if (obj_.empty()) {
            out += "{}";
            break;
        }
        out.push_back('{');
        for (size_t i = 0; i < obj_.size(); i++) {
            if (i > 0) out.push_back(',');
            newline(depth + 1);
            write_escaped(out, obj_[i].first);
            out.push_back(':');
            if (indent >= 0) out.push_back(' ');
            obj_[i].second.write(out, indent, depth + 1);
        }
        newline(depth);
        out.push_back('}');
        break;
    }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    if (indent >= 0) out.push_back('\n');
    return out;
}

} // namespace rmg
