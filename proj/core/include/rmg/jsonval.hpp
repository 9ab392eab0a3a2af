// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rmg/types.hpp"

namespace rmg {

/// Minimal ordered JSON value used for everything the library writes.
///
/// Output is byte-stable: object keys keep insertion order and floating point
/// numbers are always written with 17 significant digits (std::to_chars,
/// locale independent), which round-trips doubles exactly. Parsing of input
/// files is handled elsewhere; this type is write-only on purpose.
class Json {
public:
    Json() : type_(Type::null) {}
    Json(bool b) : type_(Type::boolean), bool_(b) {}
    Json(double d) : type_(Type::number), num_(d) {}
    Json(int64_t i) : type_(Type::integer), int_(i) {}
    Json(int i) : type_(Type::integer), int_(i) {}
    Json(size_t u) : type_(Type::integer), int_(static_cast<int64_t>(u)) {}
    Json(const char* s) : type_(Type::string), str_(s) {}
    Json(std::string s) : type_(Type::string), str_(std::move(s)) {}
    Json(const numvec& v) : type_(Type::array) {
        arr_.reserve(v.size());
        for (double d : v) arr_.emplace_back(d);
    }

    static Json object() {
        Json j;
        j.type_ = Type::object;
        return j;
    }
    static Json array() {
        Json j;
        j.type_ = Type::array;
        return j;
    }

    /// Object access; inserts a null member if the key is absent.
    Json& operator[](const std::string& key);

    /// Array append.
    void push_back(Json v);

    bool is_null() const { return type_ == Type::null; }
    size_t size() const { return type_ == Type::array ? arr_.size() : obj_.size(); }

    /// Serialize; indent < 0 gives compact output, otherwise pretty printed
    /// with `indent` spaces per level.
    std::string dump(int indent = 2) const;

private:
    enum class Type { null, boolean, number, integer, string, array, object };

    void write(std::string& out, int indent, int depth) const;

    Type type_;
    bool bool_ = false;
    double num_ = 0.0;
    int64_t int_ = 0;
    std::string str_;
    std::vector<Json> arr_;
    std::vector<std::pair<std::string, Json>> obj_;
};

} // namespace rmg
