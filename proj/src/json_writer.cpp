#include "collapse/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace collapse {

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("refusing to serialize a non-finite number");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
}

JsonValue& JsonValue::operator[](const std::string& key) {
    if (kind_ == Kind::Null) kind_ = Kind::Object;
    if (kind_ != Kind::Object) throw std::logic_error("not an object");
    for (auto& [name, value] : members_) {
        if (name == key) return value;
    }
    members_.emplace_back(key, JsonValue{});
    return members_.back().second;
}

const JsonValue& JsonValue::at(const std::string& key) const {
    if (kind_ != Kind::Object) throw std::logic_error("not an object");
    for (const auto& [name, value] : members_) {
        if (name == key) return value;
    }
    throw std::out_of_range("no member named " + key);
}

bool JsonValue::contains(const std::string& key) const {
    if (kind_ != Kind::Object) return false;
    for (const auto& [name, value] : members_) {
        if (name == key) return true;
    }
    return false;
}

void JsonValue::push_back(JsonValue v) {
    if (kind_ == Kind::Null) kind_ = Kind::Array;
    if (kind_ != Kind::Array) throw std::logic_error("not an array");
    items_.push_back(std::move(v));
}

const JsonValue& JsonValue::item(std::size_t i) const {
    if (kind_ != Kind::Array) throw std::logic_error("not an array");
    return items_.at(i);
}

std::size_t JsonValue::size() const {
    return kind_ == Kind::Array ? items_.size() : members_.size();
}

bool JsonValue::as_bool() const {
    if (kind_ != Kind::Bool) throw std::logic_error("not a bool");
    return bool_;
}

long long JsonValue::as_int() const {
    if (kind_ != Kind::Int) throw std::logic_error("not an integer");
    return int_;
}

double JsonValue::as_real() const {
    if (kind_ == Kind::Int) return static_cast<double>(int_);
    if (kind_ != Kind::Real) throw std::logic_error("not a number");
    return real_;
}

const std::string& JsonValue::as_string() const {
    if (kind_ != Kind::String) throw std::logic_error("not a string");
    return string_;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
        case Kind::Int: out += std::to_string(int_); break;
        case Kind::Real: out += format_double(real_); break;
        case Kind::String: write_escaped(out, string_); break;
        case Kind::Array:
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].write(out, indent, depth + 1);
                out += i + 1 < items_.size() ? ",\n" : "\n";
            }
            out += close_pad + "]";
            break;
        case Kind::Object:
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                out += pad;
                write_escaped(out, members_[i].first);
                out += ": ";
                members_[i].second.write(out, indent, depth + 1);
                out += i + 1 < members_.size() ? ",\n" : "\n";
            }
            out += close_pad + "}";
            break;
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

}  // namespace collapse
