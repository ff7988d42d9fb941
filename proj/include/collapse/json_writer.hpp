#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace collapse {

// Insertion-ordered JSON document used for summary output. Numbers serialize
// with 17 significant digits, so identical runs produce byte-identical files.
class JsonValue {
public:
    enum class Kind { Null, Bool, Int, Real, String, Array, Object };

    JsonValue() = default;
    JsonValue(bool v) : kind_(Kind::Bool), bool_(v) {}
    JsonValue(int v) : kind_(Kind::Int), int_(v) {}
    JsonValue(long long v) : kind_(Kind::Int), int_(v) {}
    JsonValue(std::size_t v) : kind_(Kind::Int), int_(static_cast<long long>(v)) {}
    JsonValue(double v) : kind_(Kind::Real), real_(v) {}
    JsonValue(const char* v) : kind_(Kind::String), string_(v) {}
    JsonValue(std::string v) : kind_(Kind::String), string_(std::move(v)) {}

    static JsonValue array();
    static JsonValue object();

    // Object access; inserts a null member on first use, keeps insertion order.
    JsonValue& operator[](const std::string& key);
    const JsonValue& at(const std::string& key) const;  // throws std::out_of_range
    bool contains(const std::string& key) const;

    void push_back(JsonValue v);                   // array append
    const JsonValue& item(std::size_t i) const;    // array element
    std::size_t size() const;                      // array/object member count

    Kind kind() const { return kind_; }
    bool as_bool() const;
    long long as_int() const;
    double as_real() const;  // accepts Int and Real
    const std::string& as_string() const;

    std::string dump(int indent = 2) const;

private:
    void write(std::string& out, int indent, int depth) const;

    Kind kind_ = Kind::Null;
    bool bool_ = false;
    long long int_ = 0;
    double real_ = 0.0;
    std::string string_;
    std::vector<std::pair<std::string, JsonValue>> members_;
    std::vector<JsonValue> items_;
};

// "%.17g" rendering shared by the JSON and CSV writers.
std::string format_double(double v);

}  // namespace collapse
