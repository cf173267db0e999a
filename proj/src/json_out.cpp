#include "rotdev/json_out.hpp"

#include <cmath>
#include <cstdio>

namespace rotdev {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write(const Json& v, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
    case Json::value_t::object: {
        if (v.empty()) { out += "{}"; return; }
        out += "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += inner + Json(it.key()).dump() + ": ";
            write(it.value(), indent + 1, out);
        }
        out += "\n" + pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (v.empty()) { out += "[]"; return; }
        // Short numeric arrays (points, vectors) stay on one line.
        bool flat = v.size() <= 4;
        for (const auto& e : v) flat = flat && e.is_primitive();
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ", ";
                write(v[i], 0, out);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",\n";
            out += inner;
            write(v[i], indent + 1, out);
        }
        out += "\n" + pad + "]";
        return;
    }
    case Json::value_t::number_float: {
        const double d = v.get<double>();
        out += std::isfinite(d) ? format_double(d) : "null";
        return;
    }
    default:
        out += v.dump();
        return;
    }
}

} // namespace

std::string dump_json(const Json& value) {
    std::string out;
    write(value, 0, out);
    out += "\n";
    return out;
}

} // namespace rotdev
