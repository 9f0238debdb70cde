#include "limitset/report.hpp"

#include <cstdio>
#include <sstream>

namespace limitset {

namespace {

void dump_rec(const nlohmann::ordered_json& j, std::ostringstream& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    switch (j.type()) {
        case nlohmann::ordered_json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (const auto& [key, val] : j.items()) {
                if (!first) out << ",\n";
                first = false;
                out << pad_in << nlohmann::ordered_json(key).dump() << ": ";
                dump_rec(val, out, indent, depth + 1);
            }
            out << "\n" << pad << "}";
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            bool first = true;
            for (const auto& val : j) {
                if (!first) out << ",\n";
                first = false;
                out << pad_in;
                dump_rec(val, out, indent, depth + 1);
            }
            out << "\n" << pad << "]";
            return;
        }
        case nlohmann::ordered_json::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out << buf;
            return;
        }
        default:
            out << j.dump();
            return;
    }
}

}  // namespace

std::string dump_json17(const nlohmann::ordered_json& j, int indent) {
    std::ostringstream out;
    dump_rec(j, out, indent, 0);
    out << "\n";
    return out.str();
}

}  // namespace limitset
