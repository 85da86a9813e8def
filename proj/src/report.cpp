#include "schur/report.hpp"

#include <sstream>

namespace schur {

const char* kVersion = "1.0.0";

std::string render_pretty(const nlohmann::ordered_json& j, int indent) {
    std::ostringstream os;
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object() || (it.value().is_array() && it.value().size() > 8)) {
                os << pad << it.key() << ":\n" << render_pretty(it.value(), indent + 2);
            } else {
                os << pad << it.key() << ": " << it.value().dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (auto& v : j) os << render_pretty(v, indent);
    } else {
        os << pad << j.dump() << "\n";
    }
    return os.str();
}

}  // namespace schur
