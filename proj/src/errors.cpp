#include "devinatz/errors.hpp"

#include <sstream>

namespace devinatz {

void require_all(const ResidualRecord& record, const std::string& context) {
    ResidualRecord failing;
    for (const auto& r : record)
        if (!(r.value <= r.threshold)) failing.push_back(r);
    if (failing.empty()) return;
    std::ostringstream msg;
    msg.precision(3);
    msg << context << ": ";
    for (std::size_t i = 0; i < failing.size(); ++i) {
        if (i) msg << ", ";
        msg << failing[i].name << " = " << failing[i].value << " > " << failing[i].threshold;
    }
    throw ValidationFailed(msg.str(), std::move(failing));
}

}  // namespace devinatz
