#include "qcf/report_io.hpp"

#include <fstream>
#include <sstream>

namespace qcf {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

nlohmann::json report_to_json(const ResidualReport& rep) {
    nlohmann::json j;
    j["problem"] = rep.problem_id;
    j["h"] = rep.h;
    j["margin"] = rep.margin;
    j["linf"] = rep.linf;
    j["l2"] = rep.l2;
    j["samples"] = rep.sample_count;
    if (rep.order) {
        j["order"] = *rep.order;
        j["order_warning"] = rep.order_warning;
    }
    j["worst_points"] = nlohmann::json::array();
    for (const auto& w : rep.worst)
        j["worst_points"].push_back({{"x", w.z.real()}, {"y", w.z.imag()}, {"residual", w.value}});
    return j;
}

void write_residual_csv(std::ostream& os, const ResidualReport& rep) {
    os << "x,y,residual\n";
    for (const auto& [z, r] : rep.samples)
        os << format_double(z.real()) << ',' << format_double(z.imag()) << ','
           << format_double(r) << '\n';
}

void write_residual_csv(const std::string& path, const ResidualReport& rep) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_residual_csv(os, rep);
}

void write_field_csv(std::ostream& os, const RectGridField& f) {
    os << "x,y,value\n";
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            const Complex z = f.node(i, j);
            os << format_double(z.real()) << ',' << format_double(z.imag()) << ','
               << format_double(f.at(i, j)) << '\n';
        }
}

}  // namespace qcf
