#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qcf/verifier.hpp"

namespace qcf {

// JSON schema: {problem, h, margin, linf, l2, samples, order?, worst_points[]}
nlohmann::json report_to_json(const ResidualReport& rep);

// CSV sample dump with header "x,y,residual"; 17 significant digits.
void write_residual_csv(std::ostream& os, const ResidualReport& rep);
void write_residual_csv(const std::string& path, const ResidualReport& rep);

// CSV field dump "x,y,value" at the nodes of a rectangular grid field.
void write_field_csv(std::ostream& os, const RectGridField& f);

std::string format_double(double v);  // 17 significant digits

}  // namespace qcf
