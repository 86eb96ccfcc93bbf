#pragma once

#include "latcell/asymptotics.hpp"
#include "latcell/energy.hpp"

#include "json.hpp"

#include <string>
#include <utility>
#include <vector>

namespace latcell::report {

/// Full-precision decimal text (round-trips to the same double).
std::string format_double(double x);

/// Semicolon-joined vector components (commas stay CSV separators).
std::string join_components(const std::vector<double>& v);

/// Columns: label,F,normal,value.
std::string density_table_csv(const energy::DensityTable& table);
nlohmann::json density_table_json(const energy::DensityTable& table);

/// Columns: label,eps,value,bulk,surface,interface,residual.
std::string breakdown_csv(
    const std::vector<std::pair<std::string, energy::EnergyBreakdown>>& rows);
nlohmann::json breakdown_json(
    const std::vector<std::pair<std::string, energy::EnergyBreakdown>>& rows);

/// Columns: k,eps,energy,prediction,scaled_residual.
std::string expansion_csv(const asymptotics::ExpansionReport& rep);
nlohmann::json expansion_summary_json(const asymptotics::ExpansionReport& rep);

}  // namespace latcell::report
