#include "latcell/report.hpp"

#include <cstdio>
#include <sstream>

namespace latcell::report {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string join_components(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

namespace {

std::vector<double> normal_components(const Vec3& n) { return {n[0], n[1], n[2]}; }

}  // namespace

std::string density_table_csv(const energy::DensityTable& table) {
  std::string out = "label,F,normal,value\n";
  for (const auto& row : table.rows) {
    out += row.label;
    out += ',';
    out += join_components(row.F);
    out += ',';
    out += join_components(normal_components(row.normal));
    out += ',';
    out += format_double(row.value);
    out += '\n';
  }
  return out;
}

nlohmann::json density_table_json(const energy::DensityTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"label", row.label},
                    {"F", row.F},
                    {"normal", normal_components(row.normal)},
                    {"value", row.value}});
  }
  return rows;
}

std::string breakdown_csv(
    const std::vector<std::pair<std::string, energy::EnergyBreakdown>>& rows) {
  std::string out = "label,eps,value,bulk,surface,interface,residual\n";
  for (const auto& [label, b] : rows) {
    double residual =
        b.epsilon > 0.0 ? (b.total - b.prediction_at(b.epsilon)) / b.epsilon : 0.0;
    out += label;
    out += ',';
    out += format_double(b.epsilon);
    out += ',';
    out += format_double(b.total);
    out += ',';
    out += format_double(b.bulk_prediction);
    out += ',';
    out += format_double(b.surface_prediction);
    out += ',';
    out += format_double(b.interface_prediction);
    out += ',';
    out += format_double(residual);
    out += '\n';
  }
  return out;
}

nlohmann::json breakdown_json(
    const std::vector<std::pair<std::string, energy::EnergyBreakdown>>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [label, b] : rows) {
    out.push_back({{"label", label},
                   {"eps", b.epsilon},
                   {"value", b.total},
                   {"bulk", b.bulk_prediction},
                   {"surface", b.surface_prediction},
                   {"interface", b.interface_prediction},
                   {"atom_count", b.atom_count}});
  }
  return out;
}

std::string expansion_csv(const asymptotics::ExpansionReport& rep) {
  std::string out = "k,eps,energy,prediction,scaled_residual\n";
  for (std::size_t i = 0; i < rep.schedule.size(); ++i) {
    double eps = rep.schedule[i].eps;
    double prediction = rep.target_bulk + eps * rep.target_surface;
    out += std::to_string(rep.schedule[i].k);
    out += ',';
    out += format_double(eps);
    out += ',';
    out += format_double(rep.energies[i]);
    out += ',';
    out += format_double(prediction);
    out += ',';
    out += format_double(rep.residuals[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json expansion_summary_json(const asymptotics::ExpansionReport& rep) {
  nlohmann::json schedule = nlohmann::json::array();
  for (const auto& p : rep.schedule) schedule.push_back({{"k", p.k}, {"eps", p.eps}});
  return {{"schedule", schedule},
          {"energies", rep.energies},
          {"residuals", rep.residuals},
          {"fitted_bulk", rep.fitted_bulk},
          {"fitted_surface", rep.fitted_surface},
          {"target_bulk", rep.target_bulk},
          {"target_surface", rep.target_surface},
          {"convergence_order_estimate", rep.convergence_order_estimate}};
}

}  // namespace latcell::report
