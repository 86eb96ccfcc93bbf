#include "latcell/cli.hpp"

#include "latcell/asymptotics.hpp"
#include "latcell/oracle.hpp"
#include "latcell/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <set>

namespace latcell::cli {

using nlohmann::json;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file: " + path);
  out << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// csv reports get the scene echo (and any summary) in a sidecar file.
void emit(const scene::Scene& s, const std::string& out_path, const std::string& csv,
          json payload) {
  payload["scene"] = scene::scene_to_json(s);
  if (s.format == "csv") {
    write_file(out_path, csv);
    write_file(out_path + ".summary.json", dump(payload));
  } else {
    write_file(out_path, dump(payload));
  }
}

std::vector<double> flatten(const Mat3& m) {
  std::vector<double> v;
  v.reserve(9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) v.push_back(m(r, c));
  return v;
}

std::vector<double> flatten_pair(const Mat3& plus, const Mat3& minus) {
  std::vector<double> v = flatten(plus);
  std::vector<double> w = flatten(minus);
  v.insert(v.end(), w.begin(), w.end());
  return v;
}

}  // namespace

scene::Scene load_effective_scene(const std::string& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scene file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  scene::Scene base = scene::parse_scene_text(text);
  json j = base.spec;
  if (ov.threads) j["threads"] = *ov.threads;
  if (ov.quad_order) j["quadrature"]["sigma_order"] = *ov.quad_order;
  if (ov.boundary) j["boundary_rule"] = *ov.boundary;
  if (ov.theta) j["schedule"]["theta"] = *ov.theta;
  if (ov.format) j["format"] = *ov.format;
  return scene::parse_scene(j);
}

energy::DensityTable build_density_table(const scene::Scene& s) {
  if (s.densities.empty()) throw ValidationError("scene requests no densities");
  const auto* pw = std::get_if<material::PiecewiseAffineDeformation>(&s.deformation);
  Mat3 F;
  if (pw) {
    F = pw->F_minus;
  } else if (const auto* aff = std::get_if<material::AffineDeformation>(&s.deformation)) {
    F = aff->F;
  } else {
    throw ValidationError("density table needs an affine or piecewise deformation");
  }

  energy::DensityTable table;
  for (const auto& name : s.densities) {
    if (name == "W") {
      table.rows.push_back(
          {"W", flatten(F), Vec3::Zero(),
           material::cauchy_born_W(s.potential, s.lattice, F)});
    } else if (name == "gamma") {
      if (!s.interface) throw ValidationError("gamma density needs an interface normal");
      Vec3 n = s.interface->unit_normal;
      table.rows.push_back(
          {"gamma", flatten(F), n, energy::gamma(s.potential, s.lattice, F, n)});
    } else if (name == "gamma_diamond") {
      if (!s.interface || !s.interface->miller)
        throw ValidationError("gamma_diamond density needs a miller interface normal");
      const auto& m = *s.interface->miller;
      table.rows.push_back(
          {"gamma_diamond", flatten(F), m.components.cast<double>(),
           energy::gamma_diamond(s.potential, s.lattice, F, m)});
    } else if (name == "sigma") {
      if (!pw)
        throw ValidationError("sigma density needs a piecewise deformation");
      Vec3 n = pw->plane.unit_normal;
      auto r = energy::sigma(s.potential, s.lattice, pw->F_plus(), pw->F_minus, n,
                             s.quadrature.sigma_order);
      auto F2 = flatten_pair(pw->F_plus(), pw->F_minus);
      table.rows.push_back({"sigma", F2, n, r.sigma});
      table.rows.push_back({"sigma_hat", F2, n, r.sigma_hat});
    } else if (name == "tau") {
      if (!pw || !pw->plane.miller)
        throw ValidationError(
            "tau density needs a piecewise deformation with a miller interface");
      const auto& m = *pw->plane.miller;
      auto r = energy::tau(s.potential, s.lattice, pw->F_plus(), pw->F_minus, m);
      auto F2 = flatten_pair(pw->F_plus(), pw->F_minus);
      table.rows.push_back({"tau", F2, m.components.cast<double>(), r.tau});
      table.rows.push_back({"tau_hat", F2, m.components.cast<double>(), r.tau_hat});
    } else {
      throw ValidationError("unknown density name: " + name);
    }
  }
  return table;
}

void cmd_density(const scene::Scene& s, const std::string& out_path) {
  auto table = build_density_table(s);
  emit(s, out_path, report::density_table_csv(table),
       json{{"rows", report::density_table_json(table)}});
}

void cmd_expand(const scene::Scene& s, const std::string& proposition,
                const std::string& out_path) {
  auto prop = asymptotics::proposition_from_string(proposition);
  auto rep = asymptotics::verify_proposition(prop, s);
  emit(s, out_path, report::expansion_csv(rep),
       json{{"proposition", asymptotics::to_string(prop)},
            {"summary", report::expansion_summary_json(rep)}});
}

void cmd_miller(const scene::Scene& s, int j_max, const std::string& out_path) {
  if (!s.interface) throw ValidationError("miller study needs an interface normal");
  const auto* pw = std::get_if<material::PiecewiseAffineDeformation>(&s.deformation);
  Mat3 F;
  std::optional<Vec3> jump;
  if (pw) {
    F = pw->F_minus;
    jump = pw->a;
  } else if (const auto* aff = std::get_if<material::AffineDeformation>(&s.deformation)) {
    F = aff->F;
  } else {
    throw ValidationError("miller study needs an affine or piecewise deformation");
  }
  Vec3 target = s.interface->miller ? Vec3(s.interface->miller->components.cast<double>())
                                    : s.interface->unit_normal;
  auto rows = asymptotics::miller_limit_study(s.potential, s.lattice, F, target, j_max,
                                              jump);

  std::string csv = "j,n,norm,gamma_diamond_gap,tau_gap\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    std::vector<double> n = {static_cast<double>(r.n.components[0]),
                             static_cast<double>(r.n.components[1]),
                             static_cast<double>(r.n.components[2])};
    csv += std::to_string(r.j);
    csv += ',';
    csv += report::join_components(n);
    csv += ',';
    csv += report::format_double(r.norm);
    csv += ',';
    csv += report::format_double(r.gamma_gap);
    csv += ',';
    if (jump) csv += report::format_double(r.tau_gap);
    csv += '\n';
    json row{{"j", r.j}, {"n", n}, {"norm", r.norm}, {"gamma_diamond_gap", r.gamma_gap}};
    if (jump) row["tau_gap"] = r.tau_gap;
    jrows.push_back(row);
  }
  emit(s, out_path, csv, json{{"rows", jrows}});
}

void cmd_remainder(const scene::Scene& s, const std::string& out_path) {
  auto schedule = asymptotics::epsilon_schedule(s.schedule);
  bool modified = s.lattice.is_integer() &&
                  s.schedule.kind == scene::ScheduleKind::Reciprocal;
  std::vector<asymptotics::RemainderRow> grown;
  if (modified) {
    try {
      grown = asymptotics::modified_domain_check(s.domain, s.lattice, s.schedule.k_min,
                                                 s.schedule.k_max);
    } catch (const ValidationError&) {
      modified = false;  // facets without small rational normals
    }
  }

  std::string csv = modified ? "k,eps,remainder,remainder_modified,count_difference\n"
                             : "k,eps,remainder\n";
  json jrows = json::array();
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    double rem = lattice::lattice_remainder(s.domain, s.lattice, schedule[i].eps,
                                            s.boundary_rule);
    csv += std::to_string(schedule[i].k);
    csv += ',';
    csv += report::format_double(schedule[i].eps);
    csv += ',';
    csv += report::format_double(rem);
    json row{{"k", schedule[i].k}, {"eps", schedule[i].eps}, {"remainder", rem}};
    if (modified) {
      csv += ',';
      csv += report::format_double(grown[i].remainder);
      csv += ',';
      csv += std::to_string(grown[i].count_difference);
      row["remainder_modified"] = grown[i].remainder;
      row["count_difference"] = grown[i].count_difference;
    }
    csv += '\n';
    jrows.push_back(row);
  }
  emit(s, out_path, csv, json{{"rows", jrows}});
}

void cmd_oracle(const scene::Scene& s, int grid, const std::string& out_path) {
  if (grid < 2) throw ValidationError("oracle grid must be at least 2");
  auto schedule = asymptotics::epsilon_schedule(s.schedule);
  double eps = schedule.front().eps;
  std::set<int> grids{std::max(2, grid / 4), std::max(2, grid / 2), grid};

  std::string csv = "grid,eps,count_avg,volume,count_error,energy_avg,energy_cell,energy_gap\n";
  json jrows = json::array();
  double cell = energy::cell_avg_energy(s.domain, s.lattice, eps, s.deformation,
                                        s.potential, s.quadrature);
  double volume = s.domain.volume();
  for (int g : grids) {
    double count_avg = oracle::translate_average_count(s.domain, s.lattice, eps, g,
                                                       s.boundary_rule);
    double energy_avg = oracle::translate_average_energy(
        s.domain, s.lattice, eps, s.deformation, s.potential, g, s.boundary_rule,
        s.threads);
    csv += std::to_string(g);
    csv += ',';
    csv += report::format_double(eps);
    csv += ',';
    csv += report::format_double(count_avg);
    csv += ',';
    csv += report::format_double(volume);
    csv += ',';
    csv += report::format_double(count_avg - volume);
    csv += ',';
    csv += report::format_double(energy_avg);
    csv += ',';
    csv += report::format_double(cell);
    csv += ',';
    csv += report::format_double(energy_avg - cell);
    csv += '\n';
    jrows.push_back({{"grid", g},
                     {"eps", eps},
                     {"count_avg", count_avg},
                     {"volume", volume},
                     {"count_error", count_avg - volume},
                     {"energy_avg", energy_avg},
                     {"energy_cell", cell},
                     {"energy_gap", energy_avg - cell}});
  }
  emit(s, out_path, csv, json{{"rows", jrows}});
}

int run_main(int argc, char** argv) {
  CLI::App app{"lattice-cell energies of deformed crystals"};
  app.require_subcommand(1);

  std::string scene_path, out_path;
  std::string proposition = "P4";
  int j_max = 40;
  int grid = 32;
  Overrides ov;
  int threads = 0, quad_order = 0;
  std::string boundary, format;
  double theta = -1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scene", scene_path, "scene JSON file")->required();
    sub->add_option("--out", out_path, "output report path")->required();
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker count")->check(CLI::PositiveNumber);
    sub->add_option("--quad-order", quad_order, "Gauss order for interface integrals")
        ->check(CLI::PositiveNumber);
    sub->add_option("--boundary", boundary, "boundary point rule")
        ->check(CLI::IsMember({"closed", "halfopen"}));
    sub->add_option("--theta", theta, "offset-schedule shift in (0,1)");
  };

  auto* density = app.add_subcommand("density", "tabulate the requested energy densities");
  add_common(density);
  auto* expand = app.add_subcommand("expand", "energy series along the eps schedule");
  add_common(expand);
  expand->add_option("--prop", proposition, "expansion to verify: P1..P5");
  auto* miller = app.add_subcommand("miller", "density convergence along a normal sequence");
  add_common(miller);
  miller->add_option("--jmax", j_max, "sequence length")->check(CLI::PositiveNumber);
  auto* remainder = app.add_subcommand("remainder", "lattice point-count remainders");
  add_common(remainder);
  auto* orc = app.add_subcommand("oracle", "translation-averaged brute-force references");
  add_common(orc);
  orc->add_option("--grid", grid, "offset grid resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads > 0) ov.threads = threads;
    if (quad_order > 0) ov.quad_order = quad_order;
    if (!boundary.empty()) ov.boundary = boundary;
    if (!format.empty()) ov.format = format;
    if (theta >= 0.0) ov.theta = theta;
    scene::Scene s = load_effective_scene(scene_path, ov);
    if (density->parsed()) cmd_density(s, out_path);
    if (expand->parsed()) cmd_expand(s, proposition, out_path);
    if (miller->parsed()) cmd_miller(s, j_max, out_path);
    if (remainder->parsed()) cmd_remainder(s, out_path);
    if (orc->parsed()) cmd_oracle(s, grid, out_path);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace latcell::cli
