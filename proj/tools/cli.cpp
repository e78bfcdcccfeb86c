#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "derham/io.hpp"

namespace derham::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write '" + c.out + "'");
  f << text;
}

std::string render(const RunConfig& c, const json& j, const std::vector<std::vector<std::string>>& table) {
  return c.format == "csv" ? csv(table) : j.dump(2) + "\n";
}

SimplicialMesh load_mesh(const RunConfig& c, int fallback_dim) {
  if (!c.grid.empty()) {
    const auto g = parse_int_list(c.grid);
    if (g.size() != 3 || g[0] < 1 || g[1] < 1 || g[2] < 1) throw UsageError("--grid expects nx,ny,nz >= 1");
    return fourteen_tet_grid(g[0], g[1], g[2]);
  }
  if (c.mesh.empty()) {
    const int d = c.dim ? c.dim : fallback_dim;
    if (d == 1) return meshes::by_name("chain3");
    if (d == 2) return meshes::by_name("square2");
    if (d == 3) return meshes::by_name("two_tets");
    throw UsageError("--dim must be 1, 2 or 3");
  }
  if (c.mesh.rfind("builtin:", 0) == 0) {
    try {
      return meshes::by_name(c.mesh.substr(8));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return read_mesh(c.mesh);
}

json mesh_summary(const SimplicialMesh& m) {
  json j{{"dim", m.dim}, {"V", m.count(0)}, {"cells", m.count(m.dim)}, {"euler", euler_characteristic(m)}};
  if (m.dim >= 2) j["E"] = m.count(1);
  if (m.dim >= 3) j["F"] = m.count(2);
  return j;
}

Family family_from(const RunConfig& c) {
  if (c.family.empty()) {
    if (c.r == 0) return Family::r0;
    if (c.r == 1) return Family::r1;
    if (c.r == 2) return Family::r2;
    throw UsageError("--r must be 0, 1 or 2");
  }
  if (c.family == "hz") return Family::hz;
  if (c.family == "trimmed") return Family::trimmed;
  if (c.family == "vector_hermite") return Family::vector_hermite;
  if (c.family == "vector_lagrange") return Family::vector_lagrange;
  throw UsageError("unknown --family '" + c.family + "'");
}

// Smallest p making every slot of the row valid.
int lowest_row_degree(int r, int n) {
  for (int p = 0; p < 16; ++p)
    if (validate_row(family_row(r, n, p)).empty()) return p;
  throw UsageError("no valid degree for this row");
}

int cmd_tables(const RunConfig& c, std::ostream& out) {
  const auto ps = degree_list(c);
  if (ps.empty()) throw UsageError("tables needs --p or --p-range");
  const SimplicialMesh mesh = load_mesh(c, c.dim ? c.dim : 2);
  const int n = mesh.dim;
  if (c.dim && c.dim != n) throw UsageError("--dim does not match the mesh dimension");
  const SimplexCounts counts = simplex_counts(mesh);
  std::vector<std::vector<std::string>> t{
      {"dim", "r", "k", "p", "element", "local_dofs", "global_dim", "formula_dim", "formula", "match"}};
  json rows = json::array();
  bool ok = true;
  for (int p : ps)
    for (int r = 0; r <= 2; ++r)
      for (int k = 0; k <= n; ++k) {
        const ElementKey key{r == 0 ? Family::r0 : r == 1 ? Family::r1 : Family::r2, p, k, n};
        json row{{"dim", n}, {"r", r}, {"k", k}, {"p", p}};
        if (!validate(key).empty()) {
          row["element"] = nullptr;
          t.push_back({std::to_string(n), std::to_string(r), std::to_string(k), std::to_string(p), "n/a", "", "", "", "", ""});
          rows.push_back(row);
          continue;
        }
        const long local = local_total_formula(key);
        const long global = assemble_space(mesh, key, AssemblyMode::count_only).dimension;
        const long formula = dim_formula(key, counts);
        ok = ok && global == formula;
        row["element"] = describe(key);
        row["local_dofs"] = local;
        row["global_dim"] = global;
        row["formula_dim"] = formula;
        row["formula"] = dim_formula_text(key);
        row["match"] = global == formula;
        rows.push_back(row);
        t.push_back({std::to_string(n), std::to_string(r), std::to_string(k), std::to_string(p),
                     "\"" + describe(key) + "\"", std::to_string(local), std::to_string(global), std::to_string(formula),
                     "\"" + dim_formula_text(key) + "\"", global == formula ? "yes" : "no"});
      }
  emit(c, render(c, json{{"command", "tables"}, {"mesh", mesh_summary(mesh)}, {"rows", rows}}, t), out);
  return ok ? kPass : kFail;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SimplicialMesh mesh = load_mesh(c, c.dim ? c.dim : 2);
  const int n = mesh.dim;
  if (c.mixed && n != 3) throw UsageError("--mixed needs a tetrahedral mesh");
  auto ps = degree_list(c);
  if (ps.empty()) ps = {c.mixed ? 3 : lowest_row_degree(c.r, n)};
  std::vector<int> expected;
  if (!c.betti.empty()) {
    expected = parse_int_list(c.betti);
    if (static_cast<int>(expected.size()) != n + 1) throw UsageError("--betti needs n+1 entries");
  }
  const double tol = c.tol > 0.0 ? c.tol : default_tolerance();
  json reports = json::array();
  std::vector<std::vector<std::string>> t{
      {"row", "k", "space", "dim", "rank", "nullity", "betti", "expected_betti", "dd_residual", "containment"}};
  bool ok = true;
  for (int p : ps) {
    const FamilyRow row = c.mixed ? mixed_row(p) : family_row(c.r, n, p);
    if (std::string why = validate_row(row); !why.empty()) throw UsageError(why);
    const ExactnessReport rep = verify_exactness(mesh, row, expected, tol);
    ok = ok && rep.pass();
    reports.push_back(to_json(rep));
    for (int k = 0; k <= n; ++k)
      t.push_back({"\"" + rep.name + "\"", std::to_string(k), "\"" + rep.spaces[k] + "\"", std::to_string(rep.dims[k]),
                   k < n ? std::to_string(rep.ranks[k]) : "", std::to_string(rep.nullities[k]),
                   std::to_string(rep.betti[k]), std::to_string(rep.expected_betti[k]),
                   k + 1 < n ? num(rep.dd_residuals[k]) : "", k < n ? num(rep.containment[k]) : ""});
    if (!rep.pass()) {
      err << rep.name << ": observed Betti numbers";
      for (int b : rep.betti) err << ' ' << b;
      err << ", expected";
      for (int b : rep.expected_betti) err << ' ' << b;
      err << '\n';
    }
  }
  if (!ok && expected.empty() && euler_characteristic(mesh) != 1)
    err << "mesh is not contractible (Euler characteristic " << euler_characteristic(mesh)
        << "); pass --betti to state the expected cohomology\n";
  emit(c, render(c, json{{"command", "verify"}, {"mesh", mesh_summary(mesh)}, {"reports", reports}, {"pass", ok}}, t), out);
  return ok ? kPass : kFail;
}

int cmd_element(const RunConfig& c, std::ostream& out) {
  const int n = c.dim ? c.dim : 2;
  if (c.k < 0) throw UsageError("element needs --k");
  const Family f = family_from(c);
  const int p = c.p >= 0 ? c.p : min_degree(f, c.k, n);
  const ElementKey key{f, p, c.k, n};
  if (std::string why = validate(key); !why.empty()) throw UsageError(why);
  const double tol = c.tol > 0.0 ? c.tol : default_tolerance();
  const ElementDef e = element_def(key);
  const UnisolvenceReport u = unisolvence_check(e, tol);
  const DualBasis db = dual_basis(e);
  json dofs = json::array();
  std::vector<std::vector<std::string>> t{{"index", "class", "subsimplex", "continuity"}};
  for (std::size_t i = 0; i < e.dofs.size(); ++i) {
    const auto& d = e.dofs[i];
    std::string sub;
    for (std::size_t j = 0; j < d.sub.size(); ++j) sub += (j ? " " : "") + std::to_string(d.sub[j]);
    const std::string cont = d.continuity == Continuity::per_cell ? "per_cell" : "single_valued";
    dofs.push_back({{"index", i}, {"class", db.classes[i]}, {"subsimplex", d.sub}, {"continuity", cont}});
    t.push_back({std::to_string(i), "\"" + db.classes[i] + "\"", sub, cont});
  }
  json j{{"command", "element"},
         {"element", e.name},
         {"r_family", family_name(f)},
         {"p", p},
         {"k", c.k},
         {"n", n},
         {"unisolvence", to_json(u)},
         {"kronecker_residual", db.kronecker_residual},
         {"dofs", dofs}};
  emit(c, render(c, j, t), out);
  return u.pass ? kPass : kFail;
}

int cmd_bc(const RunConfig& c, std::ostream& out) {
  const SimplicialMesh mesh = load_mesh(c, 2);
  const int n = mesh.dim;
  const int p = c.p >= 0 ? c.p : lowest_row_degree(c.r, n);
  const FamilyRow row = family_row(c.r, n, p);
  if (std::string why = validate_row(row); !why.empty()) throw UsageError(why);
  const BoundaryClassification bc = classify_boundary(mesh);
  json spaces = json::array();
  std::vector<std::vector<std::string>> t{{"k", "space", "dim", "removed", "formula_removed", "retained", "match"}};
  bool ok = true;
  for (const auto& key : row.slots) {
    const GlobalSpace s = assemble_space(mesh, key);
    const HomogeneousSpace h = restrict_homogeneous(s, bc);
    const bool has = h.formula_removed >= 0;
    const bool match = !has || h.formula_removed == h.removed;
    ok = ok && match;
    spaces.push_back({{"k", key.k},
                      {"space", s.name},
                      {"dim", s.dimension},
                      {"removed", h.removed},
                      {"formula_removed", has ? json(h.formula_removed) : json(nullptr)},
                      {"retained", h.dimension},
                      {"match", match}});
    t.push_back({std::to_string(key.k), "\"" + s.name + "\"", std::to_string(s.dimension), std::to_string(h.removed),
                 has ? std::to_string(h.formula_removed) : "", std::to_string(h.dimension), match ? "yes" : "no"});
  }
  const ExactnessReport hom = homogeneous_exactness(mesh, row);
  ok = ok && hom.pass() && hom.alternating_sum == 0;
  json j{{"command", "bc"},       {"mesh", mesh_summary(mesh)}, {"classification", to_json(bc)},
         {"spaces", spaces},      {"homogeneous", to_json(hom)}, {"pass", ok}};
  emit(c, render(c, j, t), out);
  return ok ? kPass : kFail;
}

int cmd_bgg(const RunConfig& c, std::ostream& out) {
  const SimplicialMesh mesh = load_mesh(c, 2);
  if (mesh.dim != 2) throw UsageError("bgg needs a triangular mesh");
  const int p = c.p >= 0 ? c.p : 1;
  if (p < 1) throw UsageError("bgg needs --p >= 1");
  std::vector<int> expected;
  if (!c.betti.empty()) expected = parse_int_list(c.betti);
  const BggIdentity id = verify_bgg_identity(p, mesh);
  const ExactnessReport xi = xi_complex(mesh, p, expected);
  const ProjectionReport pr = projection_check(mesh, p);
  const ExactnessReport weak = weak_symmetry_complex(mesh, p, expected);
  const StressComplexReport hz = huzhang_complex(mesh, p, expected);
  const HuZhangStressElement el = huzhang_stress(std::max(3, p + 1));
  json j{{"command", "bgg"},
         {"p", p},
         {"mesh", mesh_summary(mesh)},
         {"identity", to_json(id)},
         {"xi", to_json(xi)},
         {"projections", {{"a0_commutes", pr.a0_commutes}, {"a1_commutes", pr.a1_commutes}, {"pass", pr.pass}}},
         {"weak_symmetry", to_json(weak)},
         {"hu_zhang_complex", to_json(hz)},
         {"hu_zhang_element", to_json(el)}};
  bool ok = id.residual < 1e-10 && id.s0_rank == id.s0_rows && id.s0_rows == id.s0_cols && id.s1_rank == id.s1_rows &&
            xi.pass() && pr.pass && weak.pass() && hz.pass && el.pass();
  if (p >= 2) {
    const AiryCheck a = airy_check(mesh, p);
    j["airy"] = {{"formula_residual", a.formula_residual}, {"symmetry_residual", a.symmetry_residual}, {"pass", a.pass}};
    ok = ok && a.pass;
  }
  j["pass"] = ok;
  std::vector<std::vector<std::string>> t{{"quantity", "value"},
                                          {"identity_residual", num(id.residual)},
                                          {"s0_rank", std::to_string(id.s0_rank)},
                                          {"s1_rank", std::to_string(id.s1_rank)},
                                          {"xi_exact", xi.pass() ? "yes" : "no"},
                                          {"sigma_dim", std::to_string(hz.sigma_dim)},
                                          {"hu_zhang_skew_dofs", std::to_string(el.skew_dofs)},
                                          {"hu_zhang_bubble_dofs", std::to_string(el.bubble_dofs)},
                                          {"pass", ok ? "yes" : "no"}};
  emit(c, render(c, j, t), out);
  return ok ? kPass : kFail;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
  RunConfig g = c;
  if (g.grid.empty() && g.mesh.empty()) g.grid = "2,2,2";
  const SimplicialMesh mesh = load_mesh(g, 3);
  if (mesh.dim != 3) throw UsageError("compare needs a tetrahedral mesh");
  const int p = c.p >= 0 ? c.p : 4;
  if (p < min_degree(Family::r2, 1, 3)) throw UsageError("compare needs p >= 4");
  const SavingsReport s = dof_savings(p, mesh);
  const bool ok = s.dim_full == s.formula_full && s.dim_smooth == s.formula_smooth;
  json j = to_json(s);
  j["command"] = "compare";
  j["pass"] = ok;
  std::vector<std::vector<std::string>> t{
      {"quantity", "P_p_L1", "P_2p_L1", "difference"},
      {"assembled", std::to_string(s.dim_full), std::to_string(s.dim_smooth), std::to_string(s.dim_full - s.dim_smooth)},
      {"closed_form", std::to_string(s.formula_full), std::to_string(s.formula_smooth),
       std::to_string(s.formula_full - s.formula_smooth)},
      {"printed_per_T", num(s.printed_full_per_T), num(s.printed_smooth_per_T), num(s.printed_difference_per_T)},
      {"asymptotic_per_T", num(s.asymptotic_full_per_T), num(s.asymptotic_smooth_per_T),
       num(s.asymptotic_full_per_T - s.asymptotic_smooth_per_T)},
      {"E_over_V", num(s.edge_vertex_ratio), "", ""}};
  emit(c, render(c, j, t), out);
  return ok ? kPass : kFail;
}

int cmd_export(const RunConfig& c, std::ostream& out) {
  const SimplicialMesh mesh = load_mesh(c, c.dim ? c.dim : 2);
  if (c.what == "mesh") {
    emit(c, mesh_to_json(mesh) + "\n", out);
    return kPass;
  }
  if (c.what != "d") throw UsageError("--what must be d or mesh");
  const int n = mesh.dim;
  const int k = c.k >= 0 ? c.k : 0;
  if (k >= n) throw UsageError("--k must be below the mesh dimension");
  const int p = c.p >= 0 ? c.p : lowest_row_degree(c.r, n);
  const FamilyRow row = family_row(c.r, n, p);
  if (std::string why = validate_row(row); !why.empty()) throw UsageError(why);
  const GlobalSpace a = assemble_space(mesh, row.slots[k]);
  const GlobalSpace b = assemble_space(mesh, row.slots[k + 1]);
  std::ostringstream os;
  write_sparse(os, assemble_d(a, b).dense, 0.0);
  emit(c, os.str(), out);
  return kPass;
}

void add_common(CLI::App* s, RunConfig& c) {
  s->add_option("--mesh", c.mesh, "mesh JSON file, or builtin:NAME");
  s->add_option("--dim", c.dim, "spatial dimension")->check(CLI::Range(1, 3));
  s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  s->add_option("--out", c.out, "output path (stdout when absent)");
  s->add_option("--tol", c.tol, "relative rank tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

std::vector<int> parse_int_list(const std::string& s, char sep) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad integer '" + item + "' in '" + s + "'");
    }
  }
  return out;
}

std::vector<int> degree_list(const RunConfig& c) {
  if (!c.p_range.empty()) {
    const auto ab = parse_int_list(c.p_range, ':');
    if (ab.size() != 2 || ab[0] < 0 || ab[1] < ab[0]) throw UsageError("--p-range expects A:B with 0 <= A <= B");
    std::vector<int> out;
    for (int p = ab[0]; p <= ab[1]; ++p) out.push_back(p);
    return out;
  }
  if (c.p >= 0) return {c.p};
  return {};
}

double default_tolerance() {
  if (const char* env = std::getenv("DERHAM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) return v;
  }
  return kRankTol;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite element de Rham families: tables and verification reports", "derham"};
  app.require_subcommand(1);
  RunConfig c;

  auto* tables = app.add_subcommand("tables", "family grid with local and global dimensions");
  add_common(tables, c);
  tables->add_option("--p", c.p, "degree")->check(CLI::NonNegativeNumber);
  tables->add_option("--p-range", c.p_range, "degree range A:B");
  tables->add_option("--grid", c.grid, "body-centred cubic grid nx,ny,nz");
  c.format = "json";

  auto* verify = app.add_subcommand("verify", "complex property and exactness of a family row");
  add_common(verify, c);
  verify->add_option("--r", c.r, "family r")->check(CLI::Range(0, 2));
  verify->add_option("--p", c.p, "degree of the first slot")->check(CLI::NonNegativeNumber);
  verify->add_option("--p-range", c.p_range, "degree range A:B");
  verify->add_option("--betti", c.betti, "expected Betti numbers, comma separated");
  verify->add_option("--grid", c.grid, "body-centred cubic grid nx,ny,nz");
  verify->add_flag("--mixed", c.mixed, "the P_1 / P^- mixed tetrahedral row");

  auto* element = app.add_subcommand("element", "unisolvence report and DoF list of one element");
  add_common(element, c);
  element->add_option("--r", c.r, "family r")->check(CLI::Range(0, 2));
  element->add_option("--k", c.k, "form degree")->check(CLI::Range(0, 3));
  element->add_option("--p", c.p, "polynomial degree")->check(CLI::NonNegativeNumber);
  element->add_option("--family", c.family, "hz, trimmed, vector_hermite or vector_lagrange");

  auto* bc = app.add_subcommand("bc", "homogeneous boundary condition counts");
  add_common(bc, c);
  bc->add_option("--r", c.r, "family r")->check(CLI::Range(0, 2));
  bc->add_option("--p", c.p, "degree of the first slot")->check(CLI::NonNegativeNumber);

  auto* bgg = app.add_subcommand("bgg", "BGG construction and the Hu-Zhang stress element");
  add_common(bgg, c);
  bgg->add_option("--p", c.p, "degree index")->check(CLI::PositiveNumber);
  bgg->add_option("--betti", c.betti, "expected Betti numbers of the three-slot complexes");

  auto* compare = app.add_subcommand("compare", "DoF savings of P_{2,p} L1 against P_p L1");
  add_common(compare, c);
  compare->add_option("--p", c.p, "degree")->check(CLI::NonNegativeNumber);
  compare->add_option("--grid", c.grid, "body-centred cubic grid nx,ny,nz");

  auto* exp = app.add_subcommand("export", "sparse d matrix or mesh JSON");
  add_common(exp, c);
  exp->add_option("--r", c.r, "family r")->check(CLI::Range(0, 2));
  exp->add_option("--k", c.k, "source form degree")->check(CLI::Range(0, 3));
  exp->add_option("--p", c.p, "degree of the first slot")->check(CLI::NonNegativeNumber);
  exp->add_option("--what", c.what, "d or mesh")->check(CLI::IsMember({"d", "mesh"}));
  exp->add_option("--grid", c.grid, "body-centred cubic grid nx,ny,nz");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }
  const bool csv_default = tables->parsed() || compare->parsed();
  if (csv_default && !(tables->parsed() ? tables : compare)->get_option("--format")->count()) c.format = "csv";

  try {
    if (tables->parsed()) return cmd_tables(c, out);
    if (verify->parsed()) return cmd_verify(c, out, err);
    if (element->parsed()) return cmd_element(c, out);
    if (bc->parsed()) return cmd_bc(c, out);
    if (bgg->parsed()) return cmd_bgg(c, out);
    if (compare->parsed()) return cmd_compare(c, out);
    if (exp->parsed()) return cmd_export(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const MeshFormatError& e) {
    err << "mesh error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}

}  // namespace derham::cli
