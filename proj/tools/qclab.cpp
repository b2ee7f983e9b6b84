// qclab: experiment runner. Exit codes: 0 pass, 2 property violation
// (witness in the report), 1 usage or IO error.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qclab/abelian_by_cyclic.hpp"
#include "qclab/experiments.hpp"
#include "qclab/graph_of_groups.hpp"
#include "qclab/ps_contraction.hpp"
#include "qclab/special_paths.hpp"

using nlohmann::json;
using namespace qclab;

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

struct Options {
  std::string spec;
  std::uint64_t seed = 1;
  std::optional<std::size_t> samples;
  std::optional<int> radius;
  std::optional<double> resolution;
  std::string out;
  std::string format = "json";

  // subcommand specific
  int max_walls = 6;
  std::vector<std::string> words;
  int steps = 4;
  std::optional<double> C;
  bool plane = false;
  double extent = 2;
  double lambda = 2;
  std::optional<double> k;
  std::string matrix;
  std::vector<std::string> elements;
  std::string h = "1:";
  std::string g;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  std::string s = v.dump();
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// Rows become a table; any other report becomes key,value lines.
std::string to_csv(const json& report) {
  std::ostringstream os;
  if (report.contains("rows") && report["rows"].is_array() && !report["rows"].empty()) {
    const json& rows = report["rows"];
    std::vector<std::string> keys;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(r.value(keys[i], json()));
      os << "\n";
    }
    return os.str();
  }
  os << "key,value\n";
  for (auto it = report.begin(); it != report.end(); ++it) os << it.key() << "," << csv_cell(it.value()) << "\n";
  return os.str();
}

void emit(const Options& o, const json& report) {
  std::string text = o.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  // A CSV table has no room for the witness, so it goes to stderr.
  if (o.format == "csv" && report.contains("witness")) std::cerr << "witness: " << report["witness"].dump() << "\n";
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << text;
}

FlipComplex load_complex(const Options& o) {
  if (o.spec.empty()) throw UsageError("--spec is required");
  return FlipComplex(load_spec_file(o.spec));
}

PointCoord default_basepoint(const FlipComplex& fc) { return PointCoord{fc.root(), TreePos{}, Rational(0)}; }

int model_validate(const Options& o) {
  FlipComplex fc = load_complex(o);
  int r = o.radius.value_or(4);
  json rep{{"valid", true},
           {"pieces", fc.piece_count()},
           {"gluings", fc.spec().gluings.size()},
           {"radius", r},
           {"rho", fc.estimate_rho(r)},
           {"max_axis_overlap", fc.max_axis_overlap(r).str()}};
  json pieces = json::array();
  for (int p = 0; p < fc.piece_count(); ++p)
    pieces.push_back({{"betti", fc.piece(p).spine.betti_number()},
                      {"boundary_cycles", fc.piece(p).boundary_cycles.size()},
                      {"fiber_period", fc.piece(p).fiber_period.str()}});
  rep["piece_data"] = pieces;
  emit(o, rep);
  return kPass;
}

int paths_sample(const Options& o) {
  FlipComplex fc = load_complex(o);
  std::size_t n = o.samples.value_or(200);
  double res = o.resolution.value_or(0.05);
  double rho = fc.estimate_rho(o.radius.value_or(4));
  OracleOptions opt{res};
  opt.max_walls = std::max(opt.max_walls, o.max_walls + 2);
  std::vector<PairSample> rows(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng = make_rng(o.seed, i);
    auto [x, y] = random_pair(fc, rng, o.max_walls);
    rows[i] = measure_pair(fc, x, y, rho, opt);
  });
  PathAxiomAudit ax = path_axiom_audit(fc, n, o.max_walls, o.seed);

  json rep{{"seed", o.seed}, {"samples", n}, {"resolution", res}, {"rho", rho}};
  json table = json::array();
  std::optional<std::size_t> bad;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i];
    bool ok = r.lower_bound <= r.oracle + 1e-6 && r.length_l2 >= r.oracle - res * r.walls - 1e-9 &&
              r.length_l1 >= r.length_l2 - 1e-9;
    if (!ok && !bad) bad = i;
    table.push_back({{"sample", i},
                     {"walls", r.walls},
                     {"length_l1", r.length_l1},
                     {"length_l2", r.length_l2},
                     {"oracle", r.oracle},
                     {"lower_bound", r.lower_bound},
                     {"ok", ok}});
  }
  rep["axioms"] = {{"restriction_failures", ax.restriction_failures},
                   {"reversal_failures", ax.reversal_failures},
                   {"breakpoints", ax.breakpoints}};
  rep["rows"] = table;
  if (!bad && ax.witness) bad = ax.witness;
  if (bad) {
    Rng rng = make_rng(o.seed, *bad);
    auto [x, y] = random_pair(fc, rng, o.max_walls);
    rep["witness"] = {{"seed", o.seed}, {"sample", *bad}, {"x", to_json(fc, x)}, {"y", to_json(fc, y)}};
  }
  emit(o, rep);
  return bad ? kViolation : kPass;
}

int paths_qgfit(const Options& o) {
  FlipComplex fc = load_complex(o);
  std::size_t n = o.samples.value_or(500);
  double res = o.resolution.value_or(0.05);
  double rho = fc.estimate_rho(o.radius.value_or(4));
  QGReport q = qg_fit(fc, n, o.max_walls, res, o.seed, rho);
  double half = fit_kappa(q.rows, n / 2);
  bool stable = q.kappa <= 1.2 * half;
  std::optional<std::size_t> bad;
  for (std::size_t i = 0; i < q.rows.size() && !bad; ++i)
    if (q.rows[i].length_l2 < q.rows[i].oracle - res * q.rows[i].walls - 1e-9) bad = i;
  json rep{{"seed", o.seed},        {"samples", n},   {"max_walls", o.max_walls}, {"resolution", res},
           {"kappa", q.kappa},      {"kappa_half", half}, {"stable", stable},     {"worst_ratio", q.worst_ratio}};
  json table = json::array();
  for (std::size_t i = 0; i < q.rows.size(); ++i) {
    const auto& r = q.rows[i];
    table.push_back({{"sample", i},
                     {"walls", r.walls},
                     {"length_l1", r.length_l1},
                     {"length_l2", r.length_l2},
                     {"oracle", r.oracle},
                     {"lower_bound", r.lower_bound}});
  }
  rep["rows"] = table;
  if (bad) {
    rep["witness"] = {{"seed", o.seed},
                      {"sample", *bad},
                      {"x", to_json(fc, q.rows[*bad].x)},
                      {"y", to_json(fc, q.rows[*bad].y)},
                      {"condition", "length_l2 < oracle - resolution * walls"}};
  } else if (!stable) {
    rep["witness"] = {{"seed", o.seed}, {"condition", "kappa moved by more than 20% when doubling samples"}};
  }
  emit(o, rep);
  return bad || !stable ? kViolation : kPass;
}

int slide_audit_cmd(const Options& o) {
  FlipComplex fc = load_complex(o);
  SlideAudit a = slide_audit(fc, o.samples.value_or(10000), o.seed);
  json rep{{"seed", o.seed}, {"samples", a.samples}, {"violations", a.violations}, {"max_defect", a.max_defect.str()}};
  if (a.witness)
    rep["witness"] = {{"seed", o.seed},
                      {"sample", a.witness->sample},
                      {"x", to_json(fc, a.witness->x)},
                      {"y", to_json(fc, a.witness->y)},
                      {"z", to_json(fc, a.witness->z)},
                      {"defect", a.witness->defect.str()}};
  emit(o, rep);
  return a.violations ? kViolation : kPass;
}

SubsetModel build_subset(const FlipComplex& fc, const Options& o) {
  if (o.plane) return subset_wall_plane(fc, WallId{fc.root(), WallRef{0, {}}}, o.extent);
  if (o.words.size() != 1) throw UsageError("exactly one --word is required (or --plane)");
  GraphOfGroups g(fc);
  return subset_from_morse(g, g.parse(o.words[0]), default_basepoint(fc), o.steps);
}

json subset_json(const SubsetModel& a) {
  return {{"copies", a.subtree.size()}, {"delta", a.delta}, {"step", a.step}, {"plane", a.plane.has_value()}};
}

int contract_test(const Options& o) {
  FlipComplex fc = load_complex(o);
  SubsetModel a = build_subset(fc, o);
  double C = o.C.value_or(contraction_constant(a));
  ContractionReport r = check_contracting(fc, a, C, o.samples.value_or(1000), o.seed);
  json rep{{"seed", o.seed},       {"subset", subset_json(a)},  {"C", C},
           {"samples", r.samples}, {"triggered", r.triggered}, {"measured_C", r.measuredC},
           {"vacuous", r.vacuous}, {"passed", r.passed}};
  if (r.witness) {
    const auto& w = *r.witness;
    rep["witness"] = {{"seed", r.seed},
                      {"sample", w.sample},
                      {"condition", w.condition},
                      {"x", to_json(fc, w.x)},
                      {"y", to_json(fc, w.y)},
                      {"px", to_json(fc, w.px)},
                      {"py", to_json(fc, w.py)},
                      {"projection_distance", w.projection_distance},
                      {"path_distance", w.path_distance}};
  }
  emit(o, rep);
  return r.passed ? kPass : kViolation;
}

int contract_radius(const Options& o) {
  FlipComplex fc = load_complex(o);
  SubsetModel a = build_subset(fc, o);
  std::size_t n = o.samples.value_or(500);
  ContractionParams params;
  params.C = o.C.value_or(contraction_constant(a));
  params.k = 1;
  BallReport ball = ball_projection_check(fc, a, params, n, o.seed);
  params.k = o.k.value_or(std::max(1.0, ball.k_needed));
  params.cbar = std::max(params.k, o.lambda);
  QuasiconvexityReport q = quasiconvexity_radius(fc, a, o.lambda, params, n, o.seed);
  bool ok = q.measured <= q.bound;
  json rep{{"seed", o.seed},
           {"subset", subset_json(a)},
           {"C", params.C},
           {"k", params.k},
           {"k_needed", ball.k_needed},
           {"cbar", params.cbar},
           {"R", params.R()},
           {"lambda", o.lambda},
           {"measured", q.measured},
           {"bound", q.bound},
           {"certified", q.certified},
           {"discarded", q.discarded},
           {"passed", ok}};
  if (!ok) rep["witness"] = {{"seed", o.seed}, {"condition", "measured radius exceeds bound"}};
  emit(o, rep);
  return ok ? kPass : kViolation;
}

int morse_classify(const Options& o) {
  FlipComplex fc = load_complex(o);
  GraphOfGroups g(fc);
  json rep{{"seed", o.seed}};
  bool bad = false;
  if (!o.words.empty()) {
    json rows = json::array();
    for (const auto& text : o.words) {
      GroupWord w = g.parse(text);
      NormalForm nf = g.cyclic_reduce(w);
      json row{{"word", text}, {"normal_form", g.format(nf.reduced)}, {"stable_count", nf.stable_count}};
      if (g.is_identity(w)) {
        row["identity"] = true;
      } else {
        bool m = g.is_morse(w);
        int tau = g.translation_length(w);
        bool agree = m == (displacement_translation_length(g, w) > 0);
        row["morse"] = m;
        row["translation_length"] = tau;
        row["oracle_agrees"] = agree;
        if (!agree) {
          bad = true;
          rep["witness"] = {{"word", text}};
        }
      }
      rows.push_back(row);
    }
    rep["rows"] = rows;
  } else {
    MorseAudit a = morse_audit(g, o.samples.value_or(2000), o.radius.value_or(6), o.seed);
    rep.update({{"words", a.words},
                {"morse", a.morse},
                {"disagreements", a.disagreements},
                {"power_failures", a.power_failures}});
    if (a.witness) {
      bad = true;
      rep["witness"] = {{"word", g.format(*a.witness)}};
    }
  }
  emit(o, rep);
  return bad ? kViolation : kPass;
}

int orbit_qi(const Options& o) {
  FlipComplex fc = load_complex(o);
  GraphOfGroups g(fc);
  if (o.words.empty()) throw UsageError("at least one --word generator is required");
  std::vector<GroupWord> gens;
  for (const auto& w : o.words) gens.push_back(g.parse(w));
  int radius = o.radius.value_or(6);
  PointCoord x0{fc.root(), TreePos{{}, DirEdge{0, false}, Rational(1, 2)}, Rational(0)};
  json rep{{"generators", o.words}, {"radius", radius}};
  try {
    QIReport q = orbit_qi_test(g, gens, radius, x0);
    rep.update({{"L", q.L},
                {"C", q.C},
                {"samples", q.samples},
                {"max_upper_residual", q.max_upper_residual},
                {"max_lower_residual", q.max_lower_residual},
                {"mean_ratio", q.mean_ratio},
                {"free_basis", free_basis_check(g, gens, std::min(radius, 4))}});
  } catch (const BoundedOrbitError& e) {
    rep["passed"] = false;
    rep["witness"] = {{"condition", "bounded orbit"},
                      {"generator", e.generator},
                      {"word", o.words.at(static_cast<std::size_t>(e.generator))},
                      {"max_distance", e.max_distance},
                      {"message", e.what()}};
    emit(o, rep);
    return kViolation;
  }
  rep["passed"] = true;
  emit(o, rep);
  return kPass;
}

// "2 1 1 1", "2,1;1,1" or JSON rows.
abc::IntMatrix parse_matrix_arg(const std::string& text) {
  std::string t = text;
  auto first = t.find_first_not_of(" \t");
  if (first != std::string::npos && t[first] == '[') return abc::parse_matrix(t);
  for (char& c : t)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream is(t);
  std::vector<abc::Int> entries;
  std::string tok;
  while (is >> tok) {
    try {
      entries.emplace_back(tok);
    } catch (const std::exception&) {
      throw UsageError("bad matrix entry '" + tok + "'");
    }
  }
  auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
  if (entries.empty() || k * k != entries.size()) throw UsageError("matrix needs k*k entries");
  std::vector<std::vector<abc::Int>> rows(k);
  for (std::size_t i = 0; i < k; ++i) rows[i].assign(entries.begin() + i * k, entries.begin() + (i + 1) * k);
  return abc::IntMatrix(rows);
}

// "m:z1,z2,..." is t^m z; an empty vector part means z = 0.
abc::Element parse_element(const abc::Group& grp, const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("element '" + text + "' must look like m:z1,z2");
  abc::Element e{std::stoll(text.substr(0, colon)), abc::IntVector(grp.rank(), 0)};
  std::string rest = text.substr(colon + 1);
  if (rest.find_first_not_of(" ") == std::string::npos) return e;
  for (char& c : rest)
    if (c == ',') c = ' ';
  std::istringstream is(rest);
  std::string tok;
  std::size_t i = 0;
  while (is >> tok) {
    if (i >= grp.rank()) throw UsageError("element '" + text + "' has too many coordinates");
    e.z[i++] = abc::Int(tok);
  }
  if (i != grp.rank()) throw UsageError("element '" + text + "' has too few coordinates");
  return e;
}

json int_json(const abc::Int& v) {
  if (abs(v) < abc::Int(1) << 62) return v.convert_to<long long>();
  return v.str();
}

json vec_json(const abc::IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

json element_json(const abc::Element& e) { return {{"t", e.t}, {"z", vec_json(e.z)}}; }

int abc_analyze(const Options& o) {
  abc::IntMatrix phi = parse_matrix_arg(o.matrix);
  abc::Group grp(phi);
  json rows = json::array();
  for (const auto& r : phi.rows()) rows.push_back(vec_json(r));
  auto order = abc::periodic_order(phi);
  auto order_cyc = abc::periodic_order_cyclotomic(phi);
  bool efh = abc::exists_proper_finite_height(phi);

  json witnesses = json::object();
  witnesses["characteristic_polynomial"] = vec_json(phi.characteristic_polynomial());
  if (order) {
    json basis = json::array();
    for (const auto& v : abc::fixed_lattice(phi, *order)) basis.push_back(vec_json(v));
    witnesses["fixed_lattice"] = {{"power", *order}, {"basis", basis}};
  } else {
    witnesses["cyclic_height_bound"] = abc::height_bound_cyclic(phi, 1);
  }

  std::vector<abc::Element> gens;
  for (const auto& s : o.elements) gens.push_back(parse_element(grp, s));
  if (gens.empty()) gens.push_back(grp.t());
  abc::FiniteHeightResult fh = abc::classify_finite_height_subgroup(grp, gens);
  json gj = json::array();
  for (const auto& e : gens) gj.push_back(element_json(e));
  json cls{{"generators", gj},
           {"finite_height", abc::to_string(fh.kind)},
           {"strong_quasiconvexity", abc::to_string(abc::sq_classification(grp, gens))}};
  if (fh.height_bound) cls["height_bound"] = *fh.height_bound;

  bool agree = order == order_cyc;
  json rep{{"matrix", rows},
           {"determinant", int_json(phi.determinant())},
           {"trace", int_json(phi.trace())},
           {"periodic_order", order ? json(*order) : json("none")},
           {"exists_finite_height", efh},
           {"classification", cls},
           {"witnesses", witnesses},
           {"methods_agree", agree}};
  if (!agree)
    rep["witness"] = {{"enumeration", order ? json(*order) : json("none")},
                      {"cyclotomic", order_cyc ? json(*order_cyc) : json("none")}};
  emit(o, rep);
  return agree ? kPass : kViolation;
}

int abc_ball(const Options& o) {
  abc::IntMatrix phi = parse_matrix_arg(o.matrix);
  abc::Group grp(phi);
  abc::Element h = parse_element(grp, o.h);
  long long radius = o.radius.value_or(8);
  json rep{{"h", element_json(h)}, {"radius", radius}};
  json rows = json::array();
  std::vector<abc::Element> targets;
  if (!o.g.empty()) {
    targets.push_back(parse_element(grp, o.g));
  } else {
    std::size_t n = o.samples.value_or(100);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = make_rng(o.seed, i);
      std::uniform_int_distribution<int> d(-5, 5);
      abc::Element g{d(rng), abc::IntVector(grp.rank())};
      for (auto& x : g.z) x = d(rng);
      targets.push_back(g);
    }
    rep["seed"] = o.seed;
  }
  std::size_t nonempty = 0;
  for (const auto& g : targets) {
    auto powers = abc::ball_conjugate_intersection(grp, h, g, radius);
    nonempty += !powers.empty();
    rows.push_back({{"g", element_json(g)}, {"powers", powers}, {"in_h", grp.cyclic_log(h, g).has_value()}});
  }
  rep["nonempty"] = nonempty;
  rep["rows"] = rows;
  emit(o, rep);
  return kPass;
}

void add_common(CLI::App* sub, Options& o, bool needs_spec) {
  auto* s = sub->add_option("--spec", o.spec, "manifold description (JSON)");
  if (needs_spec) s->required();
  sub->add_option("--seed", o.seed, "seed; fixes every random choice");
  sub->add_option("--samples", o.samples, "sample count");
  sub->add_option("--radius", o.radius, "radius (meaning depends on the command)");
  sub->add_option("--resolution", o.resolution, "distance oracle lattice spacing")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "output file (default stdout)");
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qclab: flip graph manifold and abelian-by-cyclic experiments"};
  app.require_subcommand(1);
  Options o;

  auto* model = app.add_subcommand("model", "manifold descriptions")->require_subcommand(1);
  auto* validate = model->add_subcommand("validate", "load and check a description");
  add_common(validate, o, false);
  validate->add_option("spec_file", o.spec, "description path (same as --spec)");

  auto* paths = app.add_subcommand("paths", "special paths")->require_subcommand(1);
  auto* sample = paths->add_subcommand("sample", "special paths versus the distance oracle");
  auto* qgfit = paths->add_subcommand("qgfit", "fit the quasi-geodesic constant");
  for (auto* s : {sample, qgfit}) {
    add_common(s, o, true);
    s->add_option("--max-walls", o.max_walls, "largest wall count of a sampled pair")->check(CLI::Range(0, 12));
  }

  auto* slide = app.add_subcommand("slide", "horizontal slides")->require_subcommand(1);
  auto* audit = slide->add_subcommand("audit", "slide defect over random triples");
  add_common(audit, o, true);

  auto* contract = app.add_subcommand("contract", "contracting projections")->require_subcommand(1);
  auto* ctest = contract->add_subcommand("test", "check the contraction conditions");
  auto* cradius = contract->add_subcommand("radius", "quasiconvexity radius of (lambda, lambda) quasi-geodesics");
  for (auto* s : {ctest, cradius}) {
    add_common(s, o, true);
    s->add_option("--word", o.words, "Morse element whose axis is the subset");
    s->add_option("--steps", o.steps, "axis translates on each side")->check(CLI::PositiveNumber);
    s->add_option("--C", o.C, "contraction constant (default 10 delta + step)");
    s->add_flag("--plane", o.plane, "use a wall plane instead of an axis");
    s->add_option("--extent", o.extent, "wall plane half-width");
  }
  cradius->add_option("--lambda", o.lambda, "quasi-geodesic constant");
  cradius->add_option("--k", o.k, "ball projection constant (default: fitted)");

  auto* morse = app.add_subcommand("morse", "Morse elements")->require_subcommand(1);
  auto* classify = morse->add_subcommand("classify", "classify words, or audit random ones");
  add_common(classify, o, true);
  classify->add_option("--word", o.words, "word to classify (repeatable)");

  auto* orbit = app.add_subcommand("orbit", "orbit maps")->require_subcommand(1);
  auto* qi = orbit->add_subcommand("qi", "quasi-isometric embedding test");
  add_common(qi, o, true);
  qi->add_option("--word", o.words, "generator (repeatable)");

  auto* abcc = app.add_subcommand("abc", "abelian-by-cyclic groups")->require_subcommand(1);
  auto* analyze = abcc->add_subcommand("analyze", "finite height analysis of Z^k x| Z");
  auto* ball = abcc->add_subcommand("ball", "conjugate intersections in a ball");
  for (auto* s : {analyze, ball}) {
    add_common(s, o, false);
    s->add_option("matrix", o.matrix, "\"2 1 1 1\" or [[2,1],[1,1]]")->required();
  }
  analyze->add_option("--gen", o.elements, "subgroup generator m:z1,z2 (default t)");
  ball->add_option("--generator", o.h, "generator of the cyclic subgroup, m:z1,z2");
  ball->add_option("--conjugator", o.g, "conjugating element (default: random sample)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (validate->parsed()) {
      try {
        return model_validate(o);
      } catch (const SpecError& e) {
        std::cerr << "invalid description: " << e.what() << "\n";
        return kUsage;
      }
    }
    if (sample->parsed()) return paths_sample(o);
    if (qgfit->parsed()) return paths_qgfit(o);
    if (audit->parsed()) return slide_audit_cmd(o);
    if (ctest->parsed()) return contract_test(o);
    if (cradius->parsed()) return contract_radius(o);
    if (classify->parsed()) return morse_classify(o);
    if (qi->parsed()) return orbit_qi(o);
    if (analyze->parsed()) return abc_analyze(o);
    if (ball->parsed()) return abc_ball(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
