// oddform: command-line front end for the odd form library.
//
// Exit codes: 0 success, 1 a check failed, 2 usage error, 3 the input is
// outside the hypotheses of the requested operation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oddform/hyperbolic.hpp"
#include "oddform/oddform.hpp"
#include "oddform/stability.hpp"
#include "oddform/steinberg.hpp"

using namespace oddform;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "oddform-cli/1";
constexpr int kOk = 0, kFail = 1, kUsage = 2, kOutside = 3;

struct RunConfig {
  std::string command;
  std::string algebra = "sp";
  int rank = 2;
  std::string base = "gf:2";
  std::uint64_t seed = 0;
  std::uint64_t bound = MatGroup::kDefaultBound;
  std::uint64_t samples = 20000;
  std::string out;
  std::string format = "human";
  std::string fixture = "none";
  std::string matrix;
  std::optional<std::uint64_t> index;
  bool all = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Records in a fixed key order, rendered as JSON lines or as aligned text.
class Emitter {
 public:
  explicit Emitter(bool structured) : structured_(structured) {}

  void record(const ojson& r) {
    if (structured_) {
      buf_ << r.dump() << '\n';
      return;
    }
    auto it = r.begin();
    buf_ << it.value().get<std::string>();
    for (++it; it != r.end(); ++it) {
      buf_ << "  " << it.key() << '=';
      if (it.value().is_string()) buf_ << it.value().get<std::string>();
      else buf_ << it.value().dump();
    }
    buf_ << '\n';
  }
  std::string text() const { return buf_.str(); }

 private:
  bool structured_;
  std::ostringstream buf_;
};

ojson rec(const char* type) {
  ojson r;
  r["record"] = type;
  return r;
}

RingPtr make_ring(const std::string& spec) {
  try {
    return std::make_shared<const CommRing>(parse_base(spec));
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("invalid --base: ") + e.what());
  }
}

NamedInstance make_instance(const RunConfig& c) {
  FamilyKind kind;
  try {
    kind = parse_kind(c.algebra);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("invalid --algebra: ") + e.what());
  }
  if (c.rank < 1) throw UsageError("invalid --rank: must be at least 1");
  auto k = make_ring(c.base);
  try {
    return build_named(kind, c.rank, k);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("invalid algebra spec: ") + e.what());
  }
}

CheckConfig check_config(const RunConfig& c) {
  CheckConfig cfg;
  cfg.seed = c.seed;
  cfg.samples = c.samples;
  return cfg;
}

std::uint64_t count_tuples(const Report& r) {
  std::uint64_t t = 0;
  for (const auto& s : r.stats) t += s.tuples;
  return t;
}

std::uint64_t count_exhaustive(const Report& r) {
  std::uint64_t t = 0;
  for (const auto& s : r.stats) t += s.exhaustive;
  return t;
}

void emit_suite(Emitter& out, const std::string& name, const Report& r) {
  ojson s = rec("suite");
  s["name"] = name;
  s["axioms"] = r.stats.size();
  s["exhaustive"] = count_exhaustive(r);
  s["tuples"] = count_tuples(r);
  s["violations"] = r.violations.size();
  out.record(s);
  for (const auto& v : r.violations) {
    ojson w = rec("violation");
    w["suite"] = name;
    w["axiom"] = v.axiom;
    w["witness"] = v.witness;
    out.record(w);
  }
}

Mat parse_matrix(const CommRing& k, int n, const std::string& text) {
  Mat m(n);
  std::istringstream rows(text);
  std::string row;
  int i = 0;
  while (std::getline(rows, row, ';')) {
    if (i >= n) throw UsageError("--matrix has too many rows");
    std::istringstream cells(row);
    long long v;
    int j = 0;
    while (cells >> v) {
      if (j >= n) throw UsageError("--matrix row " + std::to_string(i) + " is too long");
      if (v < 0 || static_cast<std::size_t>(v) >= k.size())
        throw UsageError("--matrix entry out of range for " + k.name());
      m.set(i, j++, static_cast<Elt>(v));
    }
    if (!cells.eof() || j != n) throw UsageError("--matrix row " + std::to_string(i) + " is malformed");
    ++i;
  }
  if (i != n) throw UsageError("--matrix needs " + std::to_string(n) + " rows");
  return m;
}

ojson word_json(const MatrixOFA& A, const std::vector<StGen>& w) {
  ojson a = ojson::array();
  for (const auto& g : w) a.push_back(gen_str(A, g));
  return a;
}

/// The elements a gauss or reduce run works on.
struct Targets {
  std::vector<Mat> mats;
  std::uint64_t group_order = 0;
};

Targets pick_targets(const RunConfig& c, const NamedInstance& in) {
  const MatrixOFA& A = *in.ofa;
  Targets t;
  if (!c.matrix.empty()) {
    if (c.all || c.index) throw UsageError("--matrix excludes --all and --index");
    t.mats.push_back(parse_matrix(A.base(), A.size(), c.matrix));
    return t;
  }
  auto G = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in), c.bound);
  t.group_order = G.size();
  if (c.all) {
    if (c.index) throw UsageError("--all excludes --index");
    t.mats = G.elements();
    return t;
  }
  std::uint64_t e = c.index ? *c.index : Rng(c.seed)() % G.size();
  if (e >= G.size()) throw UsageError("--index out of range: the group has " + std::to_string(G.size()) + " elements");
  t.mats.push_back(G.elements()[e]);
  return t;
}

int cmd_verify(const RunConfig& c, Emitter& out) {
  const CheckConfig cfg = check_config(c);
  bool ok = true;
  auto run = [&](const std::string& name, const Report& r) {
    emit_suite(out, name, r);
    ok = ok && r.ok();
  };
  if (c.fixture == "zero") {
    auto z = min_augmentation(zero_ofa(make_ring(c.base)));
    run("odd-form-axioms", check_ofa_axioms(z, cfg));
    run("nilmodule-axioms", check_nilmodule_axioms(DeltaNilModule<TableOFA>{&z}, cfg));
    return ok ? kOk : kFail;
  }
  auto in = make_instance(c);
  const MatrixOFA& A = *in.ofa;
  if (c.fixture == "fault" && in.fam.rank() < 2)
    throw UsageError("the fault fixture needs --rank 2 or more");
  run("odd-form-axioms", check_ofa_axioms(A, cfg));
  run("nilmodule-axioms", check_nilmodule_axioms(DeltaNilModule<MatrixOFA>{&A}, cfg));
  if (in.fam.rank() >= 2) {
    auto p = instantiate_relations(in.fam);
    auto asg = stmap_assignment(in.fam);
    if (c.fixture == "fault") {
      // One generator sent to the identity breaks the relations it occurs in.
      const StGen target = x_short(1, 2, in.fam.unit(1, 2), A);
      auto st = asg;
      asg.image = [st, target](const StGen& g) {
        return g == target ? mat_id(*st.k, st.dim) : st.image(g);
      };
    }
    run("steinberg-relations", check_assignment(asg, p, &A));
  } else {
    ojson s = rec("skipped");
    s["suite"] = "steinberg-relations";
    s["reason"] = "rank below 2";
    out.record(s);
  }
  std::vector<MUnit> elems{u_identity(A)};
  for (const Mat& m : full_group_generators(in)) {
    if (elems.size() >= 32) break;
    elems.push_back(unit_from_matrix(A, m));
  }
  run("action-compatibility", check_group_action(A, elems, cfg));
  return ok ? kOk : kFail;
}

int cmd_enumerate(const RunConfig& c, Emitter& out) {
  auto in = make_instance(c);
  const MatrixOFA& A = *in.ofa;
  auto full = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in), c.bound);
  auto el = MatGroup::closure(A.base_ptr(), A.size(), elementary_generators(in.fam), c.bound);
  std::uint64_t diag = 0;
  for (const Mat& m : full.elements()) diag += in_diag_quotient(in.fam, unit_from_matrix(A, m));
  auto up = u_plus_minus(in.fam, 1, c.bound);
  auto um = u_plus_minus(in.fam, -1, c.bound);

  ojson r = rec("orders");
  r["full"] = full.size();
  r["elementary"] = el.size();
  r["diag"] = diag;
  r["u_plus"] = up.closure_order;
  r["u_minus"] = um.closure_order;
  r["index_elementary"] = full.size() % el.size() == 0 ? ojson(full.size() / el.size()) : ojson(nullptr);
  r["index_diag"] = full.size() % diag == 0 ? ojson(full.size() / diag) : ojson(nullptr);
  out.record(r);

  int code = full.size() % el.size() == 0 ? kOk : kFail;
  ojson x = rec("cross-check");
  if (A.base().is_field()) {
    std::uint64_t expect = classical_order(in.spec);
    x["classical"] = expect;
    x["match"] = expect == full.size();
    if (expect != full.size()) code = kFail;
  } else {
    x["classical"] = nullptr;
    x["match"] = nullptr;
  }
  out.record(x);
  return code;
}

int cmd_gauss(const RunConfig& c, Emitter& out) {
  auto in = make_instance(c);
  const MatrixOFA& A = *in.ofa;
  auto t = pick_targets(c, in);
  std::vector<MUnit> units;
  for (const Mat& m : t.mats) {
    if (!in_unitary(A, m)) throw InvalidInput("element " + mat_str(A.base(), m) + " is not in the unitary group");
    units.push_back(unit_from_matrix(A, m));
  }
  GaussDecomposer gd(in.fam);
  std::uint64_t verified = 0, shown = 0;
  for (std::size_t e = 0; e < units.size(); ++e) {
    auto f = gd.decompose(units[e]);
    bool ok = gd.verify(units[e], f);
    verified += ok;
    if (c.all && (ok || shown >= 5)) continue;
    ++shown;
    ojson r = rec("gauss");
    r["element"] = mat_str(A.base(), t.mats[e]);
    r["u_plus1"] = word_json(A, f.u_plus1);
    r["u_minus"] = word_json(A, f.u_minus);
    r["u_plus2"] = word_json(A, f.u_plus2);
    r["d"] = mat_str(A.base(), unit_matrix(A, f.d));
    r["verified"] = ok;
    out.record(r);
  }
  ojson s = rec("summary");
  s["elements"] = units.size();
  s["verified"] = verified;
  s["fallbacks"] = gd.stats().fallbacks;
  out.record(s);
  return verified == units.size() ? kOk : kFail;
}

int cmd_reduce(const RunConfig& c, Emitter& out) {
  auto in = make_instance(c);
  const MatrixOFA& A = *in.ofa;
  Reducer red(in.fam);
  auto t = pick_targets(c, in);
  std::vector<MUnit> units;
  for (const Mat& m : t.mats) {
    if (!in_unitary(A, m)) throw InvalidInput("element " + mat_str(A.base(), m) + " is not in the unitary group");
    units.push_back(unit_from_matrix(A, m));
  }
  const HypPair eta = in.fam.eta(in.fam.rank());
  std::uint64_t verified = 0, shown = 0;
  for (std::size_t e = 0; e < units.size(); ++e) {
    auto r = red.reduce(units[e]);
    bool ok = red.verify(units[e], r) && in_levi_complement(A, eta, r.g_prime);
    verified += ok;
    if (c.all && (ok || shown >= 5)) continue;
    ++shown;
    ojson o = rec("reduce");
    o["element"] = mat_str(A.base(), t.mats[e]);
    o["h"] = word_json(A, r.h);
    o["g_prime"] = mat_str(A.base(), unit_matrix(A, r.g_prime));
    o["unimod_step"] = r.unimod_step;
    o["lambda_step"] = r.lambda_step;
    o["corner_step"] = r.corner_step;
    o["verified"] = ok;
    out.record(o);
  }
  ojson s = rec("summary");
  s["elements"] = units.size();
  s["verified"] = verified;
  out.record(s);
  return verified == units.size() ? kOk : kFail;
}

int cmd_export(const RunConfig& c, Emitter& out) {
  if (c.out.empty()) throw UsageError("export-presentation needs --out");
  auto in = make_instance(c);
  auto p = instantiate_relations(in.fam);
  std::string text = export_presentation(p, in.fam, c.algebra);
  {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.out);
    f << text;
  }
  bool same = reimport_presentation(text) == text;
  ojson r = rec("presentation");
  r["path"] = c.out;
  r["generators"] = p.generators().size();
  r["relations"] = p.relations().size();
  r["hash"] = nlohmann::json::parse(text)["hash"];
  r["roundtrip"] = same;
  out.record(r);
  return same ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Odd form algebras, unitary and Steinberg groups over finite rings"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&c](CLI::App* s) {
    s->add_option("--algebra", c.algebra, "linear | sp | o-even | o-odd")->capture_default_str();
    s->add_option("--rank", c.rank, "hyperbolic rank L")->capture_default_str();
    s->add_option("--base", c.base, "z:N | gf:P | gf:P:E")->capture_default_str();
    s->add_option("--seed", c.seed, "seed for sampling and element choice")->capture_default_str();
    s->add_option("--bound", c.bound, "bound on enumerated group sizes")->capture_default_str();
    s->add_option("--format", c.format, "human | structured")
        ->check(CLI::IsMember({"human", "structured"}))
        ->capture_default_str();
  };
  auto report_out = [&c](CLI::App* s) {
    s->add_option("--out", c.out, "write the report here instead of stdout");
  };
  auto element = [&c](CLI::App* s) {
    s->add_flag("--all", c.all, "every element of the full group");
    s->add_option("--index", c.index, "element by position in the enumeration (0 is the identity)");
    s->add_option("--matrix", c.matrix, "element as rows of ring labels, e.g. \"1 0;0 1\"");
  };

  auto* verify = app.add_subcommand("verify", "axiom, relation and action suites");
  common(verify);
  report_out(verify);
  verify->add_option("--samples", c.samples, "tuples per sampled axiom")->capture_default_str();
  verify->add_option("--fixture", c.fixture, "none | fault | zero")
      ->check(CLI::IsMember({"none", "fault", "zero"}))
      ->capture_default_str();
  auto* enumerate = app.add_subcommand("enumerate", "group orders and indices");
  common(enumerate);
  report_out(enumerate);
  auto* gauss = app.add_subcommand("gauss", "Gauss decomposition");
  common(gauss);
  report_out(gauss);
  element(gauss);
  auto* reduce = app.add_subcommand("reduce", "reduction to the next smaller rank");
  common(reduce);
  report_out(reduce);
  element(reduce);
  auto* exp = app.add_subcommand("export-presentation", "write the Steinberg presentation");
  common(exp);
  exp->add_option("--out", c.out, "presentation file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  Emitter out(c.format == "structured");
  ojson h = rec("header");
  h["schema"] = kSchema;
  h["command"] = c.command;
  h["algebra"] = c.fixture == "zero" ? "zero" : c.algebra;
  h["rank"] = c.rank;
  h["base"] = c.base;
  h["seed"] = c.seed;
  out.record(h);

  int code = kOk;
  ojson res = rec("result");
  try {
    if (c.command == "verify") code = cmd_verify(c, out);
    else if (c.command == "enumerate") code = cmd_enumerate(c, out);
    else if (c.command == "gauss") code = cmd_gauss(c, out);
    else if (c.command == "reduce") code = cmd_reduce(c, out);
    else code = cmd_export(c, out);
    res["status"] = code == kOk ? "ok" : "failed";
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    code = kOutside;
    res["status"] = "error";
    res["error"] = e.what();
  } catch (const BoundExceeded& e) {
    code = kOutside;
    res["status"] = "error";
    res["error"] = std::string("bound exceeded: ") + e.what();
  }
  res["exit"] = code;
  out.record(res);

  const bool to_file = !c.out.empty() && c.command != "export-presentation";
  if (to_file) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      std::cerr << "usage error: cannot write " << c.out << '\n';
      return kUsage;
    }
    f << out.text();
  } else {
    std::cout << out.text();
  }
  return code;
}
