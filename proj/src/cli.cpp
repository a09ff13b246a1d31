// Copyright 2026 The ghzw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ghzw/cli.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ghzw/cfa.hpp"
#include "ghzw/diagram.hpp"
#include "ghzw/dsl.hpp"
#include "ghzw/eval.hpp"
#include "ghzw/io.hpp"
#include "ghzw/pair.hpp"
#include "ghzw/rewrite.hpp"
#include "ghzw/slocc.hpp"
#include "ghzw/tensor.hpp"

namespace ghzw {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string fmt(const cplx& z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::ostringstream os;
  os << fmt(z.real()) << (z.imag() < 0 ? "-" : "+") << fmt(std::abs(z.imag()))
     << "i";
  return os.str();
}

std::string bit_string(std::int64_t index, int legs, int dim) {
  std::string s(static_cast<std::size_t>(legs), '0');
  for (int k = legs - 1; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] =
        static_cast<char>('0' + static_cast<int>(index % dim));
    index /= dim;
  }
  return s;
}

void print_tensor(std::ostream& out, const Tensor& t) {
  out << "tensor: " << t.in_arity() << " -> " << t.out_arity() << " (dim "
      << t.dim() << ")\n";
  std::int64_t rows = 1, cols = 1;
  for (int k = 0; k < t.out_arity(); ++k) rows *= t.dim();
  for (int k = 0; k < t.in_arity(); ++k) cols *= t.dim();
  bool any = false;
  for (std::int64_t o = 0; o < rows; ++o) {
    for (std::int64_t i = 0; i < cols; ++i) {
      const cplx z = t.at(o, i);
      if (std::abs(z) <= 1e-15) continue;
      any = true;
      out << "  ";
      if (t.out_arity() > 0) out << "|" << bit_string(o, t.out_arity(), t.dim()) << ">";
      if (t.in_arity() > 0) out << "<" << bit_string(i, t.in_arity(), t.dim()) << "|";
      if (t.out_arity() == 0 && t.in_arity() == 0) out << "scalar";
      out << "  " << fmt(z) << "\n";
    }
  }
  if (!any) out << "  (zero tensor)\n";
}

ordered_json tensor_json(const Tensor& t) {
  return ordered_json::parse(tensor_to_json(t));
}

ordered_json cfa_json(const CFA& c) { return ordered_json::parse(cfa_to_json(c)); }

ordered_json diagram_json(const Diagram& d) {
  return ordered_json::parse(to_json(d));
}

ordered_json label_json(const SloccLabel& label) {
  ordered_json j;
  j["label"] = label.str();
  if (!label.children.empty()) {
    ordered_json kids = ordered_json::array();
    for (const SloccLabel& child : label.children) kids.push_back(label_json(child));
    j["children"] = std::move(kids);
  }
  return j;
}

struct Options {
  double tol = 1e-9;
  std::uint64_t seed = 1;
  bool json = false;
  std::string kind = "auto";
  std::string file_a;
  std::string file_b;
};

ordered_json report_header(const std::string& verb, const Options& o) {
  ordered_json j;
  j["schema"] = 1;
  j["verb"] = verb;
  j["tol"] = o.tol;
  j["seed"] = o.seed;
  return j;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const Diagram d = diagram_from_text(read_file(o.file_a));
  const Tensor t = evaluate(d, canonical_semantics());
  if (o.json) {
    ordered_json j = report_header("eval", o);
    j["tensor"] = tensor_json(t);
    out << j.dump(2) << "\n";
  } else {
    print_tensor(out, t);
  }
  return 0;
}

int cmd_check_cfa(const Options& o, std::ostream& out, const Tolerance& tol) {
  const CFA c = cfa_from_json(read_file(o.file_a));
  const CfaReport r = check_cfa(c, tol);
  if (o.json) {
    ordered_json j = report_header("check-cfa", o);
    j["name"] = c.name;
    ordered_json checks = ordered_json::array();
    for (const AxiomCheck& a : r.checks) {
      ordered_json cj;
      cj["axiom"] = a.axiom;
      cj["residual"] = a.residual;
      cj["pass"] = a.pass;
      checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["max_residual"] = r.max_residual;
    j["pass"] = r.pass;
    out << j.dump(2) << "\n";
  } else {
    out << "algebra: " << c.name << "\n";
    for (const AxiomCheck& a : r.checks) {
      out << (a.pass ? "  pass  " : "  FAIL  ") << fmt(a.residual) << "  "
          << a.axiom << "\n";
    }
    out << (r.pass ? "pass" : "FAIL") << " (max residual " << fmt(r.max_residual)
        << ")\n";
  }
  return r.pass ? 0 : 1;
}

int cmd_classify_cfa(const Options& o, std::ostream& out, const Tolerance& tol) {
  const CFA c = cfa_from_json(read_file(o.file_a));
  const ClassifyCfaResult r = classify_cfa(c, tol);
  if (o.json) {
    ordered_json j = report_header("classify-cfa", o);
    j["class"] = cfa_class_name(r.cls);
    j["witness"] = tensor_json(r.witness);
    j["normal_form"] = cfa_json(r.normal_form);
    out << j.dump(2) << "\n";
  } else {
    out << "class: " << cfa_class_name(r.cls) << "\n";
    out << "local witness:\n";
    print_tensor(out, r.witness);
  }
  return 0;
}

int cmd_classify_state(const Options& o, std::ostream& out, std::ostream& err,
                       const Tolerance& tol) {
  const Tensor s = state_from_json(read_file(o.file_a));
  if (s.out_arity() != 3) {
    err << "error: classify-state expects a 3-qubit state, got "
        << s.out_arity() << " qubits\n";
    return 2;
  }
  const SloccLabel label = tripartite_classify(s, tol);
  if (o.json) {
    ordered_json j = report_header("classify-state", o);
    j["class"] = label.str();
    out << j.dump(2) << "\n";
  } else {
    out << label.str() << "\n";
  }
  return 0;
}

int cmd_superclass(const Options& o, std::ostream& out, const Tolerance& tol) {
  const Tensor s = state_from_json(read_file(o.file_a));
  const SloccLabel label = superclass_label(s, tol);
  if (o.json) {
    ordered_json j = report_header("superclass", o);
    j["class"] = label.str();
    j["tree"] = label_json(label);
    out << j.dump(2) << "\n";
  } else {
    out << label.str() << "\n";
  }
  return 0;
}

int cmd_frobenius_state(const Options& o, std::ostream& out, const Tolerance& tol) {
  const Tensor s = state_from_json(read_file(o.file_a));
  const std::optional<MaximalityWitness> w = is_frobenius_state(s, tol, o.seed);
  if (o.json) {
    ordered_json j = report_header("frobenius-state", o);
    j["frobenius"] = w.has_value();
    if (w) {
      j["xi"] = tensor_json(w->xi);
      j["phi"] = tensor_json(w->phi);
    }
    out << j.dump(2) << "\n";
  } else if (w) {
    out << "frobenius state: yes\n";
    out << "witness effect xi:\n";
    print_tensor(out, w->xi);
    out << "compact partner phi:\n";
    print_tensor(out, w->phi);
  } else {
    out << "frobenius state: no\n";
  }
  return w ? 0 : 1;
}

int cmd_pair_check(const Options& o, std::ostream& out, const Tolerance& tol) {
  const GhzwPair p = pair_from_json(read_file(o.file_a));
  const PairCheckReport r = pair_check(p, tol);
  if (o.json) {
    ordered_json j = report_header("pair-check", o);
    ordered_json checks = ordered_json::array();
    for (const PairCheck& c : r.checks) {
      ordered_json cj;
      cj["law"] = c.law;
      cj["residual"] = c.residual;
      cj["pass"] = c.pass;
      checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["max_residual"] = r.max_residual;
    j["pass"] = r.pass;
    out << j.dump(2) << "\n";
  } else {
    for (const PairCheck& c : r.checks) {
      out << (c.pass ? "  pass  " : "  FAIL  ") << fmt(c.residual) << "  "
          << c.law << "\n";
    }
    out << (r.pass ? "pass" : "FAIL") << " (max residual " << fmt(r.max_residual)
        << ")\n";
  }
  return r.pass ? 0 : 1;
}

int cmd_partner(const Options& o, std::ostream& out, std::ostream& err,
                const Tolerance& tol) {
  const CFA c = cfa_from_json(read_file(o.file_a));
  if (check_special(c, tol)) {
    const PartnerResult r = partner_from_scfa(c, tol);
    if (o.json) {
      ordered_json j = report_header("partner", o);
      j["direction"] = "scfa-to-acfa";
      j["partner"] = cfa_json(r.acfa);
      j["partner_alt"] = cfa_json(r.acfa_alt);
      out << j.dump(2) << "\n";
    } else {
      out << "special algebra; anti-special partners '" << r.acfa.name
          << "' and '" << r.acfa_alt.name << "'\n";
      out << "partner comult:\n";
      print_tensor(out, r.acfa.comult);
    }
    return 0;
  }
  if (check_antispecial(c, tol)) {
    const CFA s = partner_from_acfa(c, tol);
    if (o.json) {
      ordered_json j = report_header("partner", o);
      j["direction"] = "acfa-to-scfa";
      j["partner"] = cfa_json(s);
      out << j.dump(2) << "\n";
    } else {
      out << "anti-special algebra; special partner '" << s.name << "'\n";
      out << "partner comult:\n";
      print_tensor(out, s.comult);
    }
    return 0;
  }
  err << "error: algebra is neither special nor anti-special\n";
  return 1;
}

AlgebraKind pick_kind(const Diagram& d, const std::string& requested) {
  if (requested != "auto") return algebra_kind_from_name(requested);
  std::string alg;
  for (const NodeKind& k : d.nodes) {
    if (k.tag == NodeKind::Tag::generator && alg.empty()) alg = k.algebra;
  }
  if (alg == "ghz") return AlgebraKind::scfa;
  if (alg == "w") return AlgebraKind::acfa;
  return AlgebraKind::cfa;
}

ordered_json normal_form_json(const NormalForm& nf) {
  ordered_json j;
  switch (nf.variant) {
    case NormalForm::Variant::spider:
      j["variant"] = "spider";
      j["n"] = nf.n;
      j["m"] = nf.m;
      j["loops"] = nf.loops;
      break;
    case NormalForm::Variant::acfa_zero:
      j["variant"] = "zero";
      j["n"] = nf.n;
      j["m"] = nf.m;
      break;
    case NormalForm::Variant::acfa_loop_product:
      j["variant"] = "loop-product";
      j["lollis_out"] = nf.lollis_out;
      j["colollis_in"] = nf.colollis_in;
      j["inverse_dim_power"] = nf.inverse_dim_power;
      break;
    case NormalForm::Variant::scalar:
      j["variant"] = "scalar";
      j["value"] = ordered_json::array({nf.value.real(), nf.value.imag()});
      break;
  }
  j["text"] = nf.str();
  return j;
}

int cmd_normalize(const Options& o, std::ostream& out) {
  const Diagram d = diagram_from_text(read_file(o.file_a));
  const AlgebraKind kind = pick_kind(d, o.kind);
  const NormalizeResult r = normalize_single(d, kind);
  const std::vector<ComponentView> comps = split_components(d);
  if (o.json) {
    ordered_json j = report_header("normalize", o);
    j["kind"] = algebra_kind_name(kind);
    ordered_json parts = ordered_json::array();
    for (std::size_t i = 0; i < r.components.size(); ++i) {
      ordered_json pj;
      pj["inputs"] = comps[i].input_slots;
      pj["outputs"] = comps[i].output_slots;
      pj["normal_form"] = normal_form_json(r.components[i]);
      parts.push_back(std::move(pj));
    }
    j["components"] = std::move(parts);
    j["canonical"] = diagram_json(r.canonical);
    out << j.dump(2) << "\n";
  } else {
    out << "kind: " << algebra_kind_name(kind) << "\n";
    for (std::size_t i = 0; i < r.components.size(); ++i) {
      out << "  component " << i << ": " << r.components[i].str() << "\n";
    }
  }
  return 0;
}

int cmd_qmux(const Options& o, std::ostream& out, const Tolerance& tol) {
  const Tensor psi = state_from_json(read_file(o.file_a));
  const Tensor phi = state_from_json(read_file(o.file_b));
  const QmuxCertificate cert = qmux_check(psi, phi, tol, o.seed);
  if (o.json) {
    ordered_json j = report_header("qmux", o);
    j["residual"] = cert.residual;
    j["pass"] = cert.pass;
    j["output"] = tensor_json(cert.output);
    j["target"] = tensor_json(cert.target);
    ordered_json maps = ordered_json::array();
    for (const Tensor& m : cert.local_maps) maps.push_back(tensor_json(m));
    j["local_maps"] = std::move(maps);
    out << j.dump(2) << "\n";
  } else {
    out << "multiplexor output:\n";
    print_tensor(out, cert.output);
    out << "target:\n";
    print_tensor(out, cert.target);
    out << (cert.pass ? "pass" : "FAIL") << " (local-equivalence residual "
        << fmt(cert.residual) << ")\n";
  }
  return cert.pass ? 0 : 1;
}

int cmd_pldu(const Options& o, std::ostream& out, std::ostream& err,
             const Tolerance& tol) {
  const Tensor a = tensor_from_json(read_file(o.file_a));
  if (a.in_arity() != 1 || a.out_arity() != 1 || a.dim() != 2) {
    err << "error: pldu expects a single-qubit map (in 1, out 1, dim 2)\n";
    return 2;
  }
  const PLDU r = pldu_decompose(a);
  const Tensor rebuilt = r.reconstruct();
  const Tensor realized = evaluate(r.diagram, canonical_semantics());
  const double resid =
      std::max(distance(rebuilt, a), distance(realized, a));
  const double floor = tol.abs_eps + tol.rel_eps * std::max(1.0, a.norm());
  const bool pass = resid <= floor;
  if (o.json) {
    ordered_json j = report_header("pldu", o);
    j["swapped"] = r.swapped;
    j["p"] = tensor_json(r.p);
    j["l"] = tensor_json(r.l);
    j["d"] = tensor_json(r.d);
    j["u"] = tensor_json(r.u);
    j["residual"] = resid;
    j["pass"] = pass;
    j["diagram"] = diagram_json(r.diagram);
    out << j.dump(2) << "\n";
  } else {
    out << "permutation: " << (r.swapped ? "swap" : "identity") << "\n";
    out << "lower factor:\n";
    print_tensor(out, r.l);
    out << "diagonal factor:\n";
    print_tensor(out, r.d);
    out << "upper factor:\n";
    print_tensor(out, r.u);
    out << (pass ? "pass" : "FAIL") << " (reconstruction residual " << fmt(resid)
        << ")\n";
  }
  return pass ? 0 : 1;
}

int cmd_export_dot(const Options& o, std::ostream& out) {
  const Diagram d = diagram_from_text(read_file(o.file_a));
  const std::string dot = to_dot(d);
  if (o.json) {
    ordered_json j = report_header("export-dot", o);
    j["dot"] = dot;
    out << j.dump(2) << "\n";
  } else if (!o.file_b.empty()) {
    write_file(o.file_b, dot);
  } else {
    out << dot;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"GHZ/W calculus toolkit: diagram evaluation, Frobenius-algebra "
               "checking, state classification, and synthesis"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sc) {
    sc->add_option("--tol", o.tol, "absolute and relative tolerance");
    sc->add_option("--seed", o.seed, "seed for randomized search steps");
    sc->add_flag("--json", o.json, "emit a JSON report");
  };
  auto one_file = [&o, &add_common](CLI::App* sc, const char* what) {
    sc->add_option("file", o.file_a, what)->required();
    add_common(sc);
    return sc;
  };

  one_file(app.add_subcommand("eval", "evaluate a diagram to its tensor"),
           "diagram file (.diag: DSL or JSON)");
  one_file(app.add_subcommand("check-cfa", "check the Frobenius axioms"),
           "algebra file (.cfa)");
  one_file(app.add_subcommand("classify-cfa",
                              "classify an algebra as ghz-like or w-like"),
           "algebra file (.cfa)");
  one_file(app.add_subcommand("classify-state",
                              "tripartite entanglement class of a 3-qubit state"),
           "state file (.state)");
  one_file(app.add_subcommand("superclass",
                              "recursive entanglement superclass label"),
           "state file (.state)");
  one_file(app.add_subcommand("frobenius-state",
                              "test for the Frobenius-state property"),
           "state file (.state)");
  one_file(app.add_subcommand("pair-check", "check pair compatibility laws"),
           "pair file (.pair)");
  one_file(app.add_subcommand("partner", "derive the partner algebra"),
           "algebra file (.cfa)");
  CLI::App* normalize_cmd =
      one_file(app.add_subcommand("normalize", "rewrite to normal form"),
               "diagram file (.diag)");
  normalize_cmd->add_option("--kind", o.kind,
                            "structure kind: scfa, acfa, cfa, or auto");
  CLI::App* qmux_cmd = app.add_subcommand("qmux", "quantum multiplexor check");
  qmux_cmd->add_option("psi", o.file_a, "first branch state (.state)")->required();
  qmux_cmd->add_option("phi", o.file_b, "second branch state (.state)")->required();
  add_common(qmux_cmd);
  one_file(app.add_subcommand("pldu", "PLDU decomposition of a 2x2 map"),
           "tensor file (single-qubit map)");
  CLI::App* dot_cmd = app.add_subcommand("export-dot", "emit Graphviz DOT");
  dot_cmd->add_option("file", o.file_a, "diagram file (.diag)")->required();
  dot_cmd->add_option("output", o.file_b, "output path (stdout if omitted)");
  add_common(dot_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  const Tolerance tol{o.tol, o.tol};
  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    if (verb == "eval") return cmd_eval(o, out);
    if (verb == "check-cfa") return cmd_check_cfa(o, out, tol);
    if (verb == "classify-cfa") return cmd_classify_cfa(o, out, tol);
    if (verb == "classify-state") return cmd_classify_state(o, out, err, tol);
    if (verb == "superclass") return cmd_superclass(o, out, tol);
    if (verb == "frobenius-state") return cmd_frobenius_state(o, out, tol);
    if (verb == "pair-check") return cmd_pair_check(o, out, tol);
    if (verb == "partner") return cmd_partner(o, out, err, tol);
    if (verb == "normalize") return cmd_normalize(o, out);
    if (verb == "qmux") return cmd_qmux(o, out, tol);
    if (verb == "pldu") return cmd_pldu(o, out, err, tol);
    if (verb == "export-dot") return cmd_export_dot(o, out);
    err << "error: unknown verb '" << verb << "'\n";
    return 2;
  } catch (const CfaError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const PairError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const SloccError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const RewriteError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ghzw
