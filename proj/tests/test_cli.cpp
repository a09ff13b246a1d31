// Copyright 2026 The ghzw-calculus Authors
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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ghzw/cfa.hpp"
#include "ghzw/io.hpp"
#include "ghzw/pair.hpp"
#include "ghzw/tensor.hpp"

using namespace ghzw;

namespace {

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    std::random_device rd;
    auto p = std::filesystem::temp_directory_path() /
             ("ghzw-cli-" + std::to_string(rd()));
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string put(const std::string& name, const std::string& content) {
  auto path = scratch_dir() / name;
  std::ofstream f(path);
  f << content;
  return path.string();
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"ghzw"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string ghz3_file() {
  static const std::string path = put(
      "ghz3.state", state_to_json(Tensor::state(3, {1, 0, 0, 0, 0, 0, 0, 1})));
  return path;
}

}  // namespace

TEST_CASE("eval prints the nonzero amplitudes of a DSL diagram") {
  std::string diag = put("copy.diag", "(seq (unit ghz) (comult ghz))");
  CliResult r = run({"eval", diag});
  CHECK(r.code == 0);
  CHECK(r.out.find("tensor: 0 -> 2") != std::string::npos);
  CHECK(r.out.find("|00>") != std::string::npos);
  CHECK(r.out.find("|11>") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("check-cfa splits pass from fail through the exit code") {
  std::string good = put("ghz.cfa", cfa_to_json(ghz_algebra()));
  CliResult ok = run({"check-cfa", good});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("pass") != std::string::npos);

  CFA broken = ghz_algebra();
  broken.mult = broken.mult.scaled(3.0);
  std::string bad = put("broken.cfa", cfa_to_json(broken));
  CliResult fail = run({"check-cfa", bad});
  CHECK(fail.code == 1);
  CHECK(fail.out.find("FAIL") != std::string::npos);
}

TEST_CASE("classify-cfa names the class and shows a witness") {
  Tensor l(1, 1);
  l.at(0, 0) = 1;
  l.at(0, 1) = 1;
  l.at(1, 1) = 1;
  Tensor linv(1, 1);
  linv.at(0, 0) = 1;
  linv.at(0, 1) = -1;
  linv.at(1, 1) = 1;
  std::string file = put("wconj.cfa", cfa_to_json(conjugate_cfa(w_algebra(), l, linv)));
  CliResult r = run({"classify-cfa", file});
  CHECK(r.code == 0);
  CHECK(r.out.find("class: w-class") != std::string::npos);
  CHECK(r.out.find("local witness:") != std::string::npos);
}

TEST_CASE("classify-state reads three-qubit states only") {
  CliResult r = run({"classify-state", ghz3_file()});
  CHECK(r.code == 0);
  CHECK(r.out == "ghz\n");

  std::string w4 = put("w4.state",
                       state_to_json(Tensor::state(
                           4, {0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0})));
  CliResult wrong = run({"classify-state", w4});
  CHECK(wrong.code == 2);
  CHECK(wrong.err.find("3-qubit") != std::string::npos);

  CliResult sup = run({"superclass", w4});
  CHECK(sup.code == 0);
  CHECK(sup.out == "{product, w}\n");
}

TEST_CASE("frobenius-state reports witnesses and uses exit code 1 for no") {
  CliResult yes = run({"frobenius-state", ghz3_file()});
  CHECK(yes.code == 0);
  CHECK(yes.out.find("frobenius state: yes") != std::string::npos);
  CHECK(yes.out.find("witness effect xi:") != std::string::npos);

  std::string prod =
      put("prod.state", state_to_json(Tensor::state(3, {1, 0, 0, 0, 0, 0, 0, 0})));
  CliResult no = run({"frobenius-state", prod});
  CHECK(no.code == 1);
  CHECK(no.out.find("frobenius state: no") != std::string::npos);
}

TEST_CASE("pair-check passes the canonical pair and flags a broken tick") {
  std::string good = put("canon.pair", pair_to_json(canonical_pair()));
  CliResult ok = run({"pair-check", good});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("pass (max residual") != std::string::npos);

  GhzwPair broken = canonical_pair();
  broken.tick = Tensor::identity();
  std::string bad = put("broken.pair", pair_to_json(broken));
  CliResult fail = run({"pair-check", bad});
  CHECK(fail.code == 1);
  CHECK(fail.out.find("FAIL") != std::string::npos);
}

TEST_CASE("partner derives the opposite structure or reports neither") {
  std::string ghz = put("ghz.cfa", cfa_to_json(ghz_algebra()));
  CliResult r = run({"partner", ghz});
  CHECK(r.code == 0);
  CHECK(r.out.find("anti-special partners") != std::string::npos);

  std::string w = put("w.cfa", cfa_to_json(w_algebra()));
  CliResult back = run({"partner", w});
  CHECK(back.code == 0);
  CHECK(back.out.find("special partner") != std::string::npos);

  CFA neither = ghz_algebra();
  neither.mult = neither.mult.scaled(3.0);
  std::string bad = put("neither.cfa", cfa_to_json(neither));
  CliResult no = run({"partner", bad});
  CHECK(no.code == 1);
  CHECK(no.err.find("neither special nor anti-special") != std::string::npos);
}

TEST_CASE("normalize picks the structure kind automatically") {
  std::string loop = put("loop.diag", "(seq (comult ghz) (mult ghz))");
  CliResult r = run({"normalize", loop});
  CHECK(r.code == 0);
  CHECK(r.out.find("kind: scfa") != std::string::npos);

  CliResult cfa = run({"normalize", loop, "--kind", "cfa"});
  CHECK(cfa.code == 0);
  CHECK(cfa.out.find("kind: cfa") != std::string::npos);

  CliResult bogus = run({"normalize", loop, "--kind", "frobnitz"});
  CHECK(bogus.code == 1);
  CHECK_FALSE(bogus.err.empty());
}

TEST_CASE("qmux certifies branch selection from state files") {
  std::string one = put("one.state", state_to_json(Tensor::ket({1})));
  CliResult r = run({"qmux", one, one});
  CHECK(r.code == 0);
  CHECK(r.out.find("pass (local-equivalence residual") != std::string::npos);

  std::string zero = put("zero.state", state_to_json(Tensor::ket({0})));
  CliResult bad = run({"qmux", one, zero});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("vanishing all-ones amplitude") != std::string::npos);
}

TEST_CASE("pldu factors a map file and rejects wrong shapes") {
  Tensor a(1, 1);
  a.at(0, 0) = 1;
  a.at(0, 1) = 2;
  a.at(1, 0) = 3;
  a.at(1, 1) = 4;
  std::string file = put("map.tensor", tensor_to_json(a));
  CliResult r = run({"pldu", file});
  CHECK(r.code == 0);
  CHECK(r.out.find("permutation: identity") != std::string::npos);
  CHECK(r.out.find("diagonal factor:") != std::string::npos);

  std::string state = put("state.tensor", tensor_to_json(Tensor::ket({0, 0})));
  CliResult wrong = run({"pldu", state});
  CHECK(wrong.code == 2);
  CHECK(wrong.err.find("single-qubit map") != std::string::npos);
}

TEST_CASE("export-dot writes Graphviz text to stdout or a file") {
  std::string diag = put("spider.diag", "(seq (comult ghz) (mult ghz))");
  CliResult r = run({"export-dot", diag});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("digraph", 0) == 0);

  std::string outfile = (scratch_dir() / "spider.dot").string();
  CliResult w = run({"export-dot", diag, outfile});
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  CHECK(read_file(outfile).rfind("digraph", 0) == 0);
}

TEST_CASE("JSON reports are reproducible for a fixed seed") {
  CliResult a = run({"frobenius-state", ghz3_file(), "--json", "--seed", "7"});
  CliResult b = run({"frobenius-state", ghz3_file(), "--json", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"schema\": 1") != std::string::npos);
  CHECK(a.out.find("\"seed\": 7") != std::string::npos);
}

TEST_CASE("usage problems exit with code 2") {
  CliResult unknown = run({"transmogrify", "x"});
  CHECK(unknown.code == 2);

  CliResult missing = run({"eval", (scratch_dir() / "no-such.diag").string()});
  CHECK(missing.code == 2);
  CHECK_FALSE(missing.err.empty());

  CliResult noargs = run({});
  CHECK(noargs.code == 2);
}

TEST_CASE("syntax errors in a diagram file are IO failures, not crashes") {
  std::string bad = put("bad.diag", "(seq (mult ghz)");
  CliResult r = run({"eval", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}
