#include <doctest.h>

#include "support.hpp"

using namespace ts;

namespace {

std::string z3_cycle_graph_json() {
  return R"({
  "vertices": 2,
  "monoid": {"size": 3, "identity": 0, "generators": [1],
             "keys": ["e", "g", "gg"],
             "table": [0, 1, 2, 1, 2, 0, 2, 0, 1]},
  "edges": [
    {"from": 0, "to": 1, "label": "g"},
    {"from": 1, "to": 0, "label": "e"}
  ]
})";
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("check decides the fixtures with the documented exit codes") {
  const std::string s3 = write_scratch("s3.json", s3_job_json());
  auto r = run_cli("check " + s3);
  CHECK(r.exit == 0);
  CHECK(r.out.find("\"verdict\": \"finite\"") != std::string::npos);
  CHECK(r.out.find("\"order\": 6") != std::string::npos);

  auto rq = run_cli("check --quiet " + s3);
  CHECK(rq.exit == 0);
  CHECK(rq.out == "finite order=6\n");

  const std::string sh = write_scratch("shear_q.json", shear_q_job_json());
  auto rw = run_cli("check " + sh);
  CHECK(rw.exit == 2);
  CHECK(rw.out.find("\"verdict\": \"non-periodic-witness\"") != std::string::npos);
  CHECK(rw.out.find("powers stay distinct") != std::string::npos);

  const std::string s4 = write_scratch("s4.json", s4_job_json());
  auto ri = run_cli("check --quiet --max-elements 10 " + s4);
  CHECK(ri.exit == 3);
  CHECK(ri.out == "inconclusive\n");

  auto rf = run_cli("check --quiet " + write_scratch("gf3.json", shear_gf3_job_json()));
  CHECK(rf.exit == 0);
  CHECK(rf.out == "finite order=3\n");
}

TEST_CASE("check output is deterministic byte for byte") {
  const std::string s3 = write_scratch("s3-det.json", s3_job_json());
  auto a = run_cli("check " + s3);
  auto b = run_cli("check " + s3);
  CHECK(a.exit == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("check reads from stdin when the input is a dash") {
  const std::string s3 = write_scratch("s3-stdin.json", s3_job_json());
  auto r = run_cli("check --quiet - < " + s3);
  CHECK(r.exit == 0);
  CHECK(r.out == "finite order=6\n");
}

TEST_CASE("environment budgets apply and flags beat them") {
  const std::string s4 = write_scratch("s4-env.json", s4_job_json());
  auto renv = run_cli("check --quiet " + s4, "BURNSIDE_MAX_ELEMENTS=10 ");
  CHECK(renv.exit == 3);
  CHECK(renv.out == "inconclusive\n");
  auto rflag = run_cli("check --quiet --max-elements 200000 " + s4, "BURNSIDE_MAX_ELEMENTS=10 ");
  CHECK(rflag.exit == 0);
  CHECK(rflag.out == "finite order=24\n");
}

TEST_CASE("closure summarizes completion and budget exhaustion") {
  const std::string s3 = write_scratch("s3-cl.json", s3_job_json());
  auto r = run_cli("closure --quiet " + s3);
  CHECK(r.exit == 0);
  CHECK(r.out == "complete size=6\n");

  const std::string s4 = write_scratch("s4-cl.json", s4_job_json());
  auto rp = run_cli("closure --quiet --max-elements 10 " + s4);
  CHECK(rp.exit == 3);
  CHECK(rp.out == "partial size=10\n");

  auto rc = run_cli("closure --carrier " + s3);
  CHECK(rc.exit == 0);
  CHECK(rc.out.find("\"carrier\"") != std::string::npos);
}

TEST_CASE("triangularize prints the block structure") {
  const std::string s3 = write_scratch("s3-tri.json", s3_job_json());
  auto r = run_cli("triangularize --quiet " + s3);
  CHECK(r.exit == 0);
  CHECK(r.out == "block_sizes=1,2\n");
  auto rj = run_cli("triangularize " + s3);
  CHECK(rj.exit == 0);
  CHECK(rj.out.find("\"q_inv\"") != std::string::npos);
}

TEST_CASE("kernelcat selects block mode on split inputs") {
  const std::string ut2 = write_scratch("ut2.json", ut2_gf2_job_json());
  auto r = run_cli("kernelcat " + ut2);
  CHECK(r.exit == 0);
  CHECK(r.out.find("\"mode\": \"block\"") != std::string::npos);

  // A single irreducible block falls back to the enumerated construction.
  const std::string m2 = write_scratch("m2.json", R"({
  "field": {"p": 2},
  "generators": [[[0,1],[1,0]], [[1,1],[0,1]], [[1,0],[0,0]]]
})");
  auto re = run_cli("kernelcat " + m2);
  CHECK(re.exit == 0);
  CHECK(re.out.find("\"mode\": \"enumerated\"") != std::string::npos);

  auto rq = run_cli("kernelcat --quiet " + ut2);
  CHECK(rq.exit == 0);
  CHECK(rq.out.substr(0, 9) == "complete ");
}

TEST_CASE("kleene table agrees with brute force") {
  const std::string g = write_scratch("cycle.json", z3_cycle_graph_json());
  auto r = run_cli("kleene --quiet " + g);
  CHECK(r.exit == 0);
  CHECK(r.out == "total=12\n");

  auto rb = run_cli("kleene --bruteforce --quiet " + g);
  CHECK(rb.exit == 0);
  CHECK(rb.out == "total=12\n");

  auto rc = run_cli("kleene --crosscheck " + g);
  CHECK(rc.exit == 0);
  CHECK(rc.err.find("crosscheck passed") != std::string::npos);

  auto ro = run_cli("kleene --quiet --order 1 --order 0 " + g);
  CHECK(ro.exit == 0);
  CHECK(ro.out == "total=12\n");

  auto rbad = run_cli("kleene --quiet --order 0 --order 0 " + g);
  CHECK(rbad.exit == 1);
  CHECK(rbad.err.find("error [ParseError]") != std::string::npos);
}

TEST_CASE("verify accepts, rejects, and flags inconclusive certificates") {
  const std::string s3 = write_scratch("s3-v.json", s3_job_json());
  const std::string cert_path = (scratch_dir() / "s3-cert.json").string();
  auto r = run_cli("check --emit-certificate " + cert_path + " " + s3);
  CHECK(r.exit == 0);

  auto rv = run_cli("verify " + cert_path);
  CHECK(rv.exit == 0);
  CHECK(rv.out.find("\"status\": \"ok\"") != std::string::npos);

  const std::string tampered = replace_once(read_file(cert_path), "\"order\": 6", "\"order\": 7");
  const std::string bad_path = write_scratch("s3-cert-bad.json", tampered);
  auto rb = run_cli("verify " + bad_path);
  CHECK(rb.exit == 4);
  CHECK(rb.out.find("\"status\": \"mismatch\"") != std::string::npos);
  CHECK(rb.out.find("recomputation diverges at ") != std::string::npos);

  const std::string s4 = write_scratch("s4-v.json", s4_job_json());
  const std::string ic_path = (scratch_dir() / "s4-cert.json").string();
  auto ri = run_cli("check --max-elements 10 --emit-certificate " + ic_path + " " + s4);
  CHECK(ri.exit == 3);
  auto rvi = run_cli("verify " + ic_path);
  CHECK(rvi.exit == 3);
  CHECK(rvi.out.find("\"status\": \"inconclusive\"") != std::string::npos);
}

TEST_CASE("the cache replays a previous check verbatim") {
  const std::string dir = (scratch_dir() / "cache").string();
  const std::string s3 = write_scratch("s3-cache.json", s3_job_json());
  auto first = run_cli("check --cache " + dir + " " + s3);
  CHECK(first.exit == 0);
  CHECK(first.err.find("cache hit") == std::string::npos);

  auto second = run_cli("check --cache " + dir + " " + s3);
  CHECK(second.exit == 0);
  CHECK(second.err.find("cache hit") != std::string::npos);
  CHECK(second.out == first.out);

  // A different budget must not alias the cached entry.
  auto third = run_cli("check --cache " + dir + " --max-elements 77777 " + s3);
  CHECK(third.exit == 0);
  CHECK(third.err.find("cache hit") == std::string::npos);

  auto env = run_cli("check --quiet " + s3, "BURNSIDE_CACHE=" + dir + " ");
  CHECK(env.exit == 0);
  CHECK(env.err.find("cache hit") != std::string::npos);
}

TEST_CASE("usage and input errors exit with one") {
  auto r = run_cli("check /nonexistent-input.json");
  CHECK(r.exit == 1);
  CHECK(r.err.find("error [ParseError]") != std::string::npos);

  auto rbad = run_cli("check " + write_scratch("bad.json", "{\"field\":\"Q\"}"));
  CHECK(rbad.exit == 1);

  auto rnone = run_cli("");
  CHECK(rnone.exit != 0);

  auto rfloat = run_cli(
      "check " + write_scratch("float.json", R"({"field":"Q","generators":[[[0.5]]]})"));
  CHECK(rfloat.exit == 1);
  CHECK(rfloat.err.find("floating point") != std::string::npos);
}
