#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "burnside/errors.hpp"
#include "burnside/finiteness.hpp"
#include "burnside/io.hpp"
#include "burnside/kernel_category.hpp"
#include "burnside/kleene.hpp"
#include "burnside/version.hpp"

namespace {

using namespace burnside;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;        // usage, parse, or input errors
constexpr int kExitWitness = 2;      // proven non-periodic
constexpr int kExitBudget = 3;       // inconclusive within the configured budget
constexpr int kExitMismatch = 4;     // verification mismatch

struct Common {
  std::string input;
  std::optional<std::uint64_t> max_elements, max_steps, cap_powers;
  std::string cache_dir;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("input", c.input, "job file, or - for stdin")->required();
  cmd->add_option("--max-elements", c.max_elements, "element budget for closures");
  cmd->add_option("--max-steps", c.max_steps, "product budget for closures");
  cmd->add_option("--cap-powers", c.cap_powers, "power-walk budget per element");
  cmd->add_option("--cache", c.cache_dir, "directory for result caching");
  cmd->add_flag("--quiet", c.quiet, "one-line summary instead of the full report");
}

std::optional<std::uint64_t> env_u64(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') {
    std::cerr << "warning: ignoring non-numeric " << name << "\n";
    return std::nullopt;
  }
  return parsed;
}

// Flag beats environment beats default.
Limits effective_limits(const Common& c) {
  Limits l;
  if (auto v = env_u64("BURNSIDE_MAX_ELEMENTS")) l.max_elements = static_cast<std::size_t>(*v);
  if (auto v = env_u64("BURNSIDE_MAX_STEPS")) l.max_steps = *v;
  if (auto v = env_u64("BURNSIDE_CAP_POWERS")) l.cap_powers = *v;
  if (c.max_elements) l.max_elements = static_cast<std::size_t>(*c.max_elements);
  if (c.max_steps) l.max_steps = *c.max_steps;
  if (c.cap_powers) l.cap_powers = *c.cap_powers;
  return l;
}

std::string effective_cache_dir(const Common& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  const char* v = std::getenv("BURNSIDE_CACHE");
  return v ? std::string(v) : std::string();
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, "cannot open input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Cache entries are keyed on the command, the canonical input text, and the
// effective limits, so changed budgets never alias.
std::filesystem::path cache_path(const std::string& dir, const std::string& command,
                                 const std::string& text, const Limits& l) {
  std::string seed = canonicalize(text);
  seed += "\nmax_elements=" + std::to_string(l.max_elements);
  seed += "\nmax_steps=" + std::to_string(l.max_steps);
  seed += "\ncap_powers=" + std::to_string(l.cap_powers);
  return std::filesystem::path(dir) / cache_name(command, seed);
}

std::optional<std::string> cache_read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void cache_write(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Finite: return kExitOk;
    case Verdict::NonPeriodicWitness: return kExitWitness;
    case Verdict::Inconclusive: return kExitBudget;
  }
  return kExitError;
}

Verdict verdict_of_certificate(const std::string& text) {
  // The verdict line is a top-level "verdict" key in canonical output.
  if (text.find("\"verdict\": \"finite\"") != std::string::npos) return Verdict::Finite;
  if (text.find("\"verdict\": \"non-periodic-witness\"") != std::string::npos)
    return Verdict::NonPeriodicWitness;
  return Verdict::Inconclusive;
}

void print_quiet(const FinitenessReport& rep) {
  switch (rep.verdict) {
    case Verdict::Finite:
      std::cout << "finite order=" << *rep.order << "\n";
      return;
    case Verdict::NonPeriodicWitness:
      std::cout << "non-periodic-witness word=" << word_string(rep.witness->word) << "\n";
      return;
    case Verdict::Inconclusive:
      std::cout << "inconclusive\n";
      return;
  }
}

int run_check(const Common& c, const std::string& emit_path) {
  const std::string text = read_input(c.input);
  const Limits limits = effective_limits(c);
  const std::string dir = effective_cache_dir(c);

  std::string cert;
  if (!dir.empty()) {
    if (auto cached = cache_read(cache_path(dir, "check", text, limits))) {
      std::cerr << "cache hit\n";
      if (!c.quiet) std::cout << *cached;
      if (!emit_path.empty()) cache_write(emit_path, *cached);
      return verdict_exit(verdict_of_certificate(*cached));
    }
  }

  JobInput job = parse_job(text, limits);
  FinitenessReport rep = decide_finiteness(job.generators, job.limits);
  cert = certificate_json(job.generators, rep);

  if (!dir.empty()) cache_write(cache_path(dir, "check", text, limits), cert);
  if (!emit_path.empty()) cache_write(emit_path, cert);
  if (c.quiet)
    print_quiet(rep);
  else
    std::cout << cert;
  return verdict_exit(rep.verdict);
}

int run_closure(const Common& c, bool include_carrier) {
  JobInput job = parse_job(read_input(c.input), effective_limits(c));
  ClosureResult r = close_matrices(job.generators, job.limits);
  if (c.quiet)
    std::cout << (r.stats.complete ? "complete" : "partial") << " size=" << r.monoid.size()
              << "\n";
  else
    std::cout << closure_json(r, include_carrier);
  return r.stats.complete ? kExitOk : kExitBudget;
}

int run_triangularize(const Common& c) {
  JobInput job = parse_job(read_input(c.input), effective_limits(c));
  FlagDecomposition flag = triangularize(job.generators);
  if (c.quiet) {
    std::cout << "block_sizes=";
    for (std::size_t i = 0; i < flag.block_sizes.size(); ++i)
      std::cout << (i ? "," : "") << flag.block_sizes[i];
    std::cout << "\n";
  } else {
    std::cout << flag_json(flag);
  }
  return kExitOk;
}

int run_kernelcat(const Common& c, std::size_t arrow_limit) {
  JobInput job = parse_job(read_input(c.input), effective_limits(c));
  FlagDecomposition flag = triangularize(job.generators);

  std::optional<KernelContext> ctx;
  if (flag.block_sizes.size() >= 2) {
    const int n = job.generators.front().rows();
    const int top = flag.block_sizes.front();
    auto res = KernelContext::block(job.field, top, n - top, flag.conjugated, job.limits);
    if (!res.context) {
      std::cerr << "diagonal closure exceeded its budget\n";
      return kExitBudget;
    }
    ctx = std::move(*res.context);
  } else {
    ClosureResult r = close_matrices(job.generators, job.limits);
    if (!r.stats.complete) {
      std::cerr << "closure exceeded its budget; the category needs the full monoid\n";
      return kExitBudget;
    }
    auto m = std::make_shared<const FinMonoid>(std::move(r.monoid));
    ctx = KernelContext::enumerated(hom_identity(m));
  }

  KernelClosure kc = kernel_category(*ctx, job.limits);
  if (c.quiet)
    std::cout << (kc.cat.complete ? "complete" : "partial") << " objects="
              << kc.cat.objects.size() << " arrows=" << kc.cat.arrows.size() << "\n";
  else
    std::cout << kernel_json(*ctx, kc, arrow_limit);
  return kc.cat.complete ? kExitOk : kExitBudget;
}

int run_kleene(const Common& c, bool bruteforce, bool crosscheck,
               const std::vector<int>& order_flag) {
  GraphJob job = parse_graph_job(read_input(c.input));
  const Limits limits = effective_limits(c);
  std::vector<int> order = order_flag.empty() ? job.order : order_flag;

  PathImageTable table = bruteforce ? image_homsets_bruteforce(job.graph, limits)
                         : order.empty() ? image_homsets(job.graph, limits)
                                         : image_homsets(job.graph, order, limits);
  if (crosscheck && !bruteforce) {
    PathImageTable ref = image_homsets_bruteforce(job.graph, limits);
    if (!table.same_sets(ref)) {
      std::cerr << "elimination and brute force disagree\n";
      return kExitMismatch;
    }
    std::cerr << "crosscheck passed\n";
  }
  if (c.quiet)
    std::cout << "total=" << table.total() << "\n";
  else
    std::cout << path_table_json(table);
  return kExitOk;
}

int run_verify(const Common& c) {
  VerifyResult r = verify_certificate(read_input(c.input));
  std::cout << "{\n  \"message\": \"" << r.message << "\",\n  \"status\": \""
            << (r.status == VerifyStatus::Ok          ? "ok"
                : r.status == VerifyStatus::Inconclusive ? "inconclusive"
                                                          : "mismatch")
            << "\"\n}\n";
  switch (r.status) {
    case VerifyStatus::Ok: return kExitOk;
    case VerifyStatus::Inconclusive: return kExitBudget;
    case VerifyStatus::Mismatch: return kExitMismatch;
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finiteness decisions for finitely generated matrix monoids"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common c_check, c_closure, c_tri, c_kernel, c_kleene, c_verify;
  std::string emit_path;
  bool include_carrier = false;
  std::size_t arrow_limit = 10000;
  bool bruteforce = false, crosscheck = false;
  std::vector<int> order_flag;

  auto* check = app.add_subcommand("check", "Decide finiteness and print a certificate");
  add_common(check, c_check);
  check->add_option("--emit-certificate", emit_path, "also write the certificate to a file");

  auto* closure = app.add_subcommand("closure", "Close the generators and print the monoid");
  add_common(closure, c_closure);
  closure->add_flag("--carrier", include_carrier, "include the carrier matrices");

  auto* tri = app.add_subcommand("triangularize", "Block triangularize the generators");
  add_common(tri, c_tri);

  auto* kernel = app.add_subcommand("kernelcat", "Build the kernel category of the input");
  add_common(kernel, c_kernel);
  kernel->add_option("--arrow-limit", arrow_limit, "largest arrow list to print in full");

  auto* kleene = app.add_subcommand("kleene", "Path-image table of a labeled graph");
  add_common(kleene, c_kleene);
  kleene->add_flag("--bruteforce", bruteforce, "enumerate walks instead of eliminating");
  kleene->add_flag("--crosscheck", crosscheck, "compare elimination against brute force");
  kleene->add_option("--order", order_flag, "elimination order (overrides the job file)");

  auto* verify = app.add_subcommand("verify", "Recompute and compare a certificate");
  add_common(verify, c_verify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(c_check, emit_path);
    if (closure->parsed()) return run_closure(c_closure, include_carrier);
    if (tri->parsed()) return run_triangularize(c_tri);
    if (kernel->parsed()) return run_kernelcat(c_kernel, arrow_limit);
    if (kleene->parsed()) return run_kleene(c_kleene, bruteforce, crosscheck, order_flag);
    if (verify->parsed()) return run_verify(c_verify);
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return e.code() == Errc::LimitExceeded ? kExitBudget : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
