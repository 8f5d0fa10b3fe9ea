#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "burnside/finiteness.hpp"
#include "burnside/kernel_category.hpp"
#include "burnside/kleene.hpp"

namespace burnside {

// All functions here parse or emit JSON text. Malformed input raises
// Error(Errc::ParseError). Emission is canonical: object keys sorted,
// two-space indentation, no floating point anywhere, so equal data yields
// byte-identical text.

// Matrix job: a field, square generators over it, optional limits.
struct JobInput {
  Field field = Field::rationals();
  std::vector<Mat> generators;
  Limits limits;
};
JobInput parse_job(const std::string& text, const Limits& defaults);

// Labeled-graph job for path-image tables; owns the monoid when in monoid
// mode. order is empty when the input gave none.
struct GraphJob {
  LabeledGraph graph;
  std::vector<int> order;
};
GraphJob parse_graph_job(const std::string& text);

// Closure interchange: keys, generator positions, Cayley data (full table
// when within the threshold), stats, optional carrier matrices.
std::string closure_json(ClosureResult& result, bool include_carrier,
                         std::size_t table_threshold = 4096);

std::string flag_json(const FlagDecomposition& flag);

std::string path_table_json(const PathImageTable& table);

// Category dump: objects, counts, and (within the listing limit) every
// arrow with its coordinates, word, and a 64-bit digest of its identity key.
std::string kernel_json(const KernelContext& ctx, const KernelClosure& closure,
                        std::size_t arrow_listing_limit = 10000);

// Self-contained decision document: echoes field, generators, and limits,
// then records verdict, witness, conjugation, per-block analysis, kernel
// cross-check, and closure stats. Re-running the decision on the echoed
// input reproduces the document byte for byte.
std::string certificate_json(const std::vector<Mat>& gens, const FinitenessReport& rep);

enum class VerifyStatus { Ok, Inconclusive, Mismatch };

struct VerifyResult {
  VerifyStatus status = VerifyStatus::Mismatch;
  std::string message;
};

// Re-runs the decision recorded in the certificate and compares the rebuilt
// document byte for byte: any divergence is a Mismatch naming the first
// differing path. A matching document whose verdict is inconclusive
// certifies nothing and reports Inconclusive.
VerifyResult verify_certificate(const std::string& certificate_text);

// Reparse and re-emit canonically.
std::string canonicalize(const std::string& json_text);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

// Stable cache file name for a command applied to a canonical input.
std::string cache_name(std::string_view command, std::string_view canonical_input);

}  // namespace burnside
