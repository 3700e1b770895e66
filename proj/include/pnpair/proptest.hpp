#pragma once

#include "pnpair/characters.hpp"
#include "pnpair/verifier.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pnp {

// Result of one property suite: every check is counted, the first few failures are described.
struct PropertyReport {
    std::string suite;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> failed;  // at most 20 descriptions
    std::vector<std::string> notes;
    bool passed() const { return checks > 0 && failures == 0; }

    void check(bool ok, const std::string& what);
};

// indicators, decomposition, weil, counting
const std::vector<std::string>& property_suite_names();
PropertyReport run_property_suite(const std::string& name, std::uint64_t seed = 1);

// monic numerator and denominator of the given degrees, resampled until coprime
RationalFunction random_rational(const FieldTower& T, std::mt19937_64& rng, int num_deg, int den_deg);

enum class CharSumKind { Weil, Hybrid, ChiFab };
CharSumKind parse_charsum_kind(const std::string& s);
const char* charsum_kind_name(CharSumKind k) noexcept;

struct CharSumRow {
    CharSumKind kind;
    std::string tuple;   // function and character parameters
    double abs_sum = 0;  // |sum|, or |sum - (q^m - |P|)| for the trivial χ_{f,a,b} tuple
    double bound = 0;
    bool hypothesis = true;
    bool pass = true;
    // hybrid rows: the same sum with only the poles of g removed
    double poles_only_abs_sum = -1;
    bool poles_only_pass = true;
};

// Seeded character-sum samples. Weil and Hybrid draw a fresh f per row and keep only rows whose
// hypotheses hold; ChiFab uses the given f with sampled (a, b) and character tuples.
std::vector<CharSumRow> charsum_rows(const CharacterTables& C, CharSumKind kind, std::size_t samples,
                                     std::uint64_t seed, const RationalFunction* f = nullptr);

// Random base divisors and leftovers over the atoms of the flag table.
SieveConfig random_sieve_config(const FlagTable& flags, std::mt19937_64& rng);

} // namespace pnp
