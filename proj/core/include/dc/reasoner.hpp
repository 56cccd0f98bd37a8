#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dc/kb.hpp"
#include "dc/semantics.hpp"

namespace dc {

struct SubsumptionQuery {
    const KnowledgeBase *kb = nullptr;
    std::string sub, super; // concept names
};

struct CounterModel {
    Interpretation interp;
    std::string witness; // object in sub^I \ super^I
    unsigned bound = 0;  // the bound the search ran at
};

// Exhaustive search for a finite model of `kb` separating sub from super,
// over all interpretations with |Δ_C| ≤ bound (and |Δ_T| ≤ bound when the
// vocabulary has attributes or datatypes). Deterministic enumeration order;
// absence of a countermodel at this bound is not a proof of subsumption.
// Throws BudgetExceeded when the node budget runs out.
std::optional<CounterModel> find_countermodel(const SubsumptionQuery &q, unsigned bound,
                                              unsigned long long node_budget = 1000000);

// Sound (incomplete) subsumption check by literal-set saturation on the
// standard-view profiles. True implies no countermodel exists at any bound.
bool subsumes_structural(const KnowledgeBase &kb, const std::string &sub,
                         const std::string &super);

bool equivalent(const KnowledgeBase &kb, const std::string &a, const std::string &b);

// |concept names| + largest cardinality constant + 1, capped at 5.
unsigned default_bound(const KnowledgeBase &kb);

enum class PairVerdict {
    Subsumed,           // structural procedure proved it
    RefutedWithWitness, // countermodel found at the bound
    UnknownAtBound,     // structural said no, search found nothing
};

struct ClassificationResult {
    std::vector<std::string> concepts;
    // ordered pairs (sub, super) for every distinct pair plus reflexive ones
    std::map<std::pair<std::string, std::string>, PairVerdict> verdicts;
    std::vector<std::vector<std::string>> equivalence_classes;
    unsigned bound = 0;

    bool subsumed(const std::string &sub, const std::string &super) const;
};

ClassificationResult classify(const KnowledgeBase &kb, unsigned bound);

// Atomic concepts whose extension is forced empty in every model within the
// bound (possible only in hand-written kbs).
std::vector<std::string> unsatisfiable_concepts(const KnowledgeBase &kb, unsigned bound);

} // namespace dc
