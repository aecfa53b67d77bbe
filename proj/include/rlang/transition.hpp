#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rlang {

/// Values predicted for one named factor of the next state.
struct FactorAssignment {
    std::string name;                  // display name, e.g. "x" or "passenger.in_taxi"
    std::vector<std::size_t> indices;  // state indices, empty when unmapped
    std::vector<double> values;        // one per index (or per factor dimension)
};

/// Knowledge about a next state: either a full state vector, or a partial map
/// over factors. Partial maps are never completed implicitly.
struct NextStateAssignment {
    bool full = false;
    std::vector<double> state;
    std::vector<FactorAssignment> factors;

    static NextStateAssignment full_state(std::vector<double> s);
    static NextStateAssignment factor(FactorAssignment f);

    /// (index, value) pairs sorted by index.
    std::vector<std::pair<std::size_t, double>> index_values() const;
    bool shares_index_with(const NextStateAssignment& other) const;
    /// True when both assign some common index to different values.
    bool disagrees_with(const NextStateAssignment& other) const;
    bool same_as(const NextStateAssignment& other) const;
    /// Identity completion: unpredicted indices copy `current`.
    std::vector<double> complete(const std::vector<double>& current) const;
    /// "{x'=3, y'=3}" or "{S'=[1, 1]}".
    std::string str() const;
};

struct TransitionEntry {
    NextStateAssignment next;
    double probability = 0.0;
};

/// A sub-probability measure over next-state assignments; the remaining mass
/// is unknown.
struct TransitionMeasure {
    std::vector<TransitionEntry> entries;
    double unknown_mass = 1.0;

    static TransitionMeasure unknown() { return {}; }
    static TransitionMeasure point(NextStateAssignment next);

    double known_mass() const;
    bool fully_unknown() const { return entries.empty(); }
    void normalize_unknown();
    /// Adds `p` of `next`, merging with an identical assignment if present.
    void add(NextStateAssignment next, double p);
    std::string str() const;
};

/// Independent composition of predictions about disjoint factors.
/// Throws IllFormedComposition when two entries assign the same index.
TransitionMeasure product(const TransitionMeasure& a, const TransitionMeasure& b);

/// Composition of referenced effects: supports must be disjoint and the
/// total mass at most 1, else IllFormedComposition.
TransitionMeasure sum(const TransitionMeasure& a, const TransitionMeasure& b);

TransitionMeasure scaled(const TransitionMeasure& m, double weight);

/// Everything an effect says at one (s, a[, s']) query.
struct EffectOutcome {
    std::optional<TransitionMeasure> transition;  // nullopt: no transition knowledge
    std::optional<double> reward;                 // nullopt: no reward knowledge
};

/// Shortest float text with a trailing ".0" for integral values ("1.0", "0.25").
std::string format_probability(double p);

}  // namespace rlang
