#include "rlang/transition.hpp"

#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>

#include "rlang/diagnostics.hpp"
#include "rlang/value.hpp"

namespace rlang {

namespace {
constexpr double kMassTolerance = 1e-9;
}

NextStateAssignment NextStateAssignment::full_state(std::vector<double> s) {
    NextStateAssignment a;
    a.full = true;
    a.state = std::move(s);
    return a;
}

NextStateAssignment NextStateAssignment::factor(FactorAssignment f) {
    NextStateAssignment a;
    a.factors.push_back(std::move(f));
    return a;
}

std::vector<std::pair<std::size_t, double>> NextStateAssignment::index_values() const {
    std::vector<std::pair<std::size_t, double>> out;
    if (full) {
        for (std::size_t i = 0; i < state.size(); ++i) out.emplace_back(i, state[i]);
        return out;
    }
    for (const auto& f : factors) {
        for (std::size_t k = 0; k < f.indices.size() && k < f.values.size(); ++k) {
            out.emplace_back(f.indices[k], f.values[k]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool NextStateAssignment::shares_index_with(const NextStateAssignment& other) const {
    if ((full && !state.empty()) && (other.full || !other.index_values().empty())) return true;
    if ((other.full && !other.state.empty()) && !index_values().empty()) return true;
    const auto a = index_values();
    const auto b = other.index_values();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) return true;
        if (a[i].first < b[j].first) ++i; else ++j;
    }
    // Unmapped factors (no indices) are compared by name.
    for (const auto& f : factors) {
        if (!f.indices.empty()) continue;
        for (const auto& g : other.factors) {
            if (g.indices.empty() && g.name == f.name) return true;
        }
    }
    return false;
}

bool NextStateAssignment::disagrees_with(const NextStateAssignment& other) const {
    const auto a = index_values();
    const auto b = other.index_values();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            if (a[i].second != b[j].second) return true;
            ++i;
            ++j;
        } else if (a[i].first < b[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    for (const auto& f : factors) {
        if (!f.indices.empty()) continue;
        for (const auto& g : other.factors) {
            if (g.indices.empty() && g.name == f.name && g.values != f.values) return true;
        }
    }
    return false;
}

bool NextStateAssignment::same_as(const NextStateAssignment& other) const {
    if (index_values() != other.index_values()) return false;
    auto unmapped = [](const NextStateAssignment& n) {
        std::vector<std::pair<std::string, std::vector<double>>> out;
        for (const auto& f : n.factors) {
            if (f.indices.empty()) out.emplace_back(f.name, f.values);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    return unmapped(*this) == unmapped(other);
}

std::vector<double> NextStateAssignment::complete(const std::vector<double>& current) const {
    if (full) return state;
    std::vector<double> out = current;
    for (const auto& [i, v] : index_values()) {
        if (i < out.size()) out[i] = v;
    }
    return out;
}

std::string NextStateAssignment::str() const {
    auto values_text = [](const std::vector<double>& v) {
        if (v.size() == 1) return format_number(v[0]);
        std::string out = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ", ";
            out += format_number(v[i]);
        }
        return out + "]";
    };
    if (full) return "{S'=" + (state.size() == 1 ? "[" + values_text(state) + "]" : values_text(state)) + "}";
    std::string out = "{";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += ", ";
        out += factors[i].name + "'=" + values_text(factors[i].values);
    }
    return out + "}";
}

TransitionMeasure TransitionMeasure::point(NextStateAssignment next) {
    TransitionMeasure m;
    m.entries.push_back({std::move(next), 1.0});
    m.unknown_mass = 0.0;
    return m;
}

double TransitionMeasure::known_mass() const {
    double total = 0.0;
    for (const auto& e : entries) total += e.probability;
    return total;
}

void TransitionMeasure::normalize_unknown() {
    const double rest = 1.0 - known_mass();
    unknown_mass = std::abs(rest) < kMassTolerance ? 0.0 : rest;
}

void TransitionMeasure::add(NextStateAssignment next, double p) {
    if (p <= 0.0) return;
    for (auto& e : entries) {
        if (e.next.same_as(next)) {
            e.probability += p;
            return;
        }
    }
    entries.push_back({std::move(next), p});
}

std::string TransitionMeasure::str() const {
    if (entries.empty()) return "unknown";
    std::string out;
    for (const auto& e : entries) {
        out += e.next.str() + ": " + format_probability(e.probability) + "; ";
    }
    return out + "unknown: " + format_probability(unknown_mass);
}

TransitionMeasure product(const TransitionMeasure& a, const TransitionMeasure& b) {
    TransitionMeasure out;
    for (const auto& ea : a.entries) {
        for (const auto& eb : b.entries) {
            if (ea.next.shares_index_with(eb.next)) {
                throw IllFormedComposition("predictions " + ea.next.str() + " and " + eb.next.str() +
                                           " assign the same state component");
            }
            NextStateAssignment merged;
            if (ea.next.full || eb.next.full) {
                merged = ea.next.full ? ea.next : eb.next;  // the other side is empty
            } else {
                merged.factors = ea.next.factors;
                merged.factors.insert(merged.factors.end(), eb.next.factors.begin(), eb.next.factors.end());
            }
            out.add(std::move(merged), ea.probability * eb.probability);
        }
    }
    out.normalize_unknown();
    return out;
}

TransitionMeasure sum(const TransitionMeasure& a, const TransitionMeasure& b) {
    for (const auto& ea : a.entries) {
        for (const auto& eb : b.entries) {
            if (!ea.next.disagrees_with(eb.next)) {
                throw IllFormedComposition("referenced effects both describe next state " + ea.next.str() +
                                           " / " + eb.next.str() + " (supports must be disjoint)");
            }
        }
    }
    TransitionMeasure out = a;
    for (const auto& eb : b.entries) out.entries.push_back(eb);
    const double total = out.known_mass();
    if (total > 1.0 + kMassTolerance) {
        throw IllFormedComposition("referenced effects assign total probability " + format_number(total) +
                                   " > 1");
    }
    out.normalize_unknown();
    return out;
}

TransitionMeasure scaled(const TransitionMeasure& m, double weight) {
    TransitionMeasure out;
    for (const auto& e : m.entries) out.entries.push_back({e.next, e.probability * weight});
    out.normalize_unknown();
    return out;
}

std::string format_probability(double p) {
    // Masses like 1 - 0.9 carry rounding noise; 12 significant digits hide it.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", p);
    std::string text = format_number(std::strtod(buf, nullptr));
    if (text.find_first_of(".en") == std::string::npos) text += ".0";
    return text;
}

}  // namespace rlang
