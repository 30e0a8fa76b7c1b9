#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kelleyscope/atom_set.hpp"
#include "kelleyscope/errors.hpp"

namespace kelleyscope {

// The atom set of a finite set algebra B = P([0,size)). Stands in for a
// truncation of P(omega) to [0,N).
struct GroundSet {
    std::size_t size = 0;
    std::optional<std::vector<std::string>> labels; // one per atom, distinct

    explicit GroundSet(std::size_t n, std::optional<std::vector<std::string>> lab = std::nullopt)
        : size(n), labels(std::move(lab)) {
        if (size < 1) throw value_error("ground set must have at least one atom");
        if (labels) {
            if (labels->size() != size)
                throw structural_error("labels: expected " + std::to_string(size) + " entries");
            auto sorted = *labels;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw structural_error("labels: duplicates are not allowed");
        }
    }

    bool operator==(const GroundSet& o) const { return size == o.size && labels == o.labels; }
};

// A member of the set algebra. May be zero in intermediate computations;
// a Family only admits nonzero elements (the B+ constraint).
struct Element {
    AtomSet atoms;

    Element() = default;
    explicit Element(AtomSet a) : atoms(std::move(a)) {}
    static Element of(std::size_t universe, std::initializer_list<std::size_t> idx) {
        return Element(AtomSet::of(universe, idx));
    }

    std::size_t universe() const { return atoms.universe(); }
    bool is_zero() const { return atoms.empty(); }
    bool operator==(const Element& o) const { return atoms == o.atoms; }
    bool operator!=(const Element& o) const { return atoms != o.atoms; }
    bool operator<(const Element& o) const { return atoms < o.atoms; }
};

inline Element meet(const Element& a, const Element& b) { return Element(a.atoms & b.atoms); }
inline Element join(const Element& a, const Element& b) { return Element(a.atoms | b.atoms); }
inline Element complement(const Element& a) { return Element(~a.atoms); }

// A finite list of nonzero elements over one ground set; the object whose
// intersection number is computed. Duplicates are preserved unless dedup is
// requested at construction (intersection numbers are duplicate-invariant,
// cover searches are faster deduplicated).
struct Family {
    GroundSet ground;
    std::vector<Element> elements;
    bool dedup = false;

    Family(GroundSet g, std::vector<Element> elems, bool merge_duplicates = false)
        : ground(std::move(g)), dedup(merge_duplicates) {
        for (const auto& e : elems) {
            if (e.universe() != ground.size)
                throw structural_error("family element does not live on the family's ground");
            if (e.is_zero())
                throw value_error("family element is zero; families live in B+");
        }
        if (merge_duplicates) {
            std::vector<Element> kept;
            for (auto& e : elems)
                if (std::find(kept.begin(), kept.end(), e) == kept.end())
                    kept.push_back(std::move(e));
            elements = std::move(kept);
        } else {
            elements = std::move(elems);
        }
    }

    std::size_t size() const { return elements.size(); }
    bool empty() const { return elements.empty(); }
    const Element& operator[](std::size_t i) const { return elements.at(i); }
};

// True iff all pairs of distinct positions have zero meet.
inline bool is_antichain(const Family& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            if (f[i].atoms.intersects(f[j].atoms)) return false;
    return true;
}

enum class Centered { yes, no, undecided };

struct CenteredReport {
    Centered status = Centered::undecided;
    // Nonempty global intersection implies centered outright.
    bool global_intersection_nonempty = false;
    // When status == no: indices of a subfamily with empty meet.
    std::vector<std::size_t> witness;

    bool decided() const { return status != Centered::undecided; }
    bool value() const {
        if (!decided()) throw value_error("centeredness undecided");
        return status == Centered::yes;
    }
};

struct CenteredOptions {
    // Exhaustive smallest-witness search for families up to this size;
    // larger families get a greedy (still exact) witness.
    std::size_t max_exhaustive = 20;
};

// Decides whether every subfamily has nonzero meet. In a finite set algebra
// the meet of a subfamily is its literal intersection, so the global
// intersection decides the question: nonempty implies centered, empty makes
// the whole family itself a witness. The three-valued status is kept for API
// stability; set-algebra instances always come back decided.
inline CenteredReport is_centered(const Family& f, const CenteredOptions& opts = {}) {
    CenteredReport rep;
    if (f.empty()) {
        rep.status = Centered::yes;
        rep.global_intersection_nonempty = true; // meet of nothing is the top element
        return rep;
    }
    AtomSet common = f[0].atoms;
    for (std::size_t i = 1; i < f.size(); ++i) common &= f[i].atoms;
    rep.global_intersection_nonempty = !common.empty();
    if (rep.global_intersection_nonempty) {
        rep.status = Centered::yes;
        return rep;
    }
    rep.status = Centered::no;
    if (f.size() <= opts.max_exhaustive) {
        // Smallest witness, found by size-ordered subfamily enumeration.
        std::vector<std::size_t> pick;
        for (std::size_t k = 2; k <= f.size(); ++k) {
            pick.assign(k, 0);
            // lexicographically first combination of size k
            for (std::size_t i = 0; i < k; ++i) pick[i] = i;
            while (true) {
                AtomSet m = f[pick[0]].atoms;
                for (std::size_t i = 1; i < k; ++i) m &= f[pick[i]].atoms;
                if (m.empty()) {
                    rep.witness = pick;
                    return rep;
                }
                // next combination
                std::size_t i = k;
                while (i > 0 && pick[i - 1] == f.size() - k + (i - 1)) --i;
                if (i == 0) break;
                ++pick[i - 1];
                for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
    }
    // Greedy witness: keep elements that strictly shrink the running
    // intersection; at most ground.size + 1 of them.
    AtomSet run = f[0].atoms;
    rep.witness = {0};
    for (std::size_t i = 1; i < f.size() && !run.empty(); ++i) {
        AtomSet next = run & f[i].atoms;
        if (next.count() < run.count()) {
            run = next;
            rep.witness.push_back(i);
        }
    }
    return rep;
}

// Finite analogue of quotienting by a (necessarily principal) ideal: the
// algebra on the atoms surviving outside the union of the generators, with
// the projection sending each element to its trace.
struct Quotient {
    GroundSet ground;                       // surviving atoms, reindexed
    std::vector<std::size_t> surviving;     // new index -> old atom index

    Element project(const Element& e) const {
        AtomSet t(ground.size);
        for (std::size_t i = 0; i < surviving.size(); ++i)
            if (e.atoms.test(surviving[i])) t.add(i);
        return Element(std::move(t));
    }

    // Zero traces are dropped: the quotient family again lives in B+.
    Family project(const Family& f) const {
        std::vector<Element> elems;
        for (const auto& e : f.elements) {
            Element t = project(e);
            if (!t.is_zero()) elems.push_back(std::move(t));
        }
        return Family(ground, std::move(elems));
    }
};

inline Quotient quotient_by_ideal(const GroundSet& ground, const std::vector<Element>& generators) {
    AtomSet removed(ground.size);
    for (const auto& g : generators) {
        if (g.universe() != ground.size)
            throw structural_error("ideal generator does not live on the given ground");
        removed |= g.atoms;
    }
    if (removed.count() == ground.size)
        throw value_error("improper ideal: generators cover the whole ground");
    std::vector<std::size_t> surviving;
    std::optional<std::vector<std::string>> labels;
    if (ground.labels) labels.emplace();
    for (std::size_t a = 0; a < ground.size; ++a) {
        if (!removed.test(a)) {
            surviving.push_back(a);
            if (labels) labels->push_back((*ground.labels)[a]);
        }
    }
    return Quotient{GroundSet(surviving.size(), std::move(labels)), std::move(surviving)};
}

} // namespace kelleyscope
