#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "kelleyscope/errors.hpp"

namespace kelleyscope {

// A subset of the atoms of a finite ground set, i.e. one element of the set
// algebra P([0,n)). Backed by a bit-vector: one machine word up to 64 atoms,
// extensible above that.
class AtomSet {
public:
    AtomSet() = default;
    explicit AtomSet(std::size_t universe) : bits_(universe) {}

    static AtomSet of(std::size_t universe, std::initializer_list<std::size_t> atoms) {
        AtomSet s(universe);
        for (std::size_t a : atoms) s.add(a);
        return s;
    }
    static AtomSet of(std::size_t universe, const std::vector<std::size_t>& atoms) {
        AtomSet s(universe);
        for (std::size_t a : atoms) s.add(a);
        return s;
    }
    static AtomSet full(std::size_t universe) {
        AtomSet s(universe);
        s.bits_.set();
        return s;
    }

    std::size_t universe() const { return bits_.size(); }
    std::size_t count() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }
    bool test(std::size_t atom) const { return atom < bits_.size() && bits_.test(atom); }

    void add(std::size_t atom) {
        if (atom >= bits_.size()) throw structural_error("atom index out of range");
        bits_.set(atom);
    }

    AtomSet operator&(const AtomSet& o) const { return AtomSet(bits_ & check(o).bits_); }
    AtomSet operator|(const AtomSet& o) const { return AtomSet(bits_ | check(o).bits_); }
    AtomSet operator-(const AtomSet& o) const { return AtomSet(bits_ - check(o).bits_); }
    AtomSet operator~() const { return AtomSet(~bits_); }
    AtomSet& operator&=(const AtomSet& o) { bits_ &= check(o).bits_; return *this; }
    AtomSet& operator|=(const AtomSet& o) { bits_ |= check(o).bits_; return *this; }

    bool operator==(const AtomSet& o) const { return bits_ == o.bits_; }
    bool operator!=(const AtomSet& o) const { return bits_ != o.bits_; }
    bool operator<(const AtomSet& o) const { return bits_ < o.bits_; } // canonical order
    bool is_subset_of(const AtomSet& o) const { return bits_.is_subset_of(check(o).bits_); }
    bool intersects(const AtomSet& o) const { return bits_.intersects(check(o).bits_); }

    std::vector<std::size_t> atoms() const {
        std::vector<std::size_t> out;
        out.reserve(bits_.count());
        for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i))
            out.push_back(i);
        return out;
    }

    template <typename Fn>
    void for_each_atom(Fn&& fn) const {
        for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i))
            fn(static_cast<std::size_t>(i));
    }

private:
    explicit AtomSet(boost::dynamic_bitset<> b) : bits_(std::move(b)) {}
    const AtomSet& check(const AtomSet& o) const {
        if (o.bits_.size() != bits_.size())
            throw structural_error("mismatched grounds: " + std::to_string(bits_.size()) +
                                   " vs " + std::to_string(o.bits_.size()) + " atoms");
        return o;
    }

    boost::dynamic_bitset<> bits_;
};

} // namespace kelleyscope
