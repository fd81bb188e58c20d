#pragma once

#include "coxdr/coxeter.hpp"

#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace testing_support {

// Quotients are immutable, so tests share one instance per pair.
inline coxdr::QuotientPtr quotient(coxdr::LieType t, int rank, int parabolic) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, coxdr::QuotientPtr> cache;
    std::lock_guard lock(mu);
    auto key = std::make_tuple(static_cast<int>(t), rank, parabolic);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, coxdr::build_quotient({t, rank, parabolic})).first;
    return it->second;
}

inline coxdr::RationalVector vec(std::initializer_list<long> xs) {
    coxdr::RationalVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

inline std::size_t root_index(const coxdr::MinusculeQuotient& q, const coxdr::RationalVector& r) {
    for (std::size_t i = 0; i < q.roots().size(); ++i)
        if (q.roots()[i] == r)
            return i;
    throw std::logic_error("root not found");
}

inline std::size_t vertex(const coxdr::MinusculeQuotient& q, const std::string& label) {
    auto v = q.index_of(coxdr::parse_label(label));
    if (!v)
        throw std::logic_error("vertex not found: " + label);
    return *v;
}

} // namespace testing_support
