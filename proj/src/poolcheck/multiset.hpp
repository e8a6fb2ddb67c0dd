// multiset.hpp -- finitely supported multisets with the componentwise order.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>

namespace poolcheck {

template <typename T>
class Multiset {
public:
    Multiset() = default;

    uint64_t count(const T& x) const {
        auto it = counts_.find(x);
        return it == counts_.end() ? 0 : it->second;
    }

    void add(const T& x, uint64_t n = 1) {
        if (n == 0) return;
        counts_[x] += n;
    }

    void remove(const T& x, uint64_t n = 1) {
        auto it = counts_.find(x);
        if (it == counts_.end() || it->second < n)
            throw std::underflow_error("Multiset::remove: count underflow");
        it->second -= n;
        if (it->second == 0) counts_.erase(it);
    }

    uint64_t size() const {
        uint64_t s = 0;
        for (auto& [k, v] : counts_) s += v;
        return s;
    }

    bool empty() const { return counts_.empty(); }

    // componentwise order
    bool leq(const Multiset& o) const {
        for (auto& [k, v] : counts_)
            if (v > o.count(k)) return false;
        return true;
    }

    Multiset operator+(const Multiset& o) const {
        Multiset r = *this;
        for (auto& [k, v] : o.counts_) r.counts_[k] += v;
        return r;
    }

    Multiset operator-(const Multiset& o) const {
        Multiset r = *this;
        for (auto& [k, v] : o.counts_) r.remove(k, v);
        return r;
    }

    bool operator==(const Multiset& o) const { return counts_ == o.counts_; }
    bool operator<(const Multiset& o) const { return counts_ < o.counts_; }

    const std::map<T, uint64_t>& entries() const { return counts_; }

private:
    std::map<T, uint64_t> counts_;
};

}  // namespace poolcheck
