#include "poolcheck/bignum.hpp"

#include <algorithm>
#include <stdexcept>

namespace poolcheck {

Nat::Nat(uint64_t v) {
    if (v) {
        limbs_.push_back(static_cast<uint32_t>(v));
        if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
    }
}

void Nat::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

uint64_t Nat::to_u64() const {
    if (limbs_.size() > 2) throw std::overflow_error("Nat::to_u64: value too large");
    uint64_t v = 0;
    if (limbs_.size() > 1) v = static_cast<uint64_t>(limbs_[1]) << 32;
    if (!limbs_.empty()) v |= limbs_[0];
    return v;
}

size_t Nat::bit_length() const {
    if (limbs_.empty()) return 0;
    uint32_t top = limbs_.back();
    size_t bits = 0;
    while (top) { ++bits; top >>= 1; }
    return (limbs_.size() - 1) * 32 + bits;
}

bool Nat::bit(size_t i) const {
    size_t limb = i / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 32)) & 1u;
}

Nat& Nat::operator+=(const Nat& o) {
    uint64_t carry = 0;
    size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    for (size_t i = 0; i < n; ++i) {
        uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
        limbs_[i] = static_cast<uint32_t>(s);
        carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
}

Nat& Nat::operator-=(const Nat& o) {
    if (cmp(o) < 0) throw std::underflow_error("Nat subtraction underflow");
    int64_t borrow = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        int64_t d = static_cast<int64_t>(limbs_[i]) - borrow -
                    (i < o.limbs_.size() ? o.limbs_[i] : 0);
        borrow = d < 0;
        if (d < 0) d += (int64_t(1) << 32);
        limbs_[i] = static_cast<uint32_t>(d);
    }
    trim();
    return *this;
}

Nat operator*(const Nat& a, const Nat& b) {
    Nat r;
    if (a.limbs_.empty() || b.limbs_.empty()) return r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < b.limbs_.size(); ++j) {
            uint64_t cur = r.limbs_[i + j] +
                           static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] + carry;
            r.limbs_[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        size_t k = i + b.limbs_.size();
        while (carry) {
            uint64_t cur = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    r.trim();
    return r;
}

Nat Nat::pow(const Nat& base, uint64_t exp) {
    Nat result(1);
    Nat b = base;
    while (exp) {
        if (exp & 1) result = result * b;
        exp >>= 1;
        if (exp) b = b * b;
    }
    return result;
}

int Nat::cmp(const Nat& o) const {
    if (limbs_.size() != o.limbs_.size())
        return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    }
    return 0;
}

Nat Nat::from_binary(const std::string& bits) {
    Nat r;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("Nat::from_binary: bad digit");
        // r = r*2 + bit
        uint64_t carry = (c == '1') ? 1 : 0;
        for (auto& limb : r.limbs_) {
            uint64_t cur = (static_cast<uint64_t>(limb) << 1) | carry;
            limb = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    }
    return r;
}

std::string Nat::to_binary() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = bit_length(); i-- > 0;) s.push_back(bit(i) ? '1' : '0');
    return s;
}

Nat Nat::from_decimal(const std::string& s) {
    Nat r;
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("Nat::from_decimal: bad digit");
        r = r * Nat(10) + Nat(static_cast<uint64_t>(c - '0'));
    }
    return r;
}

std::string Nat::to_decimal() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> work = limbs_;
    std::string digits;
    while (!work.empty()) {
        uint64_t rem = 0;
        for (size_t i = work.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | work[i];
            work[i] = static_cast<uint32_t>(cur / 10);
            rem = cur % 10;
        }
        digits.push_back(static_cast<char>('0' + rem));
        while (!work.empty() && work.back() == 0) work.pop_back();
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

}  // namespace poolcheck
