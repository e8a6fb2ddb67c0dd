// bignum.hpp -- unsigned arbitrary-precision naturals for binary-encoded
// parameters (stack bounds h, context bounds K, tape lengths M).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace poolcheck {

class Nat {
public:
    Nat() = default;
    Nat(uint64_t v);
    static Nat from_decimal(const std::string& s);
    static Nat from_binary(const std::string& bits);  // MSB first

    bool is_zero() const { return limbs_.empty(); }
    bool fits_u64() const { return limbs_.size() <= 1; }
    uint64_t to_u64() const;  // throws if too large

    size_t bit_length() const;
    bool bit(size_t i) const;

    std::string to_decimal() const;
    std::string to_binary() const;  // MSB first, "0" for zero

    Nat& operator+=(const Nat& o);
    Nat& operator-=(const Nat& o);  // requires *this >= o
    friend Nat operator+(Nat a, const Nat& b) { return a += b; }
    friend Nat operator-(Nat a, const Nat& b) { return a -= b; }
    friend Nat operator*(const Nat& a, const Nat& b);

    static Nat pow(const Nat& base, uint64_t exp);

    int cmp(const Nat& o) const;
    friend bool operator==(const Nat& a, const Nat& b) { return a.cmp(b) == 0; }
    friend bool operator!=(const Nat& a, const Nat& b) { return a.cmp(b) != 0; }
    friend bool operator<(const Nat& a, const Nat& b) { return a.cmp(b) < 0; }
    friend bool operator<=(const Nat& a, const Nat& b) { return a.cmp(b) <= 0; }
    friend bool operator>(const Nat& a, const Nat& b) { return a.cmp(b) > 0; }
    friend bool operator>=(const Nat& a, const Nat& b) { return a.cmp(b) >= 0; }

private:
    // base 2^32 little-endian, no trailing zero limbs
    std::vector<uint32_t> limbs_;
    void trim();
};

}  // namespace poolcheck
