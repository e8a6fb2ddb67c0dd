#include "doctest.h"
#include "poolcheck/bignum.hpp"

using poolcheck::Nat;

TEST_CASE("nat arithmetic round trips") {
    CHECK(Nat(0).to_decimal() == "0");
    CHECK(Nat(12345).to_decimal() == "12345");
    CHECK(Nat::from_decimal("340282366920938463463374607431768211456").to_decimal() ==
          "340282366920938463463374607431768211456");
    CHECK(Nat::from_binary("101010").to_u64() == 42);
    CHECK(Nat(42).to_binary() == "101010");
}

TEST_CASE("nat ops") {
    Nat a = Nat::from_decimal("18446744073709551615");  // 2^64-1
    Nat b = a + Nat(1);
    CHECK(b.to_decimal() == "18446744073709551616");
    CHECK((b - Nat(1)) == a);
    CHECK((Nat(7) * Nat(6)).to_u64() == 42);
    CHECK(Nat::pow(Nat(2), 100).to_decimal() == "1267650600228229401496703205376");
    CHECK(Nat(5) < Nat(7));
    CHECK(Nat(7) <= Nat(7));
    CHECK(Nat(100).bit_length() == 7);
}
