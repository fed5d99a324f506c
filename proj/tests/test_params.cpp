#include <doctest.h>

#include <cmath>

#include "bridgelab/params.hpp"

using namespace bridgelab;

TEST_CASE("default constants of the collapsed bridge") {
  const BridgeParams p = default_tnb();
  CHECK(p.L == 853.44);
  CHECK(p.g == doctest::Approx(9.81));
  CHECK(p.Lc > p.L);
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("configuration text round-trips bit-identically") {
  const BridgeParams p = default_tnb();
  const BridgeParams q = load_config(to_config_text(p));
  CHECK(p == q);
  CHECK(to_config_text(q) == to_config_text(p));
  CHECK(fingerprint(q) == fingerprint(p));
}

TEST_CASE("missing keys take the defaults") {
  const BridgeParams p = load_config(R"({"H0": 2.0e7})");
  CHECK(p.H0 == 2.0e7);
  CHECK(p.L == default_tnb().L);
  CHECK(fingerprint(p) != fingerprint(default_tnb()));
  CHECK(load_config("") == default_tnb());
}

TEST_CASE("invalid documents are rejected with the offending key") {
  auto key_of = [](const char* text) {
    try {
      load_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<accepted>");
  };
  CHECK(key_of(R"({"H0": -1})") == "H0");
  CHECK(key_of(R"({"EI": 0})") == "EI");
  CHECK(key_of(R"({"Lc": 800})") == "Lc");
  CHECK(key_of(R"({"bogus": 1})") == "bogus");
  CHECK(key_of(R"({"M": "heavy"})") == "M");
  CHECK_THROWS_AS(load_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(load_config("{not json"), ConfigError);
}

TEST_CASE("massless cable is admissible, negative mass is not") {
  CHECK_NOTHROW(load_config(R"({"m": 0})"));
  CHECK_THROWS_AS(load_config(R"({"m": -1})"), ConfigError);
}
