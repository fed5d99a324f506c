#include "bridgelab/params.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <utility>

#include <json.hpp>

namespace bridgelab {

namespace {

using Field = std::pair<const char*, double BridgeParams::*>;

constexpr std::array<Field, 12> kFields{{
    {"L", &BridgeParams::L},
    {"ell", &BridgeParams::ell},
    {"M", &BridgeParams::M},
    {"EI", &BridgeParams::EI},
    {"GK", &BridgeParams::GK},
    {"m", &BridgeParams::m},
    {"H0", &BridgeParams::H0},
    {"Lc", &BridgeParams::Lc},
    {"s0", &BridgeParams::s0},
    {"A", &BridgeParams::A},
    {"E", &BridgeParams::E},
    {"g", &BridgeParams::g},
}};

}  // namespace

BridgeParams default_tnb() {
  BridgeParams p;
  p.L = 853.44;
  p.ell = 6.0;
  p.M = 7198.0;
  p.EI = 210e9 * 0.15;
  p.GK = 81e9 * 6.44e-6;
  p.m = 981.0;
  p.H0 = 5.83e7;
  p.Lc = 868.62;
  p.s0 = 72.0;
  p.A = 0.1228;
  p.E = 210e9;
  p.g = 9.81;
  return p;
}

void validate(const BridgeParams& p) {
  for (const auto& [name, member] : kFields) {
    const double value = p.*member;
    if (!std::isfinite(value)) {
      throw ConfigError(name, std::string("parameter '") + name + "' is not finite");
    }
    const bool may_be_zero = member == &BridgeParams::m;
    if (value < 0.0 || (value == 0.0 && !may_be_zero)) {
      throw ConfigError(name, std::string("parameter '") + name + "' must be positive");
    }
  }
  if (!(2.0 * p.ell < p.L / 10.0)) {
    throw ConfigError("ell", "deck too wide: need 2*ell < L/10");
  }
  if (!(p.Lc > p.L)) {
    throw ConfigError("Lc", "cable length Lc must exceed the span L");
  }
}

BridgeParams load_config(std::string_view text) {
  BridgeParams p = default_tnb();
  nlohmann::json doc;
  try {
    doc = text.find_first_not_of(" \t\r\n") == std::string_view::npos
              ? nlohmann::json::object()
              : nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("", "config must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    double BridgeParams::*member = nullptr;
    for (const auto& [name, m] : kFields) {
      if (key == name) member = m;
    }
    if (member == nullptr) {
      throw ConfigError(key, "unknown config key '" + key + "'");
    }
    if (!value.is_number()) {
      throw ConfigError(key, "config key '" + key + "' must be a number");
    }
    p.*member = value.get<double>();
  }
  validate(p);
  return p;
}

std::string to_config_text(const BridgeParams& p) {
  // ordered_json keeps the field order stable, which the fingerprint relies on
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [name, member] : kFields) doc[name] = p.*member;
  return doc.dump(2);
}

std::string fingerprint(const BridgeParams& p) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a
  for (unsigned char c : to_config_text(p)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bridgelab
