#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bridgelab {

/// Thrown for invalid configuration documents; carries the offending key
/// (empty when the document itself is malformed).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Physical constants of the structure, SI units throughout.
///
/// Bending and torsional stiffness are kept as the products E*I and G*K
/// because the equations of motion only see the products.
struct BridgeParams {
  double L = 0;   ///< deck length between the towers (m)
  double ell = 0; ///< half deck width (m)
  double M = 0;   ///< deck linear mass density (kg/m)
  double EI = 0;  ///< deck bending stiffness (N m^2)
  double GK = 0;  ///< deck torsional stiffness (N m^2)
  double m = 0;   ///< cable linear mass density (kg/m)
  double H0 = 0;  ///< horizontal cable tension (N)
  double Lc = 0;  ///< cable length (m)
  double s0 = 0;  ///< tower height above the deck, i.e. longest hanger (m)
  double A = 0;   ///< cable cross-section area (m^2)
  double E = 0;   ///< cable Young modulus (Pa)
  double g = 0;   ///< gravitational acceleration (m/s^2)

  /// Cable axial stiffness over length, the coefficient of every nonlocal term.
  double axial_coefficient() const { return A * E / Lc; }

  bool operator==(const BridgeParams&) const = default;
};

/// Constants of the collapsed Tacoma Narrows Bridge.
BridgeParams default_tnb();

/// Checks the type invariants; throws ConfigError naming the first bad key.
/// Zero cable mass is accepted (massless-cable fixtures), negative is not.
void validate(const BridgeParams& p);

/// Parses a flat JSON object whose keys are the field names of BridgeParams.
/// Missing keys take the TNB defaults; unknown keys are rejected.
BridgeParams load_config(std::string_view text);

/// Canonical JSON text, the inverse of load_config.
std::string to_config_text(const BridgeParams& p);

/// Short deterministic hash of the canonical text, used to tie persisted
/// branches to the parameters that produced them.
std::string fingerprint(const BridgeParams& p);

}  // namespace bridgelab
