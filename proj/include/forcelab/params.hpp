#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forcelab/common.hpp"
#include "forcelab/magnitude.hpp"

namespace forcelab::params {

/// Either an exact natural or bounds lo <= log2^(depth)(v) <= hi.
///
/// depth 1 is the ordinary log2 range. Deeper levels appear from h = 3 on,
/// where log2 of the value no longer has a representable binary expansion.
struct ParamValue {
  std::optional<Natural> exact;
  unsigned depth = 1;
  Rational lo;
  Rational hi;

  static ParamValue of(const Natural& n);
  bool is_exact() const { return exact.has_value(); }
  /// Enclosure usable for further interval arithmetic.
  Magnitude magnitude(mpfr_prec_t prec) const;
};

struct TowerConfig {
  unsigned hMax = 2;
  unsigned long exactBitThreshold = 1UL << 20;
  unsigned precisionBits = 256;
  /// Deepest iterated-log level accepted before reporting overflow.
  unsigned maxDepth = 12;
};

struct Level {
  ParamValue levelCount, rho, pi, a, bigM, b;
  /// True when rho(h) was taken from |T* cap omega^h| rather than h + 2.
  bool rhoIsLevelCount = false;
};

class ParamTower {
 public:
  unsigned maxHeight() const { return static_cast<unsigned>(levels_.size()) - 1; }
  const Level& level(unsigned h) const { return levels_.at(h); }
  const TowerConfig& config() const { return config_; }

  /// Recompute at a higher precision; every log range is intersected with the
  /// current one, so refined ranges are nested in the originals.
  ParamTower refined(unsigned precisionBits) const;

 private:
  friend ParamTower tower(const TowerConfig&);
  TowerConfig config_;
  std::vector<Level> levels_;
};

ParamTower tower(const TowerConfig& config);
ParamTower tower(unsigned hMax, unsigned long exactBitThreshold = 1UL << 20);

enum class CheckMethod { exact, interval, refined_interval, symbolic };
std::string method_name(CheckMethod m);

struct IdentityCheck {
  unsigned h = 0;
  std::string name;
  bool passed = false;
  CheckMethod method = CheckMethod::exact;
};

struct VerifyOptions {
  /// Allow the exponent-structure argument when intervals cannot decide.
  bool allowSymbolic = true;
};

/// Checks pi = b^(rho^h), a > pi^h (h >= 1), pi > h^2 and rho >= h + 2.
std::vector<IdentityCheck> verify_tower_identities(const ParamTower& t,
                                                   const VerifyOptions& opts = {});

/// rho(h)^e, the slot bound for S_e at level h. Requires e <= h.
ParamValue slalom_capacity(const ParamTower& t, unsigned h, unsigned e);

/// prod_{h=k+1}^{H} (1 - 1/(h+1)^3); requires H > k.
Rational tail_product_lower(unsigned long k, unsigned long H);

}  // namespace forcelab::params
