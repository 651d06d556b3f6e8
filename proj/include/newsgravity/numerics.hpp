#ifndef NEWSGRAVITY_NUMERICS_HPP
#define NEWSGRAVITY_NUMERICS_HPP

#include <cstdint>
#include <string>

namespace newsgravity {

/// First derivative of lgamma. Accurate to ~1e-12 for x > 0.
double digamma(double x);

/// Second derivative of lgamma. Accurate to ~1e-12 for x > 0.
double trigamma(double x);

/// Standard normal CDF.
double norm_cdf(double x);

/// Two-sided normal p-value for a z statistic.
double two_sided_p(double z);

/// Shortest round-trip decimal representation of a double ('.' separator,
/// locale independent). NaN prints as "nan", infinities as "inf"/"-inf".
std::string format_double(double v);

/// FNV-1a 64-bit running hash.
class Fnv1a {
public:
  void update(const void* data, std::size_t n);
  void update(const std::string& s) { update(s.data(), s.size()); }
  void update(double v) { update(&v, sizeof(v)); }
  void update(std::int64_t v) { update(&v, sizeof(v)); }
  std::uint64_t value() const { return state_; }
  std::string hex() const;

private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace newsgravity

#endif
