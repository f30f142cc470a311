#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace chaomarket {

// Coupled logistic bimap on the unit square:
//
//   x' = lambda_a (3y + 1) x (1 - x)
//   y' = lambda_b (3x + 1) y (1 - y)
//
// Both coordinates are computed from the previous state (simultaneous update).
// The map has a chaotic attractor for lambda_a, lambda_b in [1.032, 1.0843]
// and is symmetric about y = x when lambda_a == lambda_b.

inline constexpr double kChaoticLambdaMin = 1.032;
inline constexpr double kChaoticLambdaMax = 1.0843;

class BimapParams {
 public:
  /// Validated constructor. Throws ValidationError outside the chaotic interval.
  BimapParams(double lambda_a, double lambda_b);

  /// Skips the interval check. Meant for exploring the map outside the
  /// chaotic regime; escapes are still reported by the dynamics.
  static BimapParams unchecked(double lambda_a, double lambda_b) noexcept;

  static bool in_chaotic_interval(double lambda) noexcept {
    return lambda >= kChaoticLambdaMin && lambda <= kChaoticLambdaMax;
  }

  double lambda_a() const noexcept { return lambda_a_; }
  double lambda_b() const noexcept { return lambda_b_; }
  bool is_checked() const noexcept { return checked_; }
  bool symmetric() const noexcept { return lambda_a_ == lambda_b_; }

  friend bool operator==(const BimapParams&, const BimapParams&) = default;

 private:
  struct UncheckedTag {};
  BimapParams(double a, double b, UncheckedTag) noexcept : lambda_a_(a), lambda_b_(b), checked_(false) {}

  double lambda_a_;
  double lambda_b_;
  bool checked_ = true;
};

struct BimapState {
  double x = 0.0;
  double y = 0.0;

  bool in_unit_square() const noexcept { return x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0; }

  friend bool operator==(const BimapState&, const BimapState&) = default;
};

/// One application of the map. Unchecked: callers that need the
/// containment guarantee use `bimap_step`.
inline BimapState bimap_apply(const BimapState& s, const BimapParams& p) noexcept {
  return {p.lambda_a() * (3.0 * s.y + 1.0) * s.x * (1.0 - s.x),
          p.lambda_b() * (3.0 * s.x + 1.0) * s.y * (1.0 - s.y)};
}

/// One checked step. Throws ValidationError if `state` is outside the unit
/// square and DomainEscapeError (iteration 1) if the image is.
BimapState bimap_step(const BimapState& state, const BimapParams& params);

struct Trajectory {
  std::vector<BimapState> points;
  std::uint64_t burn_in_discarded = 0;
};

/// Discards `burn_in` iterates of `initial`, then records the next `samples`.
/// With burn_in == 0 the first recorded point is the first iterate, not
/// `initial` itself.
Trajectory trajectory(const BimapState& initial, const BimapParams& params, std::uint64_t burn_in,
                      std::size_t samples);

/// Convenience accessors for spectral analysis of one coordinate.
std::vector<double> x_series(const Trajectory& t);
std::vector<double> y_series(const Trajectory& t);

struct Spectrum {
  std::vector<double> frequencies;  // k / L, k = 0 .. floor(L/2)
  std::vector<double> magnitudes;   // |DFT| of the mean-removed series, unnormalized
};

/// Magnitude spectrum of the mean-removed series. Accepts any length >= 2;
/// power-of-two lengths take a radix-2 FFT, others a direct DFT.
Spectrum power_spectrum(std::span<const double> series);

struct SpectralPeak {
  double frequency = 0.0;
  double magnitude = 0.0;
};

/// Largest-magnitude bin excluding frequency 0. Ties go to the lowest
/// frequency. Requires at least one non-DC bin.
SpectralPeak find_spectral_peak(const Spectrum& spectrum);

}  // namespace chaomarket
