#include "chaomarket/bimap.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include "chaomarket/error.hpp"

namespace chaomarket {

BimapParams::BimapParams(double lambda_a, double lambda_b) : lambda_a_(lambda_a), lambda_b_(lambda_b) {
  if (!in_chaotic_interval(lambda_a) || !in_chaotic_interval(lambda_b)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bimap parameters (lambda_a=" << lambda_a << ", lambda_b=" << lambda_b
        << ") outside the chaotic interval [" << kChaoticLambdaMin << ", " << kChaoticLambdaMax << "]";
    throw ValidationError(msg.str());
  }
}

BimapParams BimapParams::unchecked(double lambda_a, double lambda_b) noexcept {
  return BimapParams(lambda_a, lambda_b, UncheckedTag{});
}

namespace {

[[noreturn]] void throw_escape(std::uint64_t iteration, const BimapState& s) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "bimap left the unit square at iteration " << iteration << ": (" << s.x << ", " << s.y << ")";
  throw DomainEscapeError(msg.str(), iteration, s.x, s.y);
}

}  // namespace

BimapState bimap_step(const BimapState& state, const BimapParams& params) {
  if (!state.in_unit_square()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bimap state (" << state.x << ", " << state.y << ") is outside the unit square";
    throw ValidationError(msg.str());
  }
  const BimapState next = bimap_apply(state, params);
  if (!next.in_unit_square()) throw_escape(1, next);
  return next;
}

Trajectory trajectory(const BimapState& initial, const BimapParams& params, std::uint64_t burn_in,
                      std::size_t samples) {
  if (samples < 1) throw ValidationError("trajectory needs at least one sample");
  if (!initial.in_unit_square()) throw ValidationError("trajectory initial state is outside the unit square");

  BimapState s = initial;
  std::uint64_t iteration = 0;
  for (std::uint64_t k = 0; k < burn_in; ++k) {
    s = bimap_apply(s, params);
    ++iteration;
    if (!s.in_unit_square()) throw_escape(iteration, s);
  }

  Trajectory out;
  out.burn_in_discarded = burn_in;
  out.points.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    s = bimap_apply(s, params);
    ++iteration;
    if (!s.in_unit_square()) throw_escape(iteration, s);
    out.points.push_back(s);
  }
  return out;
}

std::vector<double> x_series(const Trajectory& t) {
  std::vector<double> out;
  out.reserve(t.points.size());
  for (const auto& p : t.points) out.push_back(p.x);
  return out;
}

std::vector<double> y_series(const Trajectory& t) {
  std::vector<double> out;
  out.reserve(t.points.size());
  for (const auto& p : t.points) out.push_back(p.y);
  return out;
}

namespace {

using cplx = std::complex<double>;

// In-place iterative radix-2 FFT, forward sign convention exp(-2 pi i k n / L).
void fft_radix2(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cplx> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * twiddle[k * stride];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

std::vector<cplx> dft_direct(std::span<const double> x, std::size_t bins) {
  const std::size_t n = x.size();
  std::vector<cplx> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<cplx> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    cplx acc{};
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) {
      acc += x[t] * twiddle[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

Spectrum power_spectrum(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) throw ValidationError("power spectrum needs a series of length >= 2");

  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centered(series.begin(), series.end());
  for (double& v : centered) v -= mean;

  const std::size_t bins = n / 2 + 1;
  std::vector<cplx> coeffs;
  if (std::has_single_bit(n)) {
    coeffs.assign(centered.begin(), centered.end());
    fft_radix2(coeffs);
    coeffs.resize(bins);
  } else {
    coeffs = dft_direct(centered, bins);
  }

  Spectrum out;
  out.frequencies.resize(bins);
  out.magnitudes.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out.frequencies[k] = static_cast<double>(k) / static_cast<double>(n);
    out.magnitudes[k] = std::abs(coeffs[k]);
  }
  return out;
}

SpectralPeak find_spectral_peak(const Spectrum& spectrum) {
  if (spectrum.frequencies.size() != spectrum.magnitudes.size())
    throw ValidationError("spectrum frequency and magnitude lengths differ");
  // Frequencies are ascending, so the first strict maximum is the lowest.
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    if (spectrum.frequencies[k] == 0.0) continue;
    if (!best || spectrum.magnitudes[k] > spectrum.magnitudes[*best]) best = k;
  }
  if (!best) throw ValidationError("spectrum has no non-zero frequency bin");
  return {spectrum.frequencies[*best], spectrum.magnitudes[*best]};
}

}  // namespace chaomarket
