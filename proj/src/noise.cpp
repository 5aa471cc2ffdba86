#include "frachp/noise.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "frachp/output.hpp"

namespace frachp {

namespace {

constexpr std::uint64_t kSeedSalt = 0x6A09E667F3BCC909ULL;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSubstreamSalt = 0xBB67AE8584CAA73BULL;
constexpr std::uint64_t kSubstreamStride = 0xD1B54A32D192ED03ULL;

double poly(const double* c, int n, double r) {
  double acc = c[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    acc = acc * r + c[i];
  }
  return acc;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterStream::CounterStream(std::uint64_t seed) noexcept : key_(mix64(seed ^ kSeedSalt)) {}

std::uint64_t CounterStream::bits(std::uint64_t index) const noexcept {
  return mix64(key_ + (index + 1) * kGolden);
}

double CounterStream::uniform(std::uint64_t index) const noexcept {
  return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1p-53;
}

double CounterStream::normal(std::uint64_t index) const noexcept {
  return inverse_normal_cdf(uniform(index));
}

double inverse_normal_cdf(double u) noexcept {
  static constexpr double a[8] = {3.387132872796366608,   133.14166789178437745,
                                  1971.5909503065514427,  13731.693765509461125,
                                  45921.953931549871457,  67265.770927008700853,
                                  33430.575583588128105,  2509.0809287301226727};
  static constexpr double b[8] = {1.0,                    42.313330701600911252,
                                  687.1870074920579083,   5394.1960214247511077,
                                  21213.794301586595867,  39307.89580009271061,
                                  28729.085735721942674,  5226.495278852545925};
  static constexpr double c[8] = {1.42343711074968357734,  4.6303378461565452959,
                                  5.7694972214606914055,   3.64784832476320460504,
                                  1.27045825245236838258,  0.24178072517745061177,
                                  0.0227238449892691845833, 7.7454501427834140764e-4};
  static constexpr double d[8] = {1.0,                     2.05319162663775882187,
                                  1.6763848301838038494,   0.68976733498510000455,
                                  0.14810397642748007459,  0.0151986665636164571966,
                                  5.475938084995344946e-4, 1.05075007164441684324e-9};
  static constexpr double e[8] = {6.6579046435011037772,    5.4637849111641143699,
                                  1.7848265399172913358,    0.29656057182850489123,
                                  0.026532189526576123093,  0.0012426609473880784386,
                                  2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {1.0,                      0.59983220655588793769,
                                  0.13692988092273580531,   0.0148753612908506148525,
                                  7.868691311456132591e-4,  1.8463183175100546818e-5,
                                  1.4215117583164458887e-7, 2.04426310338993978564e-15};

  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, 8, r) / poly(b, 8, r);
  }
  double r = q < 0.0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = poly(c, 8, r) / poly(d, 8, r);
  } else {
    r -= 5.0;
    value = poly(e, 8, r) / poly(f, 8, r);
  }
  return q < 0.0 ? -value : value;
}

std::uint64_t spawn_substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed ^ kSubstreamSalt) + (index + 1) * kSubstreamStride);
}

WienerPath::WienerPath(double h, std::size_t n_steps, std::size_t channels,
                       std::vector<double> increments, std::uint64_t seed)
    : h_(h), n_steps_(n_steps), channels_(channels), increments_(std::move(increments)), seed_(seed) {
  if (!std::isfinite(h) || h <= 0.0) {
    throw Error(Errc::NonPositiveStep, "Wiener path step must be positive");
  }
  if (channels == 0) {
    throw Error(Errc::BadChannel, "a Wiener path needs at least one channel");
  }
  if (increments_.size() != n_steps * channels) {
    throw Error(Errc::DimensionMismatch, "increment table must hold n_steps * channels entries");
  }
}

double WienerPath::terminal_value(std::size_t a) const {
  if (a >= channels_) {
    throw Error(Errc::BadChannel, "channel " + std::to_string(a) + " out of range");
  }
  std::vector<double> column(n_steps_);
  for (std::size_t k = 0; k < n_steps_; ++k) {
    column[k] = increment(k, a);
  }
  return pairwise_sum(column);
}

WienerPath generate_path(std::uint64_t seed, double h, std::size_t n_steps, std::size_t channels) {
  if (n_steps == 0) {
    throw Error(Errc::ZeroSteps, "Wiener path needs at least one step");
  }
  if (!std::isfinite(h) || h <= 0.0) {
    throw Error(Errc::NonPositiveStep, "Wiener path step must be positive");
  }
  if (channels == 0) {
    throw Error(Errc::BadChannel, "a Wiener path needs at least one channel");
  }
  const CounterStream stream(seed);
  const double scale = std::sqrt(h);
  std::vector<double> table(n_steps * channels);
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = scale * stream.normal(i);
  }
  return WienerPath(h, n_steps, channels, std::move(table), seed);
}

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.empty()) {
    return 0.0;
  }
  if (values.size() == 1) {
    return values[0];
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

WienerPath coarsen(const WienerPath& path, std::size_t factor) {
  if (factor < 2 || path.n_steps() % factor != 0) {
    throw Error(Errc::IndivisibleFactor, "coarsening factor " + std::to_string(factor) +
                                             " must be >= 2 and divide " +
                                             std::to_string(path.n_steps()));
  }
  const auto m = path.channels();
  const auto coarse_steps = path.n_steps() / factor;
  std::vector<double> table(coarse_steps * m);
  std::vector<double> block(factor);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t k = 0; k < coarse_steps; ++k) {
      for (std::size_t j = 0; j < factor; ++j) {
        block[j] = path.increment(k * factor + j, a);
      }
      table[k * m + a] = pairwise_sum(block);
    }
  }
  return WienerPath(path.h() * static_cast<double>(factor), coarse_steps, m, std::move(table),
                    path.seed());
}

void write_path_csv(std::ostream& out, const WienerPath& path, double t_start) {
  out << "step,s";
  for (std::size_t a = 0; a < path.channels(); ++a) {
    out << ",G_" << (a + 1);
  }
  out << '\n';
  for (std::size_t k = 0; k < path.n_steps(); ++k) {
    out << k << ',' << format_real(t_start + static_cast<double>(k) * path.h());
    for (std::size_t a = 0; a < path.channels(); ++a) {
      out << ',' << format_real(path.increment(k, a));
    }
    out << '\n';
  }
}

}  // namespace frachp
