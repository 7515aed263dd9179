#include "sqfn/field.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "sqfn/errors.hpp"

namespace sqfn {

namespace {

constexpr std::array<char, 6> kMagic = {'S', 'Q', 'F', 'N', '1', '\0'};

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void require_same_grid(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw ParameterError("fields live on different grids");
}

template <class T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  auto bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

template <class T>
bool get_le(std::istream& in, T& value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  value = std::bit_cast<T>(bits);
  return true;
}

}  // namespace

GridSpec::GridSpec(int dimension, int samples_per_axis, double period)
    : n_(dimension), N_(samples_per_axis), L_(period) {
  if (n_ < 2) throw ParameterError("grid dimension must be at least 2, got " + std::to_string(n_));
  if (N_ < 8 || !is_power_of_two(N_))
    throw ParameterError("samples per axis must be a power of two >= 8, got " + std::to_string(N_));
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw ParameterError("grid period must be positive and finite");
  h_ = L_ / static_cast<double>(N_);
  size_ = 1;
  cell_volume_ = 1.0;
  for (int a = 0; a < n_; ++a) {
    if (size_ > (std::size_t{1} << 34) / static_cast<std::size_t>(N_))
      throw ParameterError("grid too large");
    size_ *= static_cast<std::size_t>(N_);
    cell_volume_ *= h_;
  }
}

std::vector<int> GridSpec::unravel(std::size_t index) const {
  std::vector<int> idx(static_cast<std::size_t>(n_));
  for (int a = n_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(index % static_cast<std::size_t>(N_));
    index /= static_cast<std::size_t>(N_);
  }
  return idx;
}

std::size_t GridSpec::ravel(std::span<const int> multi_index) const {
  std::size_t flat = 0;
  for (int v : multi_index) flat = flat * static_cast<std::size_t>(N_) + static_cast<std::size_t>(v);
  return flat;
}

Field::Field(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ParameterError("field has " + std::to_string(values_.size()) + " samples, grid expects " +
                         std::to_string(grid_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw ParameterError("non-finite sample at flat index " + std::to_string(i));
    max_abs_ = std::max(max_abs_, std::abs(values_[i]));
  }
  mean_ = pairwise_sum(values_) / static_cast<double>(values_.size());
  mean_zero_ = std::abs(mean_) <= 1e-12 * max_abs_;
}

Field make_field(const GridSpec& grid, const Sampler& sampler) {
  const int n = grid.dimension();
  std::vector<double> values(grid.size());
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto idx = grid.unravel(i);
    for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(a)] = idx[static_cast<std::size_t>(a)] * grid.spacing();
    double v = sampler(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "sampler returned a non-finite value at grid index (";
      for (int a = 0; a < n; ++a) msg << (a ? "," : "") << idx[static_cast<std::size_t>(a)];
      msg << ")";
      throw ParameterError(msg.str());
    }
    values[i] = v;
  }
  return Field(grid, std::move(values));
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double lp_norm(const Field& f, double p) {
  std::vector<double> terms(f.size());
  if (p == 1.0) {
    std::transform(f.values().begin(), f.values().end(), terms.begin(), [](double v) { return std::abs(v); });
    return pairwise_sum(terms) * f.grid().cell_volume();
  }
  if (p == 2.0) {
    std::transform(f.values().begin(), f.values().end(), terms.begin(), [](double v) { return v * v; });
    return std::sqrt(pairwise_sum(terms) * f.grid().cell_volume());
  }
  throw ParameterError("lp_norm supports p = 1 and p = 2 only");
}

double inner_product(const Field& f, const Field& g) {
  require_same_grid(f, g);
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f[i] * g[i];
  return pairwise_sum(terms) * f.grid().cell_volume();
}

Field translate(const Field& f, std::span<const int> shift) {
  const auto& grid = f.grid();
  const int n = grid.dimension();
  const int N = grid.samples_per_axis();
  if (static_cast<int>(shift.size()) != n)
    throw ParameterError("shift has " + std::to_string(shift.size()) + " components, grid dimension is " +
                         std::to_string(n));
  std::vector<int> s(shift.begin(), shift.end());
  for (int& c : s) {
    if (c < 0 || c > N) throw ParameterError("shift component " + std::to_string(c) + " outside [0, N]");
    if (c == N) c = 0;
  }
  std::vector<double> out(f.size());
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < out.size(); ++i) {
    idx = grid.unravel(i);
    for (int a = 0; a < n; ++a) {
      auto& c = idx[static_cast<std::size_t>(a)];
      c = (c + s[static_cast<std::size_t>(a)]) % N;
    }
    out[grid.ravel(idx)] = f[i];
  }
  return Field(grid, std::move(out));
}

Field linear_combination(double a, const Field& f, double b, const Field& g) {
  require_same_grid(f, g);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f[i] + b * g[i];
  return Field(f.grid(), std::move(out));
}

Field scale(const Field& f, double c) {
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double& v : out) v *= c;
  return Field(f.grid(), std::move(out));
}

Field dilate_by_two(const Field& f) {
  const auto& coarse = f.grid();
  GridSpec fine(coarse.dimension(), 2 * coarse.samples_per_axis(), coarse.period());
  const int N = coarse.samples_per_axis();
  std::vector<double> out(fine.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto idx = fine.unravel(i);
    for (int& c : idx) c %= N;
    out[i] = f[coarse.ravel(idx)];
  }
  return Field(fine, std::move(out));
}

void write_field(const Field& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FieldIoError(FieldIoError::Kind::Open, "cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_le(out, static_cast<std::uint32_t>(f.grid().dimension()));
  put_le(out, static_cast<std::uint32_t>(f.grid().samples_per_axis()));
  put_le(out, f.grid().period());
  for (double v : f.values()) put_le(out, v);
  if (!out) throw FieldIoError(FieldIoError::Kind::Write, "write failed for " + path.string());
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FieldIoError(FieldIoError::Kind::Open, "cannot open " + path.string());
  std::array<char, 6> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw FieldIoError(FieldIoError::Kind::BadMagic, "bad magic in " + path.string());
  std::uint32_t n = 0, N = 0;
  double L = 0.0;
  if (!get_le(in, n) || !get_le(in, N) || !get_le(in, L))
    throw FieldIoError(FieldIoError::Kind::TruncatedPayload, "truncated header in " + path.string());
  std::optional<GridSpec> grid;
  try {
    grid.emplace(static_cast<int>(n), static_cast<int>(N), L);
  } catch (const ParameterError& e) {
    throw FieldIoError(FieldIoError::Kind::DimensionMismatch,
                       "dimension mismatch in " + path.string() + ": " + e.what());
  }
  std::vector<double> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!get_le(in, values[i]))
      throw FieldIoError(FieldIoError::Kind::TruncatedPayload,
                         "truncated payload in " + path.string() + ": " + std::to_string(i) + " of " +
                             std::to_string(values.size()) + " samples");
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw FieldIoError(FieldIoError::Kind::DimensionMismatch,
                       "dimension mismatch in " + path.string() + ": payload longer than N^n samples");
  return Field(*grid, std::move(values));
}

std::string format_real(double value) {
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FieldIoError(FieldIoError::Kind::Open, "cannot open " + path.string() + " for writing");
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto idx = grid.unravel(i);
    for (int c : idx) out << format_real(c * grid.spacing()) << ',';
    out << format_real(f[i]) << '\n';
  }
  if (!out) throw FieldIoError(FieldIoError::Kind::Write, "write failed for " + path.string());
}

}  // namespace sqfn
