#include "qdc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdc/errors.hpp"

namespace qdc {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

double squared_norm(const std::vector<Amplitude>& amps) {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

void check_finite(const std::vector<Amplitude>& amps) {
  for (const auto& a : amps) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("amplitude is not finite");
  }
}

}  // namespace

StateVector::StateVector(std::vector<Amplitude> amps) : amps_(std::move(amps)) {
  if (!is_power_of_two(amps_.size()))
    throw std::invalid_argument("state dimension must be a power of two");
  check_finite(amps_);
  const double n2 = squared_norm(amps_);
  if (std::abs(n2 - 1.0) > kNormTol)
    throw std::invalid_argument("state vector is not normalized");
  num_qubits_ = log2_exact(amps_.size());
}

StateVector StateVector::basis(int num_qubits, std::size_t index) {
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits, 0.0);
  amps.at(index) = 1.0;
  return StateVector(std::move(amps));
}

StateVector StateVector::from_real(const std::vector<double>& amps) {
  std::vector<Amplitude> c(amps.begin(), amps.end());
  return StateVector(std::move(c));
}

Unitary::Unitary(std::size_t dim, std::vector<Amplitude> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (!is_power_of_two(dim_))
    throw std::invalid_argument("unitary dimension must be a power of two");
  if (entries_.size() != dim_ * dim_)
    throw std::invalid_argument("unitary entry count does not match dimension");
  check_finite(entries_);
  num_qubits_ = log2_exact(dim_);
  // max |U†U − I| must be below tolerance
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      Amplitude s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k)
        s += std::conj(entries_[k * dim_ + r]) * entries_[k * dim_ + c];
      if (r == c) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  }
  if (worst > kUnitaryTol) throw VerifyError("matrix is not unitary");
}

Unitary Unitary::dagger() const {
  std::vector<Amplitude> out(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      out[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
  return Unitary(dim_, std::move(out));
}

Unitary Unitary::operator*(const Unitary& rhs) const {
  if (dim_ != rhs.dim_)
    throw std::invalid_argument("unitary dimension mismatch in product");
  std::vector<Amplitude> out(dim_ * dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = 0; k < dim_; ++k) {
      const Amplitude a = entries_[r * dim_ + k];
      if (a == Amplitude{}) continue;
      for (std::size_t c = 0; c < dim_; ++c)
        out[r * dim_ + c] += a * rhs.entries_[k * dim_ + c];
    }
  return Unitary(dim_, std::move(out));
}

Unitary gate_h() {
  const double s = 1.0 / std::sqrt(2.0);
  return Unitary(2, {s, s, s, -s});
}

Unitary gate_x() { return Unitary(2, {0, 1, 1, 0}); }

Unitary gate_ry(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Unitary(2, {c, -s, s, c});
}

Unitary gate_cnot() {
  return Unitary(4, {1, 0, 0, 0,  //
                     0, 1, 0, 0,  //
                     0, 0, 0, 1,  //
                     0, 0, 1, 0});
}

Unitary gate_identity(int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<Amplitude> e(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return Unitary(dim, std::move(e));
}

StateVector apply(const StateVector& state, const Unitary& u,
                  const std::vector<int>& targets) {
  const int n = state.num_qubits();
  const int k = static_cast<int>(targets.size());
  if (u.dim() != (std::size_t{1} << k))
    throw std::invalid_argument("gate dimension does not match target count");
  std::size_t mask = 0;
  std::vector<int> shift(k);
  for (int i = 0; i < k; ++i) {
    if (targets[i] < 0 || targets[i] >= n)
      throw std::invalid_argument("target qubit out of range");
    shift[i] = n - 1 - targets[i];
    const std::size_t bit = std::size_t{1} << shift[i];
    if (mask & bit) throw std::invalid_argument("duplicate target qubit");
    mask |= bit;
  }
  const std::size_t dim = state.dim();
  const std::size_t sub = std::size_t{1} << k;
  const auto& in = state.amplitudes();
  std::vector<Amplitude> out(dim, 0.0);
  // Position of gate-basis index s within the full register; bit i of s
  // (big-endian within the gate) lands on qubit targets[i].
  auto spread = [&](std::size_t s) {
    std::size_t pos = 0;
    for (int i = 0; i < k; ++i)
      pos |= ((s >> (k - 1 - i)) & 1u) << shift[i];
    return pos;
  };
  std::vector<std::size_t> offset(sub);
  for (std::size_t s = 0; s < sub; ++s) offset[s] = spread(s);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;  // enumerate each untouched-bit pattern once
    for (std::size_t r = 0; r < sub; ++r) {
      Amplitude acc = 0.0;
      for (std::size_t c = 0; c < sub; ++c)
        acc += u(r, c) * in[base | offset[c]];
      out[base | offset[r]] = acc;
    }
  }
  return StateVector(std::move(out));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Amplitude> out;
  out.reserve(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out.push_back(a[i] * b[j]);
  return StateVector(std::move(out));
}

Unitary tensor(const Unitary& a, const Unitary& b) {
  const std::size_t da = a.dim(), db = b.dim(), dim = da * db;
  std::vector<Amplitude> out(dim * dim);
  for (std::size_t ra = 0; ra < da; ++ra)
    for (std::size_t ca = 0; ca < da; ++ca)
      for (std::size_t rb = 0; rb < db; ++rb)
        for (std::size_t cb = 0; cb < db; ++cb)
          out[(ra * db + rb) * dim + (ca * db + cb)] = a(ra, ca) * b(rb, cb);
  return Unitary(dim, std::move(out));
}

Amplitude inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner product dimension mismatch");
  Amplitude s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

std::array<MeasurementBranch, 2> measure_qubit(const StateVector& state,
                                               int qubit) {
  const int n = state.num_qubits();
  if (qubit < 0 || qubit >= n)
    throw std::invalid_argument("measured qubit out of range");
  const std::size_t bit = std::size_t{1} << (n - 1 - qubit);
  const auto& amps = state.amplitudes();
  std::array<double, 2> p{0.0, 0.0};
  for (std::size_t i = 0; i < amps.size(); ++i)
    p[(i & bit) ? 1 : 0] += std::norm(amps[i]);
  std::array<MeasurementBranch, 2> branches;
  for (int o = 0; o < 2; ++o) {
    branches[o].outcome = o;
    branches[o].probability = std::clamp(p[o], 0.0, 1.0);
    if (p[o] > 0.0) {
      const double scale = 1.0 / std::sqrt(p[o]);
      std::vector<Amplitude> post(amps.size(), 0.0);
      for (std::size_t i = 0; i < amps.size(); ++i)
        if (((i & bit) ? 1 : 0) == o) post[i] = amps[i] * scale;
      branches[o].post_state.emplace(std::move(post));
    }
  }
  return branches;
}

}  // namespace qdc
