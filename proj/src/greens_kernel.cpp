#include "lsweep/greens_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

#include "lsweep/special_functions.hpp"

namespace lsweep {

namespace {

constexpr cplx kI{0.0, 1.0};

// Derivative at 0 of the square-lattice zeta function sum' |k|^{-s}.
double lattice_zeta_derivative() {
  const double pi = std::numbers::pi;
  const double g = std::tgamma(0.25);
  return -0.5 * std::log(2.0 * pi) - std::log(g * g / (2.0 * pi * std::sqrt(2.0)));
}

// Adaptive Simpson on a smooth complex integrand.
cplx simpson_step(const std::function<cplx(double)>& f, double a, double b, cplx fa,
                  cplx fm, cplx fb, cplx whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const cplx flm = f(lm);
  const cplx frm = f(rm);
  const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const cplx delta = left + right - whole;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right);
  if (depth <= 0 || std::abs(delta) <= std::max(15.0 * tol, noise)) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b,
                      double tol) {
  const cplx fa = f(a);
  const cplx fb = f(b);
  const cplx fm = f(0.5 * (a + b));
  const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 30);
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// x Y1(x) + 2/pi without the cancellation of the closed form at small x.
double y1_regular(double x) {
  const double pi = std::numbers::pi;
  if (x > 2.0) return x * special::bessel_y1(x) + 2.0 / pi;
  const double q = -0.25 * x * x;
  double term = 0.5 * x;  // (x/2)^(2k+1) / (k! (k+1)!) (-1)^k
  double psi_k1 = -std::numbers::egamma;
  double psi_k2 = 1.0 - std::numbers::egamma;
  double sum = 0.0;
  for (int k = 0; k < 40; ++k) {
    sum += (psi_k1 + psi_k2) * term;
    term *= q / ((k + 1.0) * (k + 2.0));
    psi_k1 += 1.0 / (k + 1);
    psi_k2 += 1.0 / (k + 2);
  }
  return x * (2.0 / pi * std::log(0.5 * x) * special::bessel_j1(x) - sum / pi);
}

}  // namespace

cplx greens_value(double r, double omega) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("greens_value needs r > 0");
  }
  return -0.25 * kI * special::hankel1_0(omega * r);
}

cplx greens_cell_integral(double h, double omega) {
  // By symmetry the square is eight copies of the triangle 0 <= theta <= pi/4,
  // 0 <= r <= h / (2 cos theta). The radial integral is closed-form:
  // int_0^R H0(w r) r dr = R H1(w R) / w + 2i / (pi w^2).
  auto radial = [&](double theta) -> cplx {
    const double R = 0.5 * h / std::cos(theta);
    const double x = omega * R;
    const cplx inner = cplx(x * special::bessel_j1(x), y1_regular(x)) / (omega * omega);
    return -0.25 * kI * inner;
  };
  const double scale = std::abs(radial(0.0)) * std::numbers::pi / 4.0;
  return 8.0 * adaptive_simpson(radial, 0.0, std::numbers::pi / 4.0, 1e-15 * scale);
}

cplx greens_corrected_diagonal(double h, double omega) {
  const double pi = std::numbers::pi;
  const double log_part = (std::log(h) + lattice_zeta_derivative()) / (2.0 * pi);
  const cplx regular = (std::log(0.5 * omega) + std::numbers::egamma) / (2.0 * pi) -
                       0.25 * kI;
  return h * h * (log_part + regular);
}

int efficient_transform_length(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

struct KernelTable::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

KernelTable::KernelTable(const Grid& grid, KernelOptions options)
    : grid_(grid), diagonal_(0.0) {
  const int nx = grid.nx();
  const int nz = grid.nz();
  const double h = grid.h();
  const double omega = grid.omega();

  px_ = efficient_transform_length(2 * nx - 1);
  pz_ = efficient_transform_length(2 * nz - 1);
  const std::size_t points = static_cast<std::size_t>(px_) * pz_;
  if (points > options.max_transform_points) {
    std::ostringstream msg;
    msg << "padded transform " << px_ << "x" << pz_ << " exceeds the budget of "
        << options.max_transform_points << " points";
    throw std::invalid_argument(msg.str());
  }

  diagonal_ = options.diagonal == DiagonalRule::CellAverage
                  ? greens_cell_integral(h, omega)
                  : greens_corrected_diagonal(h, omega);

  // G is radial, so one evaluation per |offset| pair (a, b) with a <= b
  // serves all eight reflections.
  samples_.assign(static_cast<std::size_t>(2 * nx - 1) * (2 * nz - 1), cplx{});
  const int reach = std::max(nx, nz);
  for (int b = 0; b < reach; ++b) {
    for (int a = 0; a <= b; ++a) {
      const cplx v = (a == 0 && b == 0)
                         ? diagonal_
                         : h * h * greens_value(h * std::hypot(double(a), double(b)), omega);
      for (int swap = 0; swap < 2; ++swap) {
        const int ai = swap ? b : a;
        const int aj = swap ? a : b;
        if (ai >= nx || aj >= nz) continue;
        for (int si : {-1, 1}) {
          for (int sj : {-1, 1}) {
            samples_[slot(si * ai, sj * aj)] = v;
          }
        }
      }
    }
  }

  plans_ = std::make_unique<Plans>();
  std::vector<cplx> buffer(points, cplx{});
  auto* raw = reinterpret_cast<fftw_complex*>(buffer.data());
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->forward = fftw_plan_dft_2d(pz_, px_, raw, raw, FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_dft_2d(pz_, px_, raw, raw, FFTW_BACKWARD, flags);
  }
  if (!plans_->forward || !plans_->backward) {
    throw std::runtime_error("FFTW planning failed");
  }

  for (int dj = -(nz - 1); dj <= nz - 1; ++dj) {
    const int wj = (dj + pz_) % pz_;
    for (int di = -(nx - 1); di <= nx - 1; ++di) {
      const int wi = (di + px_) % px_;
      buffer[static_cast<std::size_t>(wj) * px_ + wi] = samples_[slot(di, dj)];
    }
  }
  fftw_execute_dft(plans_->forward, raw, raw);
  // Fold the inverse-transform normalisation into the stored spectrum.
  const double inv = 1.0 / static_cast<double>(points);
  for (cplx& c : buffer) c *= inv;
  spectrum_ = std::move(buffer);
}

KernelTable::~KernelTable() = default;
KernelTable::KernelTable(KernelTable&&) noexcept = default;
KernelTable& KernelTable::operator=(KernelTable&&) noexcept = default;

cplx KernelTable::sample(int di, int dj) const {
  if (std::abs(di) >= grid_.nx() || std::abs(dj) >= grid_.nz()) {
    std::ostringstream msg;
    msg << "kernel offset (" << di << ", " << dj << ") outside the table";
    throw std::out_of_range(msg.str());
  }
  return samples_[slot(di, dj)];
}

cplx KernelTable::value(int di, int dj) const {
  if (std::abs(di) < grid_.nx() && std::abs(dj) < grid_.nz()) {
    return samples_[slot(di, dj)];
  }
  const double h = grid_.h();
  return h * h * greens_value(h * std::hypot(double(di), double(dj)), grid_.omega());
}

Field KernelTable::convolve(const Field& f) const {
  const int nx = grid_.nx();
  const int nz = grid_.nz();
  if (f.size() != static_cast<Eigen::Index>(grid_.size())) {
    throw std::invalid_argument("convolve: field size does not match the grid");
  }
  std::vector<cplx> buffer(static_cast<std::size_t>(px_) * pz_, cplx{});
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      buffer[static_cast<std::size_t>(j) * px_ + i] = f[grid_.index(i, j)];
    }
  }
  auto* raw = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_execute_dft(plans_->forward, raw, raw);
  for (std::size_t k = 0; k < buffer.size(); ++k) buffer[k] *= spectrum_[k];
  fftw_execute_dft(plans_->backward, raw, raw);
  Field out(f.size());
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      out[grid_.index(i, j)] = buffer[static_cast<std::size_t>(j) * px_ + i];
    }
  }
  return out;
}

Eigen::MatrixXcd KernelTable::submatrix(std::span<const Node> rows,
                                        std::span<const Node> cols) const {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      out(a, b) = sample(rows[a].i - cols[b].i, rows[a].j - cols[b].j);
    }
  }
  return out;
}

KernelTable build_kernel(const Grid& grid, KernelOptions options) {
  return KernelTable(grid, options);
}

}  // namespace lsweep
