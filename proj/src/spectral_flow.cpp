#include "ebp/spectral_flow.hpp"

#include "ebp/bott.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace ebp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLevelShift = 1e-7;

struct StepMatch {
  int offset = 0;
  bool ok = false;
};

// b_j continues a_{j + offset}; unmatched values must sit near the window edges.
StepMatch match_sorted(const std::vector<double>& a, const std::vector<double>& b, double lo,
                       double hi, double max_step) {
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  std::vector<std::pair<double, int>> scored;
  for (int s = -3; s <= 3; ++s) {
    double worst = 0.0;
    bool valid = true;
    for (int j = 0; j < nb && valid; ++j) {
      const int i = j + s;
      if (i < 0) valid = b[j] - lo <= max_step;
      else if (i >= na) valid = hi - b[j] <= max_step;
      else worst = std::max(worst, std::abs(a[i] - b[j]));
    }
    for (int i = 0; i < na && valid; ++i) {
      const int j = i - s;
      if (j < 0) valid = a[i] - lo <= max_step;
      else if (j >= nb) valid = hi - a[i] <= max_step;
    }
    if (valid) scored.emplace_back(worst, s);
  }
  std::sort(scored.begin(), scored.end());
  StepMatch m;
  if (scored.empty() || scored[0].first > max_step) return m;
  m.offset = scored[0].second;
  m.ok = scored.size() == 1 || scored[1].first > max_step;
  return m;
}

}  // namespace

std::vector<double> uniform_loop_grid(int m, double z0, double z1) {
  if (m < 2) throw Error(ErrorKind::BadParameters, "loop grid needs at least two intervals");
  std::vector<double> z(m + 1);
  for (int j = 0; j <= m; ++j) z[j] = z0 + (z1 - z0) * j / m;
  return z;
}

EigenTracks track_eigenvalues(const SpectrumFn& spectrum, const std::vector<double>& z_grid,
                              double lo, double hi, int max_refine) {
  if (z_grid.size() < 2 || !(hi > lo)) throw Error(ErrorKind::BadParameters, "tracking grid or window");
  const double max_step = (hi - lo) / 16;
  EigenTracks t;
  t.lo = lo;
  t.hi = hi;
  auto push = [&](double z, std::vector<double> v) {
    std::sort(v.begin(), v.end());
    t.z.push_back(z);
    t.values.push_back(std::move(v));
  };
  push(z_grid[0], spectrum(z_grid[0]));
  for (std::size_t i = 1; i < z_grid.size(); ++i) {
    // Depth-first refinement of [z_{i-1}, z_i].
    std::vector<std::pair<double, int>> pending{{z_grid[i], 0}};
    std::vector<double> next_vals = spectrum(z_grid[i]);
    std::sort(next_vals.begin(), next_vals.end());
    std::map<double, std::vector<double>> cache{{z_grid[i], next_vals}};
    while (!pending.empty()) {
      auto [zb, depth] = pending.back();
      const std::vector<double>& b = cache.at(zb);
      StepMatch m = match_sorted(t.values.back(), b, lo, hi, max_step);
      if (m.ok) {
        t.z.push_back(zb);
        t.values.push_back(b);
        pending.pop_back();
        continue;
      }
      if (depth >= max_refine) throw Error(ErrorKind::TrackingAmbiguity, "eigenvalue continuation ambiguous");
      const double zm = 0.5 * (t.z.back() + zb);
      std::vector<double> v = spectrum(zm);
      std::sort(v.begin(), v.end());
      cache[zm] = v;
      pending.back().second = depth + 1;
      pending.emplace_back(zm, depth + 1);
    }
  }
  // Track identities along the accepted matches.
  int next_id = 0;
  t.track_id.resize(t.values.size());
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    t.track_id[k].assign(t.values[k].size(), -1);
    if (k > 0) {
      StepMatch m = match_sorted(t.values[k - 1], t.values[k], lo, hi, max_step);
      for (std::size_t j = 0; j < t.values[k].size(); ++j) {
        const int i = static_cast<int>(j) + m.offset;
        if (i >= 0 && i < static_cast<int>(t.values[k - 1].size())) t.track_id[k][j] = t.track_id[k - 1][i];
      }
    }
    for (int& id : t.track_id[k])
      if (id < 0) id = next_id++;
  }
  return t;
}

SpectralFlowReport spectral_flow(const EigenTracks& tracks, double level) {
  const double lev = level + kLevelShift;
  if (tracks.values.empty()) throw Error(ErrorKind::BadParameters, "empty tracks");
  if (!(lev > tracks.lo && lev < tracks.hi)) throw Error(ErrorKind::BadParameters, "level outside the window");
  for (double v : tracks.values.front())
    if (std::abs(v - lev) < 1e-10) throw Error(ErrorKind::LevelOnSpectrum, "eigenvalue at the nudged level");
  SpectralFlowReport r;
  r.engines.push_back("tracking");
  for (std::size_t k = 1; k < tracks.values.size(); ++k) {
    const auto& ids0 = tracks.track_id[k - 1];
    for (std::size_t j = 0; j < tracks.values[k].size(); ++j) {
      auto it = std::find(ids0.begin(), ids0.end(), tracks.track_id[k][j]);
      if (it == ids0.end()) continue;
      const double a = tracks.values[k - 1][it - ids0.begin()];
      const double b = tracks.values[k][j];
      int dir = 0;
      if (a <= lev && b > lev) dir = 1;
      if (b <= lev && a > lev) dir = -1;
      if (dir == 0) continue;
      const double s = (lev - a) / (b - a);
      r.crossings.push_back({tracks.z[k - 1] + s * (tracks.z[k] - tracks.z[k - 1]), dir});
      r.flow += dir;
    }
  }
  return r;
}

SpectralFlowReport shooting_flow(const IntervalFamily& family, const std::vector<double>& z_grid,
                                 double lo, double hi) {
  auto spec = [&](double z) { return shooting_eigenvalues(family(z), lo, hi); };
  SpectralFlowReport r = spectral_flow(track_eigenvalues(spec, z_grid, lo, hi));
  r.engines = {"shooting"};
  return r;
}

namespace {

struct RawCrossing {
  double z;
  int direction;
  double slope;
};

std::vector<RawCrossing> compression_crossings(const IntervalFamily& family,
                                               const std::vector<double>& z_grid, int n) {
  const double lev = kLevelShift;
  auto spec = [&](double z) { return compression_spectrum(family(z), n); };
  auto count = [lev](const RVector& e) {
    int c = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i) c += e(i) <= lev;
    return c;
  };
  auto nearest = [lev](const RVector& e) {
    Eigen::Index best = 0;
    (e.array() - lev).abs().minCoeff(&best);
    return e(best);
  };
  std::vector<RawCrossing> out;
  std::function<void(double, double, const RVector&, const RVector&)> locate =
      [&](double a, double b, const RVector& ea, const RVector& eb) {
        const int ca = count(ea), cb = count(eb);
        if (ca == cb) return;
        if (b - a < 2e-4) {
          const int dir = ca > cb ? 1 : -1;
          const double slope = (nearest(eb) - nearest(ea)) / (b - a);
          for (int j = 0; j < std::abs(ca - cb); ++j) out.push_back({0.5 * (a + b), dir, slope});
          return;
        }
        const double m = 0.5 * (a + b);
        const RVector em = spec(m);
        locate(a, m, ea, em);
        locate(m, b, em, eb);
      };
  RVector prev = spec(z_grid[0]);
  for (std::size_t i = 1; i < z_grid.size(); ++i) {
    RVector cur = spec(z_grid[i]);
    locate(z_grid[i - 1], z_grid[i], prev, cur);
    prev = std::move(cur);
  }
  return out;
}

}  // namespace

SpectralFlowReport compression_flow(const IntervalFamily& family, const std::vector<double>& z_grid,
                                    int n) {
  if (z_grid.size() < 2) throw Error(ErrorKind::BadParameters, "loop grid");
  for (double v : compression_spectrum(family(z_grid[0]), n))
    if (std::abs(v - kLevelShift) < 1e-10) throw Error(ErrorKind::LevelOnSpectrum, "eigenvalue at the nudged level");
  const auto coarse = compression_crossings(family, z_grid, n);
  auto fine = compression_crossings(family, z_grid, 2 * n);
  const double z_tol = 0.05 * std::abs(z_grid.back() - z_grid.front()) / (z_grid.size() - 1) + 1e-3;
  std::vector<bool> used(fine.size(), false);
  SpectralFlowReport r;
  r.engines = {"compression"};
  for (const auto& c : coarse) {
    for (std::size_t j = 0; j < fine.size(); ++j) {
      const auto& f = fine[j];
      if (used[j] || f.direction != c.direction || std::abs(f.z - c.z) > z_tol) continue;
      if (c.slope == 0.0 || std::abs(f.slope / c.slope - 1.0) > 0.25) continue;
      used[j] = true;
      r.crossings.push_back({c.z, c.direction});
      r.flow += c.direction;
      break;
    }
  }
  return r;
}

SpectralFlowReport interval_flow(const IntervalFamily& family, const std::vector<double>& z_grid,
                                 double lo, double hi, int n) {
  SpectralFlowReport s = shooting_flow(family, z_grid, lo, hi);
  SpectralFlowReport c = compression_flow(family, z_grid, n);
  s.engines = {"shooting", "compression"};
  s.agreement = s.flow == c.flow;
  return s;
}

// Cylinder engine.

CMatrix cylinder_f(const CylinderLoop& loop, double z, double y) {
  const int p = loop.fiber_dim;
  CMatrix f = CMatrix::Zero(p, p);
  for (const auto& [k, c] : loop.f_modes(z)) f += std::polar(1.0, k * y) * c;
  return f;
}

CMatrix cylinder_toeplitz(const CylinderLoop& loop, double z, int K) {
  const int p = loop.fiber_dim, nk = 2 * K + 1;
  CMatrix F = CMatrix::Zero(p * nk, p * nk);
  for (const auto& [d, c] : loop.f_modes(z))
    for (int a = 0; a < nk; ++a) {
      const int b = a - d;
      if (b >= 0 && b < nk) F.block(a * p, b * p, p, p) += c;
    }
  return F;
}

namespace {

// Unitary U with Ker of the far-end condition transported to x = 0 as {(X c, Y c)}, U = (X - Y)(X + Y)^{-1}.
CMatrix far_end_unitary(const CylinderLoop& loop, double lambda, int K) {
  if (!(std::abs(loop.g) > 0.0) || std::abs(loop.g.real()) > 1e-12 * std::abs(loop.g))
    throw Error(ErrorKind::NotSelfAdjointBC, "far-end condition s_- = g s_+ needs g purely imaginary");
  const int p = loop.fiber_dim, nk = 2 * K + 1;
  const CMatrix Ip = CMatrix::Identity(p, p);
  CMatrix Sigma = CMatrix::Zero(2 * p, 2 * p);
  Sigma.topRightCorner(p, p) = Ip;
  Sigma.bottomLeftCorner(p, p) = Ip;
  CMatrix N1(2 * p, p);
  N1 << Ip, loop.g * Ip;
  CMatrix U = CMatrix::Zero(p * nk, p * nk);
  for (int a = 0; a < nk; ++a) {
    const double k = a - K;
    CMatrix T = CMatrix::Zero(2 * p, 2 * p);
    T.topRightCorner(p, p) = -I1 * k * Ip;
    T.bottomLeftCorner(p, p) = I1 * k * Ip;
    CMatrix S = expm(-I1 * loop.length * Sigma * (lambda * CMatrix::Identity(2 * p, 2 * p) - T)) * N1;
    Eigen::HouseholderQR<CMatrix> qr(S);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(2 * p, p);
    CMatrix X = Q.topRows(p), Y = Q.bottomRows(p);
    U.block(a * p, a * p, p, p) = (X + Y).transpose().partialPivLu().solve((X - Y).transpose()).transpose();
  }
  return U;
}

CMatrix near_end_unitary(const CylinderLoop& loop, double z, int K, bool complement) {
  const CMatrix F = cylinder_toeplitz(loop, z, K);
  const CMatrix U = cayley(F);
  return complement ? CMatrix(-U) : U;
}

struct PhaseSample {
  RVector phase;
  CMatrix vecs;
  RVector weight;  // mass on modes |k| <= K / 2
};

PhaseSample phase_sample(const CMatrix& W, int K, int p) {
  CVector vals;
  CMatrix vecs;
  normal_eigen(W, vals, vecs);
  PhaseSample s;
  s.phase.resize(vals.size());
  s.weight = RVector::Zero(vals.size());
  for (Eigen::Index j = 0; j < vals.size(); ++j) {
    s.phase(j) = std::arg(vals(j));
    for (int a = 0; a < 2 * K + 1; ++a)
      if (std::abs(a - K) <= K / 2) s.weight(j) += vecs.col(j).segment(a * p, p).squaredNorm();
  }
  s.vecs = std::move(vecs);
  return s;
}

}  // namespace

CMatrix cylinder_phase_operator(const CylinderLoop& loop, double z, double lambda, int K, bool complement) {
  return near_end_unitary(loop, z, K, complement).adjoint() * far_end_unitary(loop, lambda, K);
}

namespace {

// Flows for N (sheet 0) and N^perp (sheet 1) from one set of eigenpairs: the phase operator of N^perp is -W.
std::vector<SpectralFlowReport> cylinder_flows(const CylinderLoop& loop, const CylinderOptions& opt,
                                               const std::vector<int>& sheets) {
  if (opt.K < 2 || opt.nz < 8) throw Error(ErrorKind::BadParameters, "cylinder truncation or loop grid");
  const int K = opt.K, p = loop.fiber_dim;
  const double dl = 1e-5, window = 0.5;
  const CMatrix U1 = far_end_unitary(loop, 0.0, K);
  const CMatrix U1d = far_end_unitary(loop, dl, K);
  auto sample = [&](double z) { return phase_sample(near_end_unitary(loop, z, K, false).adjoint() * U1, K, p); };
  auto shifted = [](double theta, int sheet) { return sheet == 0 ? theta : std::remainder(theta + kPi, 2 * kPi); };
  auto relevant = [&](const PhaseSample& S, Eigen::Index i) {
    if (S.weight(i) < 0.5) return false;
    for (int sh : sheets)
      if (std::abs(shifted(S.phase(i), sh)) < window) return true;
    return false;
  };
  // A sample is dirty when a near-zero eigenphase mixes physical and truncation-edge modes.
  auto dirty = [&](const PhaseSample& S) {
    for (Eigen::Index i = 0; i < S.phase.size(); ++i) {
      if (S.weight(i) < 0.02 || S.weight(i) > 0.98) continue;
      for (int sh : sheets)
        if (std::abs(shifted(S.phase(i), sh)) < 0.1) return true;
    }
    return false;
  };
  using Sink = std::vector<std::vector<Crossing>>;
  auto count_pairs = [&](double za, double zb, const PhaseSample& A, const PhaseSample& B,
                         const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs, Sink& sink) {
    for (std::size_t k = 0; k < sheets.size(); ++k)
      for (auto [i, j] : pairs) {
        const double ta = shifted(A.phase(i), sheets[k]), tb = shifted(B.phase(j), sheets[k]);
        if (std::abs(ta) >= window || std::abs(tb) >= window || (ta > 0) == (tb > 0)) continue;
        if (A.weight(i) < 0.98 || B.weight(j) < 0.98) continue;
        // d lambda / d z = -theta_z / theta_lambda.
        const PhaseSample D = phase_sample(near_end_unitary(loop, zb, K, false).adjoint() * U1d, K, p);
        Eigen::Index jd = 0;
        (D.vecs.adjoint() * B.vecs.col(j)).cwiseAbs().maxCoeff(&jd);
        const double theta_l = std::remainder(D.phase(jd) - B.phase(j), 2 * kPi) / dl;
        const int dir = (-(tb - ta) / theta_l) > 0 ? 1 : -1;
        sink[k].push_back({za + ta / (ta - tb) * (zb - za), dir});
      }
  };
  // Continuation by eigenvector overlap; returns whether any sample on the way was dirty.
  std::function<bool(double, double, const PhaseSample&, const PhaseSample&, int, Sink&)> step =
      [&](double za, double zb, const PhaseSample& A, const PhaseSample& B, int depth, Sink& sink) {
        const Eigen::MatrixXd O = (A.vecs.adjoint() * B.vecs).cwiseAbs();
        const Eigen::Index n = O.rows();
        std::vector<bool> taken(n, false);
        bool ambiguous = false;
        std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!relevant(A, i)) continue;
          Eigen::Index j = 0;
          if (O.row(i).maxCoeff(&j) < 0.9 || taken[j]) ambiguous = true;
          taken[j] = true;
          pairs.emplace_back(i, j);
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          if (!relevant(B, j) || taken[j]) continue;
          Eigen::Index i = 0;
          if (O.col(j).maxCoeff(&i) < 0.9) ambiguous = true;
          pairs.emplace_back(i, j);
        }
        const bool is_dirty = dirty(A) || dirty(B);
        if (ambiguous && !is_dirty && depth < 8) {
          const double zm = 0.5 * (za + zb);
          const PhaseSample M = sample(zm);
          const bool d1 = step(za, zm, A, M, depth + 1, sink);
          const bool d2 = step(zm, zb, M, B, depth + 1, sink);
          return d1 || d2;
        }
        if (is_dirty) return true;
        if (ambiguous) throw Error(ErrorKind::TrackingAmbiguity, "cylinder eigenphase continuation");
        count_pairs(za, zb, A, B, pairs, sink);
        return false;
      };
  // Pure states matched directly between two clean samples.
  auto bridge = [&](double za, double zb, const PhaseSample& A, const PhaseSample& B, Sink& sink) {
    auto pure = [&](const PhaseSample& S, Eigen::Index i) { return S.weight(i) > 0.98 && relevant(S, i); };
    const Eigen::MatrixXd O = (A.vecs.adjoint() * B.vecs).cwiseAbs();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    std::vector<bool> taken(O.cols(), false);
    auto best_pure = [&](Eigen::Index i) {
      Eigen::Index best = -1;
      for (Eigen::Index j = 0; j < O.cols(); ++j)
        if (B.weight(j) > 0.98 && (best < 0 || O(i, j) > O(i, best))) best = j;
      return best;
    };
    for (Eigen::Index i = 0; i < O.rows(); ++i) {
      if (!pure(A, i)) continue;
      const Eigen::Index j = best_pure(i);
      if (j < 0 || O(i, j) < 0.8 || taken[j])
        throw Error(ErrorKind::TrackingAmbiguity, "cylinder eigenphase bridge");
      taken[j] = true;
      pairs.emplace_back(i, j);
    }
    for (Eigen::Index j = 0; j < O.cols(); ++j)
      if (pure(B, j) && !taken[j]) throw Error(ErrorKind::TrackingAmbiguity, "cylinder eigenphase bridge");
    count_pairs(za, zb, A, B, pairs, sink);
  };

  std::vector<SpectralFlowReport> out(sheets.size());
  for (auto& r : out) r.engines = {"cylinder"};
  std::vector<double> zs = uniform_loop_grid(opt.nz, opt.z_offset, opt.z_offset + 2 * kPi);
  const PhaseSample first = sample(zs[0]);
  if (dirty(first)) throw Error(ErrorKind::TrackingAmbiguity, "loop start sample mixes modes");
  PhaseSample anchor = first, prev = first;
  double anchor_z = zs[0];
  bool dirty_since_anchor = false;
  Sink pending(sheets.size());
  for (int j = 1; j <= opt.nz; ++j) {
    PhaseSample cur = j == opt.nz ? first : sample(zs[j]);
    dirty_since_anchor = step(zs[j - 1], zs[j], prev, cur, 0, pending) || dirty_since_anchor;
    if (!dirty(cur)) {
      if (dirty_since_anchor) {
        pending.assign(sheets.size(), {});
        bridge(anchor_z, zs[j], anchor, cur, pending);
      }
      for (std::size_t k = 0; k < sheets.size(); ++k)
        for (const Crossing& c : pending[k]) {
          out[k].crossings.push_back(c);
          out[k].flow += c.direction;
        }
      pending.assign(sheets.size(), {});
      anchor = cur;
      anchor_z = zs[j];
      dirty_since_anchor = false;
    }
    prev = std::move(cur);
  }
  return out;
}

}  // namespace

SpectralFlowReport cylinder_flow_at(const CylinderLoop& loop, const CylinderOptions& opt, bool complement) {
  return cylinder_flows(loop, opt, {complement ? 1 : 0}).front();
}

std::pair<SpectralFlowReport, SpectralFlowReport> cylinder_flow_pair(const CylinderLoop& loop,
                                                                    const CylinderOptions& opt) {
  auto r = cylinder_flows(loop, opt, {0, 1});
  return {r[0], r[1]};
}

SpectralFlowReport cylinder_flow(const CylinderLoop& loop, const CylinderOptions& opt, bool complement) {
  SpectralFlowReport r = cylinder_flow_at(loop, opt, complement);
  CylinderOptions twice = opt;
  twice.K = 2 * opt.K;
  const SpectralFlowReport r2 = cylinder_flow_at(loop, twice, complement);
  r.agreement = r.flow == r2.flow;
  if (!r.agreement) throw Error(ErrorKind::TruncationInsufficient, "flow changes under K -> 2K");
  return r;
}

DiracData cylinder_dirac_data(const CylinderLoop& loop, double z, int ny) {
  std::vector<double> grid;
  std::vector<CMatrix> f, taus;
  const int p = loop.fiber_dim;
  for (int i = 0; i < ny; ++i) {
    const double y = 2 * kPi * i / ny;
    grid.push_back(y);
    f.push_back(cylinder_f(loop, z, y));
    taus.push_back(I1 * CMatrix::Identity(p, p));
    taus.push_back(-I1 * CMatrix::Identity(p, p));
  }
  return dirac_like(grid, f, taus);
}

int holonomy_chern(const std::function<CMatrix(int, int)>& frame, int ny, int nz) {
  std::vector<cplx> hol;
  for (int iz = 0; iz <= nz; ++iz) {
    cplx h = 1.0;
    for (int iy = 0; iy < ny; ++iy) {
      const CMatrix A = frame(iy, iz), B = frame((iy + 1) % ny, iz);
      if (A.cols() == 0) continue;
      const cplx d = (A.adjoint() * B).determinant();
      if (std::abs(d) < 1e-3) throw Error(ErrorKind::PhaseJump, "bundle frame too coarse in y");
      h *= d / std::abs(d);
    }
    hol.push_back(h);
  }
  return phase_winding(hol);
}

int symbol_winding(const BundleSymbolLoop& a, int ny, int nz) {
  std::vector<std::vector<BundleSymbol>> data;
  for (int iz = 0; iz <= nz; ++iz) data.push_back(a(2 * kPi * iz / nz));
  auto positive_frame = [&](int iy, int iz, int u) -> CMatrix {
    const BundleSymbol& s = data[iz].at(2 * iy + (u < 0 ? 1 : 0));
    if (s.value.rows() == 0) return CMatrix(s.frame.rows(), 0);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (s.value + s.value.adjoint()));
    const RVector& w = es.eigenvalues();
    if (w.cwiseAbs().minCoeff() < 1e-9) throw Error(ErrorKind::Singular, "boundary symbol not invertible");
    int neg = 0;
    while (neg < w.size() && w(neg) < 0) ++neg;
    return s.frame * es.eigenvectors().rightCols(w.size() - neg);
  };
  const int c_minus = holonomy_chern([&](int iy, int iz) { return positive_frame(iy, iz, -1); }, ny, nz);
  const int c_plus = holonomy_chern([&](int iy, int iz) { return positive_frame(iy, iz, 1); }, ny, nz);
  return c_plus - c_minus;
}

namespace {

BundleSymbolLoop restricted_tau(const CylinderLoop& loop, int ny, bool minus) {
  return [loop, ny, minus](double z) {
    const DiracData d = cylinder_dirac_data(loop, z, ny);
    std::vector<BundleSymbol> out;
    for (int iy = 0; iy < ny; ++iy)
      for (int k = 0; k < 2; ++k) {
        const CMatrix& F = (minus ? d.L_minus[iy] : d.L_plus[iy]).frame();
        const CMatrix r = F.adjoint() * d.tau_bar[2 * iy + k] * F;
        out.push_back({F, minus ? CMatrix(I1 * r) : CMatrix(-I1 * r)});
      }
    return out;
  };
}

}  // namespace

BundleSymbolLoop i_tau_minus(const CylinderLoop& loop, int ny) { return restricted_tau(loop, ny, true); }
BundleSymbolLoop minus_i_tau_plus(const CylinderLoop& loop, int ny) { return restricted_tau(loop, ny, false); }

namespace {

int boundary_loop_samples(const CylinderOptions& opt) { return std::max(64, opt.nz / 2); }

}  // namespace

DiracFlipReport verify_dirac_flip(const CylinderLoop& loop, const CylinderOptions& opt) {
  DiracFlipReport r;
  r.sf = cylinder_flow(loop, opt).flow;
  const int nz = boundary_loop_samples(opt);
  r.w_minus = symbol_winding(i_tau_minus(loop, opt.n), opt.n, nz);
  r.w_plus = symbol_winding(minus_i_tau_plus(loop, opt.n), opt.n, nz);
  r.equal = r.sf == r.w_minus && r.sf == r.w_plus;
  return r;
}

int upsilon_winding(const CylinderLoop& loop, const CylinderOptions& opt) {
  const int ny = opt.n;
  BundleSymbolLoop ups = [&loop, ny](double z) {
    const SampledSymbolFamily fam = dirac_family(cylinder_dirac_data(loop, z, ny));
    const ConditionReport rep = check_conditions(fam);
    if (!rep.special) throw Error(ErrorKind::NotSpecial, "boundary condition is not special");
    const std::vector<CMatrix> u = boundary_symbol_upsilon(fam);
    std::vector<BundleSymbol> out;
    for (const CMatrix& v : u) out.push_back({CMatrix::Identity(v.rows(), v.cols()), v});
    return out;
  };
  return symbol_winding(ups, ny, boundary_loop_samples(opt));
}

DifferenceReport verify_difference_theorem(const CylinderLoop& loop, const CylinderOptions& opt) {
  DifferenceReport r;
  r.rhs = upsilon_winding(loop, opt);
  auto [n, perp] = cylinder_flow_pair(loop, opt);
  r.sf_N = n.flow;
  r.sf_N_perp = perp.flow;
  r.lhs = r.sf_N - r.sf_N_perp;
  r.equal = r.lhs == r.rhs;
  return r;
}

SpectralFlowReport verify_index_zero_definite(const CylinderLoop& loop, const CylinderOptions& opt) {
  double margin = std::numeric_limits<double>::infinity();
  int sign = 0;
  for (int iz = 0; iz < opt.nz; ++iz) {
    const double z = opt.z_offset + 2 * kPi * iz / opt.nz;
    for (int iy = 0; iy < opt.n; ++iy) {
      const CMatrix h = I1 * cylinder_f(loop, z, 2 * kPi * iy / opt.n);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
      const int s = lo > 0 ? 1 : (hi < 0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) throw Error(ErrorKind::NotDefinite, "i f is not definite");
      sign = s;
      margin = std::min(margin, std::min(std::abs(lo), std::abs(hi)));
    }
  }
  SpectralFlowReport r = cylinder_flow(loop, opt);
  r.margin = margin;
  return r;
}

GluingReport verify_gluing_invariance(const IntervalFamily& beta_family, const std::vector<double>& tau_grid,
                                      double window) {
  GluingReport g;
  const IntervalModel base = beta_family(kPi);
  const IntervalModel partner = standard_partner(base);

  const std::vector<double> circle = circle_eigenvalues(glue_double(base), -window, window);
  const std::vector<double> folded = shooting_eigenvalues(fold_double(base), -window, window);
  if (circle.size() != folded.size()) {
    g.spectrum_mismatch = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t i = 0; i < circle.size(); ++i)
      g.spectrum_mismatch = std::max(g.spectrum_mismatch, std::abs(circle[i] - folded[i]));
  }

  g.kernels_lagrangian = true;
  const CMatrix joint = glue_pair(base, partner, 0.0).Sigma;
  for (double tau : tau_grid)
    g.kernels_lagrangian = g.kernels_lagrangian &&
                           is_lagrangian(IndefiniteForm{joint, static_cast<int>(joint.rows())},
                                         btau_kernel(base, partner, tau));

  const double lo = -4.0, hi = 4.0;
  auto tau_spec = [&](double tau) { return shooting_eigenvalues(glue_pair(base, partner, tau), lo, hi); };
  g.flow_tau = spectral_flow(track_eigenvalues(tau_spec, tau_grid, lo, hi)).flow;

  const std::vector<double> beta_grid = uniform_loop_grid(64);
  g.flow_beta_alone = shooting_flow(beta_family, beta_grid, lo, hi).flow;
  auto glued = [&](double tau) {
    return [&, tau](double beta) { return glue_pair(beta_family(beta), partner, tau); };
  };
  g.flow_beta_tau0 = shooting_flow(glued(0.0), beta_grid, lo, hi).flow;
  g.flow_beta_tau1 = shooting_flow(glued(1.0), beta_grid, lo, hi).flow;
  g.ok = g.flow_tau == 0 && g.flow_beta_tau0 == g.flow_beta_alone && g.flow_beta_tau1 == g.flow_beta_alone &&
         g.kernels_lagrangian && g.spectrum_mismatch <= 1e-6;
  return g;
}

CylinderLoop rotating_dirac_loop(int m, double M, double e, cplx g, const CMatrix& conj) {
  CylinderLoop loop;
  loop.fiber_dim = 2;
  loop.g = g;
  const CMatrix V = conj.size() == 0 ? CMatrix(CMatrix::Identity(2, 2)) : conj;
  loop.f_modes = [m, M, e, V](double z) {
    CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, -I1, I1, 0;
    s3 << 1, 0, 0, -1;
    std::map<int, CMatrix> c;
    auto add = [&c](int k, const CMatrix& A) {
      auto it = c.find(k);
      if (it == c.end()) c.emplace(k, A);
      else it->second += A;
    };
    add(0, I1 * (std::sin(z) * s1 + e * s2 + (M + std::cos(z)) * s3));
    add(m, I1 * (s2 / (2.0 * I1) + 0.5 * s3));
    add(-m, I1 * (-s2 / (2.0 * I1) + 0.5 * s3));
    std::vector<std::pair<int, CMatrix>> out;
    for (auto& [k, A] : c) out.emplace_back(k, V * A * V.adjoint());
    return out;
  };
  return loop;
}

CylinderLoop definite_dirac_loop(int sign, cplx g) {
  CylinderLoop loop;
  loop.fiber_dim = 2;
  loop.g = g;
  loop.f_modes = [sign](double z) {
    return std::vector<std::pair<int, CMatrix>>{
        {0, I1 * (sign * (1 + 0.5 * std::sin(z))) * CMatrix::Identity(2, 2)}};
  };
  return loop;
}

IntervalModel beta_twist(double beta, double length) {
  IntervalModel m;
  m.Sigma = CMatrix::Zero(2, 2);
  m.Sigma(0, 0) = 1;
  m.Sigma(1, 1) = -1;
  m.T = CMatrix::Zero(2, 2);
  m.length = length;
  CVector a(2), b(2);
  a << 1, 1;
  b << 1, std::polar(1.0, beta);
  m.N0 = subspace_from_columns(a);
  m.N1 = subspace_from_columns(b);
  return m;
}

IntervalModel beta_twist_rotated(double beta, double length) {
  IntervalModel m;
  m.Sigma = CMatrix::Zero(2, 2);
  m.Sigma(0, 1) = m.Sigma(1, 0) = 1;
  m.T = CMatrix::Zero(2, 2);
  m.length = length;
  CVector a(2), b(2);
  a << 0, 1;
  const cplx e = std::polar(1.0, beta);
  b << 1.0 - e, 1.0 + e;
  m.N0 = subspace_from_columns(a);
  m.N1 = subspace_from_columns(b);
  return m;
}

}  // namespace ebp
